use std::collections::HashMap;
use std::sync::Arc;

use super::matrix::{twist, ElementMatrix};
use super::{ModuleAction, ModuleVector};
use crate::algebra::{AlgebraSpec, Rebasing, TorusElement};
use crate::error::{Error, Result};
use crate::scalar::ExactRational;
use crate::{IntMatrix, Sublattice};

/// A module over `F∗A` that is free of rank `d` over the commutative
/// subalgebra `F∗C`.
///
/// The split is a basis `u_1 … u_n` of `Z^n` whose first `r` rows span `C`;
/// all internal data lives in the presentation with generators
/// `y_k = x̄^{u_k}`. Each remaining generator acts semilinearly,
/// `y_j · m = A_j τ_j(m)`, where `τ_j` is conjugation by `y_j` on `F∗C`.
#[derive(Clone, Debug)]
pub struct CFiniteModule<Q: ExactRational> {
    spec: Arc<AlgebraSpec>,
    rebasing: Rebasing,
    split: IntMatrix,
    r: usize,
    d: usize,
    actions: Vec<ElementMatrix<Q>>,
    inverses: Vec<Option<ElementMatrix<Q>>>,
}

/// Result of [`CFiniteModule::check_consistency`]; pairs are 1-based local
/// generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub failing_pairs: Vec<(usize, usize)>,
    pub non_invertible: Vec<usize>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failing_pairs.is_empty() && self.non_invertible.is_empty()
    }
}

/// Result of [`CFiniteModule::exterior_top`].
#[derive(Clone, Debug)]
pub struct ExteriorReport<Q: ExactRational> {
    pub exponent: usize,
    pub determinants: Vec<TorusElement<Q>>,
    pub failing_pairs: Vec<(usize, usize)>,
    /// Whether the determinants define a consistent rank-one module over
    /// the cocycle raised to the `d`-th power.
    pub power_module_consistent: bool,
}

impl<Q: ExactRational> ExteriorReport<Q> {
    pub fn passed(&self) -> bool {
        self.failing_pairs.is_empty() && self.power_module_consistent
    }
}

fn check_c_supported<Q: ExactRational>(m: &ElementMatrix<Q>, r: usize) -> Result<()> {
    for row in m.rows() {
        for x in row {
            if x.support().any(|a| a[r..].iter().any(|&v| v != 0)) {
                return Err(Error::Precondition(
                    "action matrix entries must be supported in the commutative part".into(),
                ));
            }
        }
    }
    Ok(())
}

impl<Q: ExactRational> CFiniteModule<Q> {
    /// Builds a module from its split and action matrices; inverses are
    /// computed from unit determinants where possible.
    pub fn new(spec: &Arc<AlgebraSpec>, split: &IntMatrix, r: usize, actions: Vec<ElementMatrix<Q>>) -> Result<Self> {
        let inverses = actions
            .iter()
            .map(ElementMatrix::inverse)
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(spec, split, r, actions, inverses)
    }

    /// Builds a module with explicitly supplied inverses, which are checked.
    pub fn with_inverses(
        spec: &Arc<AlgebraSpec>,
        split: &IntMatrix,
        r: usize,
        actions: Vec<ElementMatrix<Q>>,
        inverses: Vec<ElementMatrix<Q>>,
    ) -> Result<Self> {
        if inverses.len() != actions.len() {
            return Err(Error::DimensionMismatch {
                expected: actions.len(),
                found: inverses.len(),
            });
        }
        for (a, b) in actions.iter().zip(&inverses) {
            if !a.mul(b)?.is_identity() || !b.mul(a)?.is_identity() {
                return Err(Error::Precondition("supplied inverse does not invert its action".into()));
            }
        }
        Self::assemble(spec, split, r, actions, inverses.into_iter().map(Some).collect())
    }

    fn assemble(
        spec: &Arc<AlgebraSpec>,
        split: &IntMatrix,
        r: usize,
        actions: Vec<ElementMatrix<Q>>,
        inverses: Vec<Option<ElementMatrix<Q>>>,
    ) -> Result<Self> {
        let n = spec.rank();
        if split.rows() != n || split.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: split.rows(),
            });
        }
        if r > n {
            return Err(Error::Precondition(format!("split rank {r} exceeds algebra rank {n}")));
        }
        let rebasing = Rebasing::new(spec, split)?;
        let local = rebasing.target().clone();
        for i in 0..r {
            for j in i + 1..r {
                if !local.q(i, j).is_zero() {
                    return Err(Error::Precondition(format!(
                        "split rows {} and {} do not commute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if actions.len() != n - r {
            return Err(Error::DimensionMismatch {
                expected: n - r,
                found: actions.len(),
            });
        }
        let d = actions.first().map_or(0, ElementMatrix::dim);
        for a in &actions {
            if a.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: a.dim(),
                });
            }
            if **a.spec() != *local {
                return Err(Error::SpecMismatch);
            }
            check_c_supported(a, r)?;
        }
        Ok(Self {
            spec: spec.clone(),
            rebasing,
            split: split.clone(),
            r,
            d,
            actions,
            inverses,
        })
    }

    /// A module over a split with `r = n` (no acting generators) of rank `d`.
    pub fn trivial_action(spec: &Arc<AlgebraSpec>, split: &IntMatrix, d: usize) -> Result<Self> {
        let module = Self::new(spec, split, spec.rank(), Vec::new())?;
        Ok(Self { d, ..module })
    }

    pub fn local_spec(&self) -> &Arc<AlgebraSpec> {
        self.rebasing.target()
    }

    pub fn rebasing(&self) -> &Rebasing {
        &self.rebasing
    }

    pub fn split(&self) -> &IntMatrix {
        &self.split
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `C` in the original coordinates.
    pub fn c_lattice(&self) -> Sublattice {
        Sublattice::span(&self.split.select_rows(0..self.r))
    }

    /// `A_j` for the local generator `j` (0-based, `r ≤ j < n`).
    pub fn action(&self, j: usize) -> &ElementMatrix<Q> {
        &self.actions[j - self.r]
    }

    pub fn inverse(&self, j: usize) -> Option<&ElementMatrix<Q>> {
        self.inverses[j - self.r].as_ref()
    }

    pub fn actions(&self) -> &[ElementMatrix<Q>] {
        &self.actions
    }

    /// Replaces `A_j`, recomputing its inverse.
    pub fn replace_action(&self, j: usize, a: ElementMatrix<Q>) -> Result<Self> {
        let mut actions = self.actions.clone();
        actions[j - self.r] = a;
        Self::new(&self.spec, &self.split, self.r, actions)
    }

    /// The `l`-th free generator.
    pub fn generator(&self, l: usize) -> ModuleVector<Q> {
        let local = self.local_spec();
        (0..self.d)
            .map(|k| if k == l { TorusElement::one(local) } else { TorusElement::zero(local) })
            .collect()
    }

    fn twist_vector(v: &ModuleVector<Q>, j: usize, power: i64) -> ModuleVector<Q> {
        v.iter().map(|x| twist(x, j, power)).collect()
    }

    /// `y_j · v` (`power = 1`) or `y_j^{-1} · v` (`power = -1`).
    pub fn apply_generator(&self, j: usize, power: i64, v: &ModuleVector<Q>) -> Result<ModuleVector<Q>> {
        if power >= 0 {
            self.action(j).apply(&Self::twist_vector(v, j, 1))
        } else {
            let inv = self.inverse(j).ok_or(Error::NotUnit)?;
            Ok(Self::twist_vector(&inv.apply(v)?, j, -1))
        }
    }

    /// `y^{a} · v` for a local exponent `a`, memoizing the tail products.
    fn act_local(
        &self,
        a: &[i64],
        v: &ModuleVector<Q>,
        memo: &mut HashMap<Vec<i64>, ModuleVector<Q>>,
    ) -> Result<ModuleVector<Q>> {
        let r = self.r;
        let tail = self.tail_action(&a[r..], v, memo)?;
        let mut c = a.to_vec();
        for x in c[r..].iter_mut() {
            *x = 0;
        }
        let mono = TorusElement::basis(self.local_spec(), &c);
        tail.iter().map(|x| mono.try_mul(x)).collect()
    }

    fn tail_action(
        &self,
        t: &[i64],
        v: &ModuleVector<Q>,
        memo: &mut HashMap<Vec<i64>, ModuleVector<Q>>,
    ) -> Result<ModuleVector<Q>> {
        let Some(pos) = t.iter().position(|&x| x != 0) else {
            return Ok(v.clone());
        };
        if let Some(hit) = memo.get(t) {
            return Ok(hit.clone());
        }
        let step = t[pos].signum();
        let mut rest = t.to_vec();
        rest[pos] -= step;
        let inner = self.tail_action(&rest, v, memo)?;
        let out = self.apply_generator(self.r + pos, step, &inner)?;
        memo.insert(t.to_vec(), out.clone());
        Ok(out)
    }

    /// Checks `A_i τ_i(A_j) = β(e_i, e_j) · A_j τ_j(A_i)` for all pairs of
    /// acting generators, and invertibility of every `A_j`.
    pub fn check_consistency(&self) -> Result<ConsistencyReport> {
        let n = self.spec.rank();
        let local = self.local_spec();
        let mut failing_pairs = Vec::new();
        for i in self.r..n {
            for j in i + 1..n {
                let lhs = self.action(i).mul(&self.action(j).twisted(i, 1))?;
                let q = TorusElement::monomial(local, &vec![0; n], local.ring().embed_unit(local.q(i, j)));
                let rhs = self.action(j).mul(&self.action(i).twisted(j, 1))?.scale(&q)?;
                if lhs != rhs {
                    failing_pairs.push((i + 1, j + 1));
                }
            }
        }
        let non_invertible = (self.r..n).filter(|&j| self.inverse(j).is_none()).map(|j| j + 1).collect();
        Ok(ConsistencyReport {
            failing_pairs,
            non_invertible,
        })
    }

    /// Top exterior power check: with `D_j = det A_j`,
    /// `D_i τ_i(D_j) = β(e_i, e_j)^d · D_j τ_j(D_i)`, and the `D_j` define a
    /// consistent rank-one module over the `d`-th power cocycle.
    pub fn exterior_top(&self) -> Result<ExteriorReport<Q>> {
        let n = self.spec.rank();
        let local = self.local_spec();
        let determinants: Vec<TorusElement<Q>> =
            self.actions.iter().map(ElementMatrix::determinant).collect::<Result<_>>()?;
        let det = |j: usize| &determinants[j - self.r];
        let mut failing_pairs = Vec::new();
        for i in self.r..n {
            for j in i + 1..n {
                let lhs = det(i).try_mul(&twist(det(j), i, 1))?;
                let q = local.ring().embed_unit(&local.q(i, j).scale(self.d as i64));
                let rhs = det(j).try_mul(&twist(det(i), j, 1))?.scale(&q);
                if lhs != rhs {
                    failing_pairs.push((i + 1, j + 1));
                }
            }
        }
        let power = Arc::new(local.power_cocycle_spec(self.r, self.d.max(1) as u64)?);
        let identity = IntMatrix::identity(n);
        let power_module_consistent = determinants
            .iter()
            .map(|x| ElementMatrix::from_rows(local, vec![vec![x.clone()]])?.rehome(&power))
            .collect::<Result<Vec<_>>>()
            .and_then(|acts| CFiniteModule::new(&power, &identity, self.r, acts))
            .and_then(|m| m.check_consistency())
            .map(|rep| rep.passed())
            .unwrap_or(false);
        Ok(ExteriorReport {
            exponent: self.d,
            determinants,
            failing_pairs,
            power_module_consistent,
        })
    }

    /// Block-diagonal sum of two modules over the same split.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if *self.spec != *other.spec {
            return Err(Error::SpecMismatch);
        }
        if self.split != other.split || self.r != other.r {
            return Err(Error::Precondition("direct sum requires the same split".into()));
        }
        let local = self.local_spec();
        let d = self.d + other.d;
        let block = |a: &ElementMatrix<Q>, b: &ElementMatrix<Q>| {
            let mut m = ElementMatrix::zero(local, d);
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    m.set(a.dim() + i, a.dim() + j, b.get(i, j).clone());
                }
            }
            m
        };
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| block(a, b))
            .collect();
        let inverses = self
            .inverses
            .iter()
            .zip(&other.inverses)
            .map(|(a, b)| Some(block(a.as_ref()?, b.as_ref()?)))
            .collect();
        let mut out = Self::assemble(&self.spec, &self.split, self.r, actions, inverses)?;
        out.d = d;
        Ok(out)
    }

    /// The same module in the basis given by the columns of an invertible
    /// `P`: `A'_j = P^{-1} A_j τ_j(P)`.
    pub fn base_change(&self, p: &ElementMatrix<Q>) -> Result<Self> {
        let p_inv = p.inverse()?.ok_or(Error::NotUnit)?;
        let n = self.spec.rank();
        let mut actions = Vec::new();
        let mut inverses = Vec::new();
        for j in self.r..n {
            let tp = p.twisted(j, 1);
            actions.push(p_inv.mul(self.action(j))?.mul(&tp)?);
            let inv = match self.inverse(j) {
                Some(b) => Some(tp.inverse()?.ok_or(Error::NotUnit)?.mul(b)?.mul(p)?),
                None => None,
            };
            inverses.push(inv);
        }
        Self::assemble(&self.spec, &self.split, self.r, actions, inverses)
    }
}

impl<Q: ExactRational> ModuleAction<Q> for CFiniteModule<Q> {
    fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    fn dim(&self) -> usize {
        self.d
    }

    fn c_lattices(&self) -> Vec<Sublattice> {
        vec![self.c_lattice()]
    }

    fn c_rank(&self) -> usize {
        self.r
    }

    fn component_ranks(&self) -> Vec<usize> {
        vec![self.r; self.d]
    }

    fn free_generators(&self) -> Vec<ModuleVector<Q>> {
        (0..self.d).map(|l| self.generator(l)).collect()
    }

    fn zero_vector(&self) -> ModuleVector<Q> {
        vec![TorusElement::zero(self.local_spec()); self.d]
    }

    fn act_monomials(&self, exps: &[Vec<i64>], v: &ModuleVector<Q>) -> Result<Vec<ModuleVector<Q>>> {
        if v.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: v.len(),
            });
        }
        let ring = self.spec.ring();
        let mut memo = HashMap::new();
        exps.iter()
            .map(|a| {
                if a.len() != self.spec.rank() {
                    return Err(Error::DimensionMismatch {
                        expected: self.spec.rank(),
                        found: a.len(),
                    });
                }
                let local_a = self.rebasing.to_target_coords(a);
                let c = ring.embed_unit(&-self.rebasing.discrepancy(&local_a));
                let w = self.act_local(&local_a, v, &mut memo)?;
                Ok(w.iter().map(|x| x.scale(&c)).collect())
            })
            .collect()
    }

    fn action_radius(&self) -> i64 {
        self.actions
            .iter()
            .map(ElementMatrix::radius)
            .chain(self.inverses.iter().flatten().map(ElementMatrix::radius))
            .max()
            .unwrap_or(0)
    }
}
