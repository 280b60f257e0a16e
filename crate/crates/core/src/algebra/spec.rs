use std::fmt;

use crate::coeff::ScalarRing;
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::lattice::{kernel_mixed, IntMatrix};
use crate::{Int, Sublattice};

/// A quantum torus `F∗A` of rank `n`: generators `u_1 … u_n` with
/// `u_i u_j = q_ij u_j u_i`, each `q_ij` recorded additively as a value
/// group element `g_ij` with `g_ii = 0` and `g_ji = -g_ij`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    rank: usize,
    ring: ScalarRing,
    g: Vec<GammaElement>,
}

impl AlgebraSpec {
    /// The commutative Laurent polynomial algebra of rank `n`.
    pub fn zero(rank: usize, torsion_order: u64, free_params: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("algebra rank must be at least 1".into()));
        }
        if torsion_order == 0 {
            return Err(Error::Precondition("torsion order must be at least 1".into()));
        }
        let ring = ScalarRing::new(torsion_order, free_params);
        let zero = ring.gamma_zero();
        Ok(Self {
            rank,
            ring,
            g: vec![zero; rank * rank],
        })
    }

    /// Builds a spec from upper-triangular entries `(i, j, g_ij)`, 0-based
    /// with `i < j`. Unlisted pairs commute.
    pub fn from_upper(
        rank: usize,
        torsion_order: u64,
        free_params: usize,
        entries: &[(usize, usize, GammaElement)],
    ) -> Result<Self> {
        let mut spec = Self::zero(rank, torsion_order, free_params)?;
        for (i, j, g) in entries {
            if i >= j {
                return Err(Error::Precondition(format!(
                    "entry ({}, {}) must satisfy i < j",
                    i + 1,
                    j + 1
                )));
            }
            spec.set(*i, *j, g.clone())?;
        }
        Ok(spec)
    }

    /// Sets `g_ij` (and `g_ji = -g_ij`).
    pub fn set(&mut self, i: usize, j: usize, g: GammaElement) -> Result<()> {
        if i >= self.rank || j >= self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: i.max(j) + 1,
            });
        }
        if i == j {
            return Err(Error::Precondition("q_ii is fixed to 1".into()));
        }
        if !self.ring.accepts(&g) {
            return Err(Error::ShapeMismatch {
                n1: self.torsion_order(),
                m1: self.free_params(),
                n2: g.torsion_order(),
                m2: g.params(),
            });
        }
        self.g[j * self.rank + i] = -&g;
        self.g[i * self.rank + j] = g;
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_order(&self) -> u64 {
        self.ring.torsion_order()
    }

    pub fn free_params(&self) -> usize {
        self.ring.params()
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    /// `g_ij` (0-based).
    pub fn q(&self, i: usize, j: usize) -> &GammaElement {
        &self.g[i * self.rank + j]
    }

    pub fn is_commutative_algebra(&self) -> bool {
        self.g.iter().all(GammaElement::is_zero)
    }

    fn check_len(&self, v: &[i64]) {
        assert_eq!(v.len(), self.rank, "exponent vector length must equal the rank");
    }

    /// `Σ_{i<j} w(i, j) · g_ij`.
    fn combine(&self, mut w: impl FnMut(usize, usize) -> i64) -> GammaElement {
        let n = self.torsion_order() as i128;
        let mut tors: i128 = 0;
        let mut free = vec![0i64; self.free_params()];
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let k = w(i, j);
                if k == 0 {
                    continue;
                }
                let g = self.q(i, j);
                tors = (tors + k as i128 * g.tors() as i128).rem_euclid(n);
                for (f, e) in free.iter_mut().zip(g.free()) {
                    *f += k * e;
                }
            }
        }
        GammaElement::new(self.torsion_order(), tors as i64, free)
    }

    /// The commutator bicharacter `β(a, b) = Σ_{i,j} a_i b_j g_ij`:
    /// `x̄^a x̄^b = β(a, b) · x̄^b x̄^a`.
    pub fn beta(&self, a: &[i64], b: &[i64]) -> GammaElement {
        self.check_len(a);
        self.check_len(b);
        self.combine(|i, j| a[i] * b[j] - a[j] * b[i])
    }

    /// The normal-ordering cocycle `λ(a, b) = Σ_{i>j} a_i b_j g_ij`, so that
    /// `x̄^a x̄^b = λ(a, b) · x̄^{a+b}` with `x̄^a = x̄_1^{a_1} ⋯ x̄_n^{a_n}`.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> GammaElement {
        self.check_len(a);
        self.check_len(b);
        // i > j with g_ij = -g_ji: rewritten over pairs (j < i)
        self.combine(|j, i| -(a[i] * b[j]))
    }

    /// Group commutator of the units `x̄^a` and `x̄^b`; a scalar, equal to
    /// `β(a, b)`.
    pub fn commutator_units(&self, a: &[i64], b: &[i64]) -> GammaElement {
        self.beta(a, b)
    }

    /// First pair of basis vectors of `b` that fail to commute, if any.
    pub fn noncommuting_pair(&self, b: &Sublattice) -> Result<Option<(usize, usize)>> {
        if b.ambient_rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: b.ambient_rank(),
            });
        }
        let rows = b.to_i64_rows()?;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if !self.beta(&rows[i], &rows[j]).is_zero() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `F∗B` is commutative.
    pub fn is_commutative_sublattice(&self, b: &Sublattice) -> Result<bool> {
        Ok(self.noncommuting_pair(b)?.is_none())
    }

    /// The radical `{a : β(a, e_i) = 0 for all i}`; the support lattice of
    /// the center.
    pub fn center_lattice(&self) -> Sublattice {
        let n = self.rank;
        let m = self.free_params();
        let mut free_rows = Vec::new();
        let mut tors_rows = Vec::new();
        for i in 0..n {
            for p in 0..m {
                free_rows.push((0..n).map(|k| self.q(k, i).free()[p]).collect::<Vec<i64>>());
            }
            tors_rows.push((0..n).map(|k| self.q(k, i).tors() as i64).collect::<Vec<i64>>());
        }
        let g_free = IntMatrix::<Int>::from_i64_rows(n, &free_rows).expect("uniform rows");
        let g_tors = IntMatrix::<Int>::from_i64_rows(n, &tors_rows).expect("uniform rows");
        kernel_mixed(&g_free, &g_tors, &Int::from(self.torsion_order()))
            .expect("well-formed congruence system")
    }

    /// The hypothesis "the algebra has center exactly the ground field".
    pub fn has_trivial_center(&self) -> bool {
        self.center_lattice().is_zero()
    }

    /// The spec in the basis given by the rows of the unimodular `u`:
    /// `g'_kl = β(u_k, u_l)`.
    pub fn rebase(&self, u: &IntMatrix<Int>) -> Result<Self> {
        if u.rows() != self.rank || u.cols() != self.rank || !u.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let rows = u.to_i64_rows()?;
        self.gram(&rows)
    }

    /// Spec on the span of `rows` with `g'_kl = β(rows_k, rows_l)`.
    pub(crate) fn gram(&self, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let mut out = Self::zero(r.max(1), self.torsion_order(), self.free_params())?;
        out.rank = r;
        out.g.truncate(r * r);
        for k in 0..r {
            for l in k + 1..r {
                out.set(k, l, self.beta(&rows[k], &rows[l]))?;
            }
        }
        Ok(out)
    }

    /// Raises the cocycle to the `s`-th power on the block of generators
    /// beyond the first `r`: `g'_ij = s·g_ij` when `r < i < j`, unchanged
    /// whenever one index is at most `r` (1-based).
    pub fn power_cocycle_spec(&self, r: usize, s: u64) -> Result<Self> {
        if r > self.rank {
            return Err(Error::Precondition(format!(
                "split rank {r} exceeds algebra rank {}",
                self.rank
            )));
        }
        if s == 0 {
            return Err(Error::Precondition("power must be positive".into()));
        }
        let mut out = self.clone();
        for i in r..self.rank {
            for j in i + 1..self.rank {
                out.set(i, j, self.q(i, j).scale(s as i64))?;
            }
        }
        Ok(out)
    }

    /// The subalgebra `F∗B` presented on `B`'s HNF basis. A zero lattice
    /// yields a rank-0 spec (the ground field).
    pub fn sub_spec(&self, b: &Sublattice) -> Result<Self> {
        if b.ambient_rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: b.ambient_rank(),
            });
        }
        self.gram(&b.to_i64_rows()?)
    }
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AlgebraSpec(n={}, N={}, m={}",
            self.rank,
            self.torsion_order(),
            self.free_params()
        )?;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if !self.q(i, j).is_zero() {
                    write!(f, ", g{}{}={:?}", i + 1, j + 1, self.q(i, j))?;
                }
            }
        }
        write!(f, ")")
    }
}
