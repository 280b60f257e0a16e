//! Commutative subalgebras `F∗B`: maximal isotropic sublattices, virtual
//! complements of a commutative `C`, and the finite-length certificate.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::lattice::{kernel_mixed, LatticeIndex};
use crate::scalar::ExactRational;
use crate::{Int, IntMatrix, Sublattice, TorusElement};

/// Solutions `x ∈ Z^k` of a system of `Γ`-valued equations
/// `Σ_l x_l · coeffs[l] = 0`.
pub(crate) fn gamma_kernel(order: u64, unknowns: usize, equations: &[Vec<GammaElement>]) -> Sublattice {
    let mut free_rows = Vec::new();
    let mut tors_rows = Vec::new();
    for eq in equations {
        debug_assert_eq!(eq.len(), unknowns);
        let params = eq.first().map_or(0, GammaElement::params);
        for p in 0..params {
            free_rows.push(eq.iter().map(|g| g.free()[p]).collect::<Vec<i64>>());
        }
        tors_rows.push(eq.iter().map(|g| g.tors() as i64).collect::<Vec<i64>>());
    }
    let g_free = IntMatrix::from_i64_rows(unknowns, &free_rows).expect("uniform rows");
    let g_tors = IntMatrix::from_i64_rows(unknowns, &tors_rows).expect("uniform rows");
    kernel_mixed(&g_free, &g_tors, &Int::from(order)).expect("well-formed system")
}

fn unit_vector(n: usize, k: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[k] = 1;
    e
}

/// `{x : β(x, w) = 0 for every w in ws}`.
fn perp(spec: &AlgebraSpec, ws: &[Vec<i64>]) -> Sublattice {
    let n = spec.rank();
    let eqs: Vec<Vec<GammaElement>> = ws
        .iter()
        .map(|w| (0..n).map(|k| spec.beta(&unit_vector(n, k), w)).collect())
        .collect();
    gamma_kernel(spec.torsion_order(), n, &eqs)
}

fn span_rank(n: usize, rows: &[Vec<i64>]) -> usize {
    Sublattice::from_i64_rows(n, rows).map_or(0, |l| l.rank())
}

/// Result of the maximal commutative rank search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCommutative {
    pub rank: usize,
    pub witness: Sublattice,
    /// Whether `rank` is proven maximal.
    pub exact: bool,
    /// Proven upper bound from the individual free alternating forms.
    pub upper_bound: usize,
}

/// Upper bound `min_p (n − rank(G_p)/2)` over the free alternating forms.
fn isotropic_upper_bound(spec: &AlgebraSpec) -> usize {
    let n = spec.rank();
    let mut bound = n;
    for p in 0..spec.free_params() {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| spec.q(i, j).free()[p]).collect())
            .collect();
        let rank = span_rank(n, &rows);
        bound = bound.min(n - rank / 2);
    }
    bound
}

/// Greedy isotropic extension: keep adding a vector of `W^⊥` outside the
/// rational span of `W` until `W^⊥` and `W` have equal rank.
fn greedy_isotropic(spec: &AlgebraSpec, mut ws: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let n = spec.rank();
    loop {
        let p = perp(spec, &ws);
        let current = span_rank(n, &ws);
        if p.rank() == current {
            return ws;
        }
        let rows = p.to_i64_rows().expect("small perp basis");
        let next = rows.into_iter().find(|v| {
            let mut t = ws.clone();
            t.push(v.clone());
            span_rank(n, &t) > current
        });
        match next {
            Some(v) => ws.push(v),
            None => return ws,
        }
    }
}

const SEARCH_NODE_BUDGET: usize = 4096;

struct IsotropicSearch<'a> {
    spec: &'a AlgebraSpec,
    bound: i64,
    target: usize,
    best: Vec<Vec<i64>>,
    seen: HashSet<Vec<Vec<i64>>>,
    nodes: usize,
}

impl IsotropicSearch<'_> {
    fn candidates(&self, p: &Sublattice) -> Vec<Vec<i64>> {
        let n = self.spec.rank();
        let basis = p.to_i64_rows().expect("small perp basis");
        let k = basis.len();
        let width = (2 * self.bound + 1) as usize;
        let mut out = Vec::new();
        let mut coefs = vec![-self.bound; k];
        for _ in 0..width.pow(k as u32) {
            let first = coefs.iter().find(|&&c| c != 0);
            if first.is_some_and(|&c| c > 0) {
                let mut v = vec![0i64; n];
                for (c, b) in coefs.iter().zip(&basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += c * y;
                    }
                }
                out.push(v);
            }
            for c in coefs.iter_mut() {
                if *c < self.bound {
                    *c += 1;
                    break;
                }
                *c = -self.bound;
            }
        }
        out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
        out
    }

    fn visit(&mut self, ws: Vec<Vec<i64>>) {
        let n = self.spec.rank();
        if self.best.len() >= self.target || self.nodes >= SEARCH_NODE_BUDGET {
            return;
        }
        self.nodes += 1;
        let key = Sublattice::from_i64_rows(n, &ws)
            .and_then(|l| l.to_i64_rows())
            .unwrap_or_default();
        if !self.seen.insert(key) {
            return;
        }
        if ws.len() > self.best.len() {
            self.best = ws.clone();
        }
        let p = perp(self.spec, &ws);
        if p.rank() <= ws.len() {
            return;
        }
        for v in self.candidates(&p) {
            let mut t = ws.clone();
            t.push(v);
            if span_rank(n, &t) > ws.len() {
                self.visit(t);
            }
        }
    }
}

/// Largest rank of a sublattice `B` with `F∗B` commutative.
///
/// For a single free parameter and no torsion the answer is `n − h`, with
/// `2h` the rank of the alternating form, and the greedy extension is
/// exact. Otherwise a bounded search over small combinations of
/// orthogonal-complement bases is run and the result is exact only when it
/// meets the upper bound given by the individual forms.
pub fn max_commutative_rank(spec: &AlgebraSpec, search_bound: u32) -> Result<MaxCommutative> {
    if search_bound == 0 {
        return Err(Error::Precondition("search bound must be at least 1".into()));
    }
    let n = spec.rank();
    let upper_bound = isotropic_upper_bound(spec);
    let fast = spec.is_commutative_algebra() || (spec.torsion_order() == 1 && spec.free_params() == 1);
    let greedy = greedy_isotropic(spec, Vec::new());
    let (rows, exact) = if fast {
        debug_assert_eq!(greedy.len(), upper_bound);
        (greedy, true)
    } else {
        let mut search = IsotropicSearch {
            spec,
            bound: search_bound as i64,
            target: upper_bound,
            best: greedy,
            seen: HashSet::new(),
            nodes: 0,
        };
        search.visit(Vec::new());
        let exact = search.best.len() == upper_bound;
        (search.best, exact)
    };
    let mut witness = Sublattice::from_i64_rows(n, &rows)?;
    if spec.torsion_order() == 1 {
        witness = witness.saturation();
    }
    debug_assert!(spec.is_commutative_sublattice(&witness)?);
    Ok(MaxCommutative {
        rank: witness.rank(),
        witness,
        exact,
        upper_bound,
    })
}

/// Monomials `μ_j = x̄^{c_j}` in `F∗C` and an exponent `s` with the
/// `μ_j x̄_j^s` pairwise commuting; they span the virtual complement `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementSolution {
    pub s: u64,
    /// Coordinates of each `c_j` in the HNF basis of `C`.
    pub mu: Vec<Vec<i64>>,
    /// Generators `c_j + s·x_j` of `E` in the original coordinates.
    pub e_generators: Vec<Vec<i64>>,
    /// The completing basis vectors `x_j` in the original coordinates.
    pub tail: Vec<Vec<i64>>,
    /// HNF basis of `C`.
    pub c_basis: Vec<Vec<i64>>,
}

impl ComplementSolution {
    pub fn e_lattice(&self, n: usize) -> Result<Sublattice> {
        Sublattice::from_i64_rows(n, &self.e_generators)
    }

    /// `c_j` in the original coordinates.
    pub fn mu_exponent(&self, j: usize) -> Vec<i64> {
        let n = self.tail.first().map_or(0, Vec::len);
        let mut v = vec![0i64; n];
        for (c, row) in self.mu[j].iter().zip(&self.c_basis) {
            for (x, y) in v.iter_mut().zip(row) {
                *x += c * y;
            }
        }
        v
    }

    /// The units `μ_j · (x̄^{x_j})^s` as algebra elements.
    pub fn units<Q: ExactRational>(&self, spec: &Arc<AlgebraSpec>) -> Result<Vec<crate::algebra::TorusElement<Q>>> {
        (0..self.tail.len())
            .map(|j| {
                let mu = crate::algebra::TorusElement::basis(spec, &self.mu_exponent(j));
                let xj = crate::algebra::TorusElement::basis(spec, &self.tail[j]);
                mu.try_mul(&xj.pow(self.s as i64)?)
            })
            .collect()
    }
}

fn max_norm(v: &[Int]) -> Int {
    v.iter().map(|x| if x < &Int::from(0) { -x } else { x.clone() }).max().unwrap_or_default()
}

/// Shortens `p` (ignoring coordinate 0) by adding `±k` for kernel rows `k`
/// while the max-norm strictly drops.
fn greedy_shorten(mut p: Vec<Int>, kernel: &[Vec<Int>]) -> Vec<Int> {
    loop {
        let current = max_norm(&p[1..]);
        let mut improved = false;
        'outer: for k in kernel {
            for sign in [1i64, -1] {
                let cand: Vec<Int> = p.iter().zip(k).map(|(a, b)| a + Int::from(sign) * b).collect();
                if max_norm(&cand[1..]) < current {
                    p = cand;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return p;
        }
    }
}

/// From a lattice of `(w, c…)`, the HNF-reduced element with `w` equal to
/// the first pivot, if that pivot lies in column 0.
fn first_pivot_solution(lattice: &Sublattice) -> Option<(Int, Vec<Int>)> {
    if lattice.rank() == 0 {
        return None;
    }
    let b = lattice.basis();
    let pivot = b.get(0, 0).clone();
    if pivot == Int::from(0) {
        return None;
    }
    let rest: Vec<Vec<Int>> = (1..b.rows()).map(|i| b.row(i).to_vec()).collect();
    Some((pivot, greedy_shorten(b.row(0).to_vec(), &rest)))
}

/// Solves for the virtual complement of a commutative, saturated `C`.
///
/// In the local basis (HNF basis of `C` completed to a basis of `Z^n`) the
/// unknowns are `s` and `c_j ∈ Z^r` for each completing generator `x_j`;
/// the pair `(i, j)` requires `s·(β(c_i, x_j) − β(c_j, x_i)) + s²·β(x_i, x_j) = 0`.
/// Without torsion this is linear after dividing by `s`; with torsion each
/// `s ≤ s_max` is tried in turn.
pub fn complement_solver(spec: &AlgebraSpec, c: &Sublattice, s_max: u64) -> Result<ComplementSolution> {
    let n = spec.rank();
    if c.ambient_rank() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.ambient_rank(),
        });
    }
    if let Some((i, j)) = spec.noncommuting_pair(c)? {
        return Err(Error::Precondition(format!(
            "C is not commutative: basis vectors {} and {} do not commute",
            i + 1,
            j + 1
        )));
    }
    if !c.is_saturated() {
        return Err(Error::NotSaturated);
    }
    if s_max == 0 {
        return Err(Error::Precondition("s_max must be at least 1".into()));
    }
    let r = c.rank();
    let u = c.complete_basis()?.to_i64_rows()?;
    let local = spec.gram(&u)?;
    let t = n - r;
    let unknowns = 1 + t * r;
    let col = |j: usize, l: usize| 1 + j * r + l;

    // per tail pair: X-coefficients for c and the G term
    let mut pairs: Vec<(Vec<GammaElement>, GammaElement)> = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            let zero = local.ring().gamma_zero();
            let mut x = vec![zero.clone(); unknowns];
            for l in 0..r {
                x[col(i, l)] = local.q(l, r + j).clone();
                x[col(j, l)] = -local.q(l, r + i);
            }
            pairs.push((x, local.q(r + i, r + j).clone()));
        }
    }

    let found = if spec.torsion_order() == 1 {
        let eqs: Vec<Vec<GammaElement>> = pairs
            .iter()
            .map(|(x, g)| {
                let mut e = x.clone();
                e[0] = g.clone();
                e
            })
            .collect();
        let lattice = gamma_kernel(1, unknowns, &eqs);
        first_pivot_solution(&lattice).filter(|(s, _)| *s <= Int::from(s_max))
    } else {
        (1..=s_max).find_map(|s| {
            let si = s as i64;
            let eqs: Vec<Vec<GammaElement>> = pairs
                .iter()
                .map(|(x, g)| {
                    let mut e: Vec<GammaElement> = x.iter().map(|v| v.scale(si)).collect();
                    e[0] = g.scale(si * si);
                    e
                })
                .collect();
            let lattice = gamma_kernel(spec.torsion_order(), unknowns, &eqs);
            first_pivot_solution(&lattice)
                .filter(|(w, _)| *w == Int::from(1))
                .map(|(_, v)| (Int::from(s), v))
        })
    };
    let Some((s, sol)) = found else {
        return Err(Error::NoSolution { bound: s_max });
    };
    let s: i64 = s.try_into().map_err(|_| Error::Overflow)?;
    let sol: Vec<i64> = sol
        .iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
        .collect::<Result<_>>()?;

    let mu: Vec<Vec<i64>> = (0..t).map(|j| (0..r).map(|l| sol[col(j, l)]).collect()).collect();
    let e_generators: Vec<Vec<i64>> = (0..t)
        .map(|j| {
            let mut v: Vec<i64> = u[r + j].iter().map(|x| s * x).collect();
            for l in 0..r {
                for (x, y) in v.iter_mut().zip(&u[l]) {
                    *x += mu[j][l] * y;
                }
            }
            v
        })
        .collect();
    let solution = ComplementSolution {
        s: s as u64,
        mu,
        e_generators,
        tail: u[r..].to_vec(),
        c_basis: u[..r].to_vec(),
    };
    let e = solution.e_lattice(n)?;
    if !spec.is_commutative_sublattice(&e)? {
        return Err(Error::Precondition("complement solution failed verification".into()));
    }
    Ok(solution)
}

/// Checks that `E` is a commutative virtual complement of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementReport {
    pub rank_sum_ok: bool,
    pub index: LatticeIndex<Int>,
    pub e_commutative: bool,
    pub intersection: Sublattice,
}

impl ComplementReport {
    pub fn passed(&self) -> bool {
        self.rank_sum_ok && self.index.is_finite() && self.e_commutative
    }
}

pub fn verify_virtual_complement(spec: &AlgebraSpec, c: &Sublattice, e: &Sublattice) -> Result<ComplementReport> {
    let n = spec.rank();
    let sum = c.sum(e)?;
    Ok(ComplementReport {
        rank_sum_ok: c.rank() + e.rank() == n,
        index: sum.index_in(&Sublattice::full(n))?,
        e_commutative: spec.is_commutative_sublattice(e)?,
        intersection: c.intersection(e)?,
    })
}

/// Outcome of the finite-length test `gk + D = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomicCertificate {
    pub gk: usize,
    pub max_commutative: MaxCommutative,
    pub certified: bool,
}

impl HolonomicCertificate {
    pub fn verdict(&self) -> &'static str {
        if self.certified {
            "finite length"
        } else if !self.max_commutative.exact {
            "inconclusive (heuristic rank)"
        } else {
            "inconclusive"
        }
    }
}

pub fn holonomic_certificate(spec: &AlgebraSpec, gk_estimate: usize, search_bound: u32) -> Result<HolonomicCertificate> {
    let max_commutative = max_commutative_rank(spec, search_bound)?;
    let certified = max_commutative.exact && gk_estimate + max_commutative.rank == spec.rank();
    Ok(HolonomicCertificate {
        gk: gk_estimate,
        max_commutative,
        certified,
    })
}

/// Whether the units `μ_j x̄_j^s` of a solution commute pairwise under
/// element multiplication.
pub fn units_commute(spec: &Arc<AlgebraSpec>, sol: &ComplementSolution) -> Result<bool> {
    let units: Vec<TorusElement> = sol.units(spec)?;
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            if units[i].try_mul(&units[j])? != units[j].try_mul(&units[i])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
