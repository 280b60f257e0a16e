use std::collections::BTreeMap;

use num_rational::Ratio;

use super::{coordinates, vector_is_zero, vector_radius, CoordKey, ModuleAction, ModuleVector};
use crate::algebra::TorusElement;
use crate::commutative::max_commutative_rank;
use crate::elimination::SparseEchelon;
use crate::error::{Error, Result};
use crate::scalar::ExactRational;
use crate::Sublattice;

/// All `a ∈ Z^dim` with `‖a‖_∞ ≤ k`, ordered by max-norm and then
/// coordinatewise in the order `0, 1, −1, 2, −2, …`.
pub(crate) fn box_points(dim: usize, k: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-k..=k).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let key = |x: i64| if x > 0 { 2 * x - 1 } else { -2 * x };
    pts.sort_by_key(|p| {
        (
            p.iter().map(|x| x.abs()).max().unwrap_or(0),
            p.iter().map(|&x| key(x)).collect::<Vec<_>>(),
        )
    });
    pts
}

fn max_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Dimensions `d_k` and the extracted growth degree (`None` when the
/// finite differences did not stabilize).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub dims: Vec<usize>,
    pub degree: Option<usize>,
}

/// The least `j` such that the `j`-th finite differences of `dims` are
/// constant over their last three values.
pub fn growth_degree(dims: &[usize]) -> Option<usize> {
    let mut seq: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    let mut j = 0;
    while seq.len() >= 3 {
        let tail = &seq[seq.len() - 3..];
        if tail[0] == tail[1] && tail[1] == tail[2] {
            return Some(j);
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
        j += 1;
    }
    None
}

/// Growth of `d_k = dim span{x̄^a · v : ‖a‖_∞ ≤ k, v ∈ gens}` for
/// `k = 0 … k_max`.
pub fn gk_growth_estimate<Q: ExactRational, M: ModuleAction<Q> + ?Sized>(
    module: &M,
    gens: &[ModuleVector<Q>],
    k_max: usize,
) -> Result<GrowthReport> {
    if k_max < 3 {
        return Err(Error::Precondition("k_max must be at least 3".into()));
    }
    if gens.is_empty() || gens.iter().any(vector_is_zero) {
        return Err(Error::Precondition("growth needs nonzero vectors".into()));
    }
    let n = module.spec().rank();
    let pts = box_points(n, k_max as i64);
    let images: Vec<Vec<ModuleVector<Q>>> = gens
        .iter()
        .map(|v| module.act_monomials(&pts, v))
        .collect::<Result<_>>()?;
    let mut ech: SparseEchelon<CoordKey, Q> = SparseEchelon::new(module.spec().ring());
    let mut dims = Vec::with_capacity(k_max + 1);
    let mut label = 0;
    let mut start = 0;
    for k in 0..=k_max as i64 {
        let end = pts.iter().position(|p| max_norm(p) > k).unwrap_or(pts.len());
        for imgs in &images {
            for img in &imgs[start..end] {
                ech.insert(coordinates(img), label);
                label += 1;
            }
        }
        start = end;
        dims.push(ech.rank());
    }
    let degree = growth_degree(&dims);
    Ok(GrowthReport { dims, degree })
}

/// Searches for a nonzero `γ ∈ F∗B` with support coordinates in
/// `[−deg_bound, deg_bound]^{rank B}` and `γ · v = 0`. A witness is
/// returned in the original presentation after re-checking it by direct
/// action.
pub fn torsion_search<Q: ExactRational, M: ModuleAction<Q> + ?Sized>(
    module: &M,
    b: &Sublattice,
    v: &ModuleVector<Q>,
    deg_bound: u32,
) -> Result<Option<TorusElement<Q>>> {
    let spec = module.spec();
    let n = spec.rank();
    if b.ambient_rank() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.ambient_rank(),
        });
    }
    if vector_is_zero(v) {
        return Err(Error::Precondition("torsion search needs a nonzero vector".into()));
    }
    if deg_bound == 0 {
        return Err(Error::Precondition("degree bound must be at least 1".into()));
    }
    let basis = b.to_i64_rows()?;
    let exps: Vec<Vec<i64>> = box_points(basis.len(), deg_bound as i64)
        .iter()
        .map(|c| {
            let mut e = vec![0i64; n];
            for (ck, row) in c.iter().zip(&basis) {
                for (x, y) in e.iter_mut().zip(row) {
                    *x += ck * y;
                }
            }
            e
        })
        .collect();
    let images = module.act_monomials(&exps, v)?;
    let mut ech: SparseEchelon<CoordKey, Q> = SparseEchelon::new(spec.ring());
    for (label, img) in images.iter().enumerate() {
        if let Some(relation) = ech.insert(coordinates(img), label) {
            let gamma = TorusElement::from_terms(
                spec,
                relation.into_iter().map(|(l, c)| (exps[l].clone(), c)),
            )?;
            if gamma.is_zero() || !vector_is_zero(&module.act(&gamma, v)?) {
                return Err(Error::Precondition("annihilator failed re-verification".into()));
            }
            return Ok(Some(gamma));
        }
    }
    Ok(None)
}

/// Per-candidate outcome of [`dimension_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub dimension: usize,
    /// `(B, torsion_free)`: whether some free generator escaped every
    /// annihilator search over `B`.
    pub candidates: Vec<(Sublattice, bool)>,
}

/// Coordinate sublattices, the module's own commutative lattices, and a
/// maximal commutative witness.
pub fn default_candidates<Q: ExactRational, M: ModuleAction<Q> + ?Sized>(
    module: &M,
    search_bound: u32,
) -> Result<Vec<Sublattice>> {
    let spec = module.spec();
    let n = spec.rank();
    let mut out: Vec<Sublattice> = Vec::new();
    let mut push = |l: Sublattice| {
        if l.rank() > 0 && !out.contains(&l) {
            out.push(l);
        }
    };
    for mask in 1u32..(1 << n) {
        let rows: Vec<Vec<i64>> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        push(Sublattice::from_i64_rows(n, &rows)?);
    }
    for c in module.c_lattices() {
        push(c);
    }
    push(max_commutative_rank(spec, search_bound)?.witness);
    Ok(out)
}

/// Lower-bound estimate of the dimension in the sense of "not
/// `F∗B`-torsion": the largest rank of a candidate `B` over which some free
/// generator has no annihilator up to `deg_bound`. A semi-decision
/// procedure: a larger bound can only lower the result.
pub fn dimension_probe<Q: ExactRational, M: ModuleAction<Q> + ?Sized>(
    module: &M,
    deg_bound: u32,
    candidates: &[Sublattice],
) -> Result<DimensionReport> {
    let gens = module.free_generators();
    let mut dimension = 0;
    let mut results = Vec::with_capacity(candidates.len());
    for b in candidates {
        let mut free = false;
        for g in &gens {
            if torsion_search(module, b, g, deg_bound)?.is_none() {
                free = true;
                break;
            }
        }
        if free {
            dimension = dimension.max(b.rank());
        }
        results.push((b.clone(), free));
    }
    Ok(DimensionReport {
        dimension,
        candidates: results,
    })
}

/// Saturation of a truncation window by `span{x̄^a · v : ‖a‖_∞ ≤ k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicityReport {
    pub k: usize,
    /// Boundary allowance: the larger of `v`'s radius and the action radius.
    pub boundary: i64,
    pub span_dim: usize,
    pub window_dim: usize,
    pub interior_dim: usize,
    pub interior_attained: usize,
    pub trivial_center: bool,
}

impl CyclicityReport {
    pub fn ratio(&self) -> Ratio<usize> {
        if self.window_dim == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.span_dim, self.window_dim)
        }
    }

    /// Every interior window coordinate lies in the span.
    pub fn generates_interior(&self) -> bool {
        self.interior_dim > 0 && self.interior_attained == self.interior_dim
    }

    /// The trivial-center hypothesis under which cyclicity is expected.
    pub fn hypothesis_met(&self) -> bool {
        self.trivial_center
    }
}

pub fn cyclicity_probe<Q: ExactRational, M: ModuleAction<Q> + ?Sized>(
    module: &M,
    v: &ModuleVector<Q>,
    k: usize,
) -> Result<CyclicityReport> {
    if vector_is_zero(v) {
        return Err(Error::Precondition("cyclicity probe needs a nonzero vector".into()));
    }
    let spec = module.spec();
    let n = spec.rank();
    let boundary = vector_radius(v).max(module.action_radius());
    let pts = box_points(n, k as i64);
    let images = module.act_monomials(&pts, v)?;
    let mut ech: SparseEchelon<CoordKey, Q> = SparseEchelon::new(spec.ring());
    for (label, img) in images.iter().enumerate() {
        ech.insert(coordinates(img), label);
    }
    let outer = k as i64 + boundary;
    let inner = k as i64 - boundary;
    let ranks = module.component_ranks();
    let window_dim = ranks.iter().map(|&r| (2 * outer as usize + 1).pow(r as u32)).sum();
    let mut interior_dim = 0;
    let mut interior_attained = 0;
    if inner >= 0 {
        for (l, &r) in ranks.iter().enumerate() {
            for c in box_points(r, inner) {
                let mut a = c;
                a.resize(n, 0);
                let mut unit = BTreeMap::new();
                unit.insert((l, a), spec.ring().one());
                interior_dim += 1;
                if ech.contains(&unit) {
                    interior_attained += 1;
                }
            }
        }
    }
    Ok(CyclicityReport {
        k,
        boundary,
        span_dim: ech.rank(),
        window_dim,
        interior_dim,
        interior_attained,
        trivial_center: spec.has_trivial_center(),
    })
}
