//! Class-2 nilpotent groups `H` with free abelian `A = H/ζH` and `ζH`.
//!
//! A central character sends each basis element of `ζH` to a scalar
//! `ζ^c t^e`; the group algebra modulo the corresponding prime becomes the
//! quantum torus with `g_ij = Σ_k comm(i, j)_k · χ_k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraSpec, TorusElement};
use crate::bounds::Bounds;
use crate::coeff::Coefficient;
use crate::commutative::{complement_solver, holonomic_certificate, ComplementSolution, HolonomicCertificate};
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::module::{
    cyclicity_probe, gk_growth_estimate, induce_cyclic, torsion_search, CFiniteModule, CyclicityReport,
    GrowthReport, ModuleAction,
};
use crate::scalar::ExactRational;
use crate::Sublattice;

/// Commutator data of a class-2 group: `[h_i, h_j]` as exponents over a
/// basis of `ζH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class2Datum {
    n: usize,
    z: usize,
    comm: BTreeMap<(usize, usize), Vec<i64>>,
}

impl Class2Datum {
    pub fn new(n: usize, z: usize) -> Result<Self> {
        if n == 0 || z == 0 {
            return Err(Error::Precondition("both ranks must be at least 1".into()));
        }
        Ok(Self {
            n,
            z,
            comm: BTreeMap::new(),
        })
    }

    /// The Heisenberg group: `[h_1, h_2] = c`.
    pub fn heisenberg() -> Self {
        let mut d = Self::new(2, 1).expect("positive ranks");
        d.set_comm(0, 1, vec![1]).expect("valid entry");
        d
    }

    /// Sets `[h_i, h_j]` for 0-based `i < j`.
    pub fn set_comm(&mut self, i: usize, j: usize, central: Vec<i64>) -> Result<()> {
        if i >= j || j >= self.n {
            return Err(Error::Precondition(format!(
                "commutator index ({}, {}) must satisfy 1 ≤ i < j ≤ {}",
                i + 1,
                j + 1,
                self.n
            )));
        }
        if central.len() != self.z {
            return Err(Error::DimensionMismatch {
                expected: self.z,
                found: central.len(),
            });
        }
        if central.iter().all(|&x| x == 0) {
            self.comm.remove(&(i, j));
        } else {
            self.comm.insert((i, j), central);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z(&self) -> usize {
        self.z
    }

    /// `[h_i, h_j]` for any `i, j` (alternating).
    pub fn comm(&self, i: usize, j: usize) -> Vec<i64> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.comm.get(&(i, j)).cloned().unwrap_or_else(|| vec![0; self.z]),
            std::cmp::Ordering::Greater => self.comm(j, i).iter().map(|x| -x).collect(),
            std::cmp::Ordering::Equal => vec![0; self.z],
        }
    }

    /// Nonzero entries `((i, j), central)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<i64>)> {
        self.comm.iter()
    }

    /// The commutator of two elements with `A`-parts `a` and `b`; in class
    /// two it depends only on these images and is biadditive.
    pub fn commutator(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.z];
        for ((i, j), c) in &self.comm {
            let w = a[*i] * b[*j] - a[*j] * b[*i];
            if w != 0 {
                for (o, x) in out.iter_mut().zip(c) {
                    *o += w * x;
                }
            }
        }
        out
    }
}

/// Images of the `ζH` basis in the value group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacter {
    torsion_order: u64,
    free_params: usize,
    images: Vec<GammaElement>,
}

impl CentralCharacter {
    pub fn new(torsion_order: u64, free_params: usize, images: Vec<GammaElement>) -> Result<Self> {
        if torsion_order == 0 {
            return Err(Error::Precondition("torsion order must be at least 1".into()));
        }
        for g in &images {
            if g.torsion_order() != torsion_order || g.params() != free_params {
                return Err(Error::ShapeMismatch {
                    n1: torsion_order,
                    m1: free_params,
                    n2: g.torsion_order(),
                    m2: g.params(),
                });
            }
        }
        Ok(Self {
            torsion_order,
            free_params,
            images,
        })
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    pub fn free_params(&self) -> usize {
        self.free_params
    }

    pub fn images(&self) -> &[GammaElement] {
        &self.images
    }

    /// Pointwise product of characters (sum in the value group).
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.images.len() != other.images.len() {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                found: other.images.len(),
            });
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Self::new(self.torsion_order, self.free_params, images)
    }

    fn evaluate(&self, central: &[i64]) -> GammaElement {
        let mut acc = GammaElement::zero(self.torsion_order, self.free_params);
        for (g, &k) in self.images.iter().zip(central) {
            acc = &acc + &g.scale(k);
        }
        acc
    }
}

/// The quantum torus obtained from `kH` by evaluating the center through `χ`.
pub fn reduce(datum: &Class2Datum, chi: &CentralCharacter) -> Result<AlgebraSpec> {
    if chi.images.len() != datum.z {
        return Err(Error::DimensionMismatch {
            expected: datum.z,
            found: chi.images.len(),
        });
    }
    let mut spec = AlgebraSpec::zero(datum.n, chi.torsion_order, chi.free_params)?;
    for ((i, j), c) in &datum.comm {
        spec.set(*i, *j, chi.evaluate(c))?;
    }
    Ok(spec)
}

/// An element of `H` given by its `A`-part and central part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub a: Vec<i64>,
    pub central: Vec<i64>,
}

/// First pair of generators that fail to commute in `H`, if any.
pub fn noncommuting_generators(datum: &Class2Datum, gens: &[GroupElement]) -> Option<(usize, usize)> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if datum.commutator(&gens[i].a, &gens[j].a).iter().any(|&x| x != 0) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The image `L ζH / ζH` of a subgroup in `A = Z^n`.
pub fn subgroup_image(datum: &Class2Datum, gens: &[GroupElement]) -> Result<Sublattice> {
    for g in gens {
        if g.a.len() != datum.n {
            return Err(Error::DimensionMismatch {
                expected: datum.n,
                found: g.a.len(),
            });
        }
        if g.central.len() != datum.z {
            return Err(Error::DimensionMismatch {
                expected: datum.z,
                found: g.central.len(),
            });
        }
    }
    let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.a.clone()).collect();
    Sublattice::from_i64_rows(datum.n, &rows)
}

/// How the harness obtains a module over the reduced algebra.
#[derive(Clone, Debug)]
pub enum ModuleRecipe<Q: ExactRational> {
    /// Induce from the virtual complement found by the complement solver,
    /// with the given values on its generators (all ones by default).
    Induced { character: Option<Vec<Coefficient<Q>>> },
    /// A ready-made module over the reduced algebra.
    Explicit(CFiniteModule<Q>),
}

/// Evidence for the conclusions about modules over `kL / P·kL` and the
/// finite-length statement when `ζH` is cyclic.
#[derive(Clone, Debug)]
pub struct TheoremBReport<Q: ExactRational> {
    pub reduced: Arc<AlgebraSpec>,
    pub c: Sublattice,
    pub complement: Option<ComplementSolution>,
    pub module_rank: usize,
    /// Annihilator search over `F∗C` for each free generator.
    pub torsion: Vec<Option<TorusElement<Q>>>,
    pub growth: GrowthReport,
    pub trivial_center: bool,
    pub center_cyclic: bool,
    pub cyclicity: Vec<CyclicityReport>,
    pub holonomic: Option<HolonomicCertificate>,
}

impl<Q: ExactRational> TheoremBReport<Q> {
    pub fn torsion_free(&self) -> bool {
        self.torsion.iter().all(Option::is_none)
    }

    pub fn growth_matches(&self) -> bool {
        self.growth.degree == Some(self.c.rank())
    }

    pub fn degenerate(&self) -> bool {
        self.reduced.is_commutative_algebra()
    }

    pub fn hypothesis_met(&self) -> bool {
        self.trivial_center
    }

    /// Finite-length evidence: applicable only when the center of `H` is
    /// cyclic.
    pub fn finite_length_evidence(&self) -> Option<bool> {
        if !self.center_cyclic || !self.trivial_center {
            return None;
        }
        let cyclic = !self.cyclicity.is_empty() && self.cyclicity.iter().all(CyclicityReport::generates_interior);
        Some(cyclic && self.holonomic.as_ref().is_some_and(|h| h.certified))
    }

    pub fn verdict(&self) -> &'static str {
        if self.degenerate() {
            if self.torsion_free() {
                "degenerate pass"
            } else {
                "fail"
            }
        } else if !self.hypothesis_met() {
            "hypothesis not met"
        } else if self.torsion_free() && self.growth_matches() && self.finite_length_evidence() != Some(false) {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict(), "pass" | "degenerate pass" | "hypothesis not met") && self.torsion_free()
    }
}

/// Runs the torsion, growth and (for cyclic `ζH`) finite-length checks on a
/// module over the reduced algebra, free over the image of `L`.
pub fn theorem_b_harness<Q: ExactRational>(
    datum: &Class2Datum,
    chi: &CentralCharacter,
    l: &[GroupElement],
    recipe: &ModuleRecipe<Q>,
    bounds: &Bounds,
) -> Result<TheoremBReport<Q>> {
    if let Some((i, j)) = noncommuting_generators(datum, l) {
        return Err(Error::Precondition(format!(
            "L is not abelian: generators {} and {} do not commute",
            i + 1,
            j + 1
        )));
    }
    let reduced = Arc::new(reduce(datum, chi)?);
    let c = subgroup_image(datum, l)?;
    debug_assert!(reduced.is_commutative_sublattice(&c)?);
    let (module, complement) = match recipe {
        ModuleRecipe::Explicit(m) => {
            if **m.spec() != *reduced {
                return Err(Error::SpecMismatch);
            }
            if m.c_lattice() != c {
                return Err(Error::Precondition("module is not free over the image of L".into()));
            }
            (m.clone(), None)
        }
        ModuleRecipe::Induced { character } => {
            let sol = complement_solver(&reduced, &c, bounds.s_max)?;
            let e = sol.e_lattice(reduced.rank())?;
            let values = match character {
                Some(v) => v.clone(),
                None => vec![reduced.ring().one(); e.rank()],
            };
            (induce_cyclic(&reduced, &c, &e, &values)?, Some(sol))
        }
    };
    let gens = module.free_generators();
    let torsion = gens
        .iter()
        .map(|g| torsion_search(&module, &c, g, bounds.deg_bound))
        .collect::<Result<Vec<_>>>()?;
    let growth = gk_growth_estimate(&module, &gens, bounds.k_max)?;
    let trivial_center = reduced.has_trivial_center();
    let center_cyclic = datum.z == 1;
    let mut cyclicity = Vec::new();
    let mut holonomic = None;
    if center_cyclic && trivial_center {
        let local = module.local_spec();
        let mut v = module.generator(0);
        if module.r() > 0 {
            let mut e1 = vec![0; local.rank()];
            e1[0] = 1;
            v[0] = v[0].try_add(&TorusElement::basis(local, &e1))?;
        }
        for k in 3..=bounds.k_max.min(5) {
            cyclicity.push(cyclicity_probe(&module, &v, k)?);
        }
        if let Some(gk) = growth.degree {
            holonomic = Some(holonomic_certificate(&reduced, gk, bounds.search_bound)?);
        }
    }
    Ok(TheoremBReport {
        reduced,
        c,
        complement,
        module_rank: module.d(),
        torsion,
        growth,
        trivial_center,
        center_cyclic,
        cyclicity,
        holonomic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn generic() -> CentralCharacter {
        CentralCharacter::new(1, 1, vec![GammaElement::new(1, 0, vec![1])]).unwrap()
    }

    #[test]
    fn heisenberg_reduces_to_plane() {
        let spec = reduce(&Class2Datum::heisenberg(), &generic()).unwrap();
        let plane = AlgebraSpec::from_upper(2, 1, 1, &[(0, 1, GammaElement::new(1, 0, vec![1]))]).unwrap();
        assert_eq!(spec, plane);
    }

    #[test]
    fn cyclotomic_reduction_has_big_center() {
        let chi = CentralCharacter::new(3, 0, vec![GammaElement::new(3, 1, vec![])]).unwrap();
        let spec = reduce(&Class2Datum::heisenberg(), &chi).unwrap();
        assert_eq!(
            spec.center_lattice(),
            Sublattice::from_i64_rows(2, &[vec![3, 0], vec![0, 3]]).unwrap()
        );
    }

    #[test]
    fn reduction_is_linear_in_the_character() {
        let mut d = Class2Datum::new(3, 2).unwrap();
        d.set_comm(0, 1, vec![1, 2]).unwrap();
        d.set_comm(1, 2, vec![0, -1]).unwrap();
        let a = CentralCharacter::new(4, 1, vec![GammaElement::new(4, 1, vec![2]), GammaElement::new(4, 3, vec![0])]).unwrap();
        let b = CentralCharacter::new(4, 1, vec![GammaElement::new(4, 2, vec![-1]), GammaElement::new(4, 1, vec![5])]).unwrap();
        let (ra, rb) = (reduce(&d, &a).unwrap(), reduce(&d, &b).unwrap());
        let rab = reduce(&d, &a.combine(&b).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rab.q(i, j), &(ra.q(i, j) + rb.q(i, j)));
            }
        }
    }

    #[test]
    fn images_and_abelian_checks() {
        let h = Class2Datum::heisenberg();
        let l = vec![
            GroupElement { a: vec![1, 0], central: vec![0] },
            GroupElement { a: vec![0, 0], central: vec![1] },
        ];
        assert_eq!(subgroup_image(&h, &l).unwrap(), Sublattice::from_i64_rows(2, &[vec![1, 0]]).unwrap());
        let whole = vec![
            GroupElement { a: vec![1, 0], central: vec![0] },
            GroupElement { a: vec![0, 1], central: vec![0] },
        ];
        assert_eq!(subgroup_image(&h, &whole).unwrap(), Sublattice::full(2));
        assert_eq!(noncommuting_generators(&h, &whole), Some((0, 1)));
        let recipe: ModuleRecipe<Rat> = ModuleRecipe::Induced { character: None };
        assert!(theorem_b_harness(&h, &generic(), &whole, &recipe, &Bounds::default()).is_err());
    }
}
