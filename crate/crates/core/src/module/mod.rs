//! Modules over a quantum torus that are free of finite rank over a
//! commutative subalgebra `F∗C`, together with probes for growth, torsion,
//! dimension and cyclicity.
//!
//! Module vectors are lists of algebra elements, one per free generator,
//! each supported in `C` (in the module's own presentation). Monomials act
//! through [`ModuleAction`], which takes exponents in the original
//! coordinates of the algebra.

mod cfinite;
mod induce;
mod matrix;
mod probes;
mod sum;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use cfinite::{CFiniteModule, ConsistencyReport, ExteriorReport};
pub use induce::induce_cyclic;
pub use matrix::{twist, ElementMatrix};
pub use probes::{
    cyclicity_probe, default_candidates, dimension_probe, gk_growth_estimate, growth_degree, torsion_search,
    CyclicityReport, DimensionReport, GrowthReport,
};
pub use sum::ModuleSum;

use crate::algebra::{AlgebraSpec, TorusElement};
use crate::coeff::Coefficient;
use crate::elimination::SparseRow;
use crate::error::{Error, Result};
use crate::scalar::ExactRational;
use crate::Sublattice;

pub type ModuleVector<Q> = Vec<TorusElement<Q>>;

/// Coordinate of a module vector: free generator index and monomial.
pub type CoordKey = (usize, Vec<i64>);

/// The action of `F∗A` on a module.
pub trait ModuleAction<Q: ExactRational> {
    /// The algebra, in its original presentation.
    fn spec(&self) -> &Arc<AlgebraSpec>;

    /// Number of free generators.
    fn dim(&self) -> usize;

    /// The commutative sublattices the module is free over.
    fn c_lattices(&self) -> Vec<Sublattice>;

    fn c_rank(&self) -> usize;

    /// For each free generator, the rank of the lattice its coefficients
    /// range over.
    fn component_ranks(&self) -> Vec<usize>;

    fn free_generators(&self) -> Vec<ModuleVector<Q>>;

    fn zero_vector(&self) -> ModuleVector<Q>;

    /// `x̄^a · v` for each exponent `a` (original coordinates).
    fn act_monomials(&self, exps: &[Vec<i64>], v: &ModuleVector<Q>) -> Result<Vec<ModuleVector<Q>>>;

    /// Largest absolute exponent appearing in the action data.
    fn action_radius(&self) -> i64;

    /// `x · v`.
    fn act(&self, x: &TorusElement<Q>, v: &ModuleVector<Q>) -> Result<ModuleVector<Q>> {
        if **x.spec() != **self.spec() {
            return Err(Error::SpecMismatch);
        }
        let exps: Vec<Vec<i64>> = x.support().cloned().collect();
        let images = self.act_monomials(&exps, v)?;
        let mut acc = self.zero_vector();
        for (img, c) in images.iter().zip(x.terms().values()) {
            acc = add_vectors(&acc, &scale_vector(img, c))?;
        }
        Ok(acc)
    }
}

pub fn add_vectors<Q: ExactRational>(a: &ModuleVector<Q>, b: &ModuleVector<Q>) -> Result<ModuleVector<Q>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    a.iter().zip(b).map(|(x, y)| x.try_add(y)).collect()
}

pub fn scale_vector<Q: ExactRational>(v: &ModuleVector<Q>, c: &Coefficient<Q>) -> ModuleVector<Q> {
    v.iter().map(|x| x.scale(c)).collect()
}

pub fn vector_is_zero<Q: ExactRational>(v: &ModuleVector<Q>) -> bool {
    v.iter().all(TorusElement::is_zero)
}

/// Largest absolute exponent entry of `v`.
pub fn vector_radius<Q: ExactRational>(v: &ModuleVector<Q>) -> i64 {
    v.iter()
        .flat_map(|x| x.support().flat_map(|a| a.iter().map(|e| e.abs())).max())
        .max()
        .unwrap_or(0)
}

/// Sparse coordinates of `v` keyed by (generator, monomial).
pub fn coordinates<Q: ExactRational>(v: &ModuleVector<Q>) -> SparseRow<CoordKey, Q> {
    let mut out = BTreeMap::new();
    for (l, x) in v.iter().enumerate() {
        for (a, c) in x.terms() {
            out.insert((l, a.clone()), c.clone());
        }
    }
    out
}
