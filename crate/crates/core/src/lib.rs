//! Exact computation with quantum tori `F∗A` over `Q(ζ_N)(t_1, …, t_m)`
//! and their finitely generated modules.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: integer matrices, Hermite and Smith normal forms,
//!   sublattices, kernels of congruence systems;
//! * [`gamma`], [`cyclotomic`], [`coeff`]: the value group of commutation
//!   scalars and the exact coefficient ring;
//! * [`algebra`]: presentations, elements, changes of generators;
//! * [`commutative`]: commutative subalgebras and complements;
//! * [`module`]: modules finite over a commutative subalgebra, and
//!   growth, torsion, and cyclicity probes;
//! * [`nilpotent`]: reduction of class-2 nilpotent group algebras;
//! * [`format`], [`scenario`]: JSON interchange and batch verification.
//!
//! Generic code is parameterised over [`scalar::ExactInt`] and
//! [`scalar::ExactRational`]; the aliases below fix arbitrary precision.

pub mod algebra;
pub mod bounds;
pub mod coeff;
pub mod commutative;
pub mod cyclotomic;
pub mod elimination;
pub mod error;
pub mod format;
pub mod gamma;
pub mod lattice;
pub mod module;
pub mod nilpotent;
pub mod scalar;
pub mod scenario;

pub use algebra::{AlgebraSpec, Rebasing};
pub use bounds::Bounds;
pub use error::{Error, Result};
pub use gamma::GammaElement;

/// Arbitrary-precision integers used for lattice work.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rationals used for coefficients.
pub type Rat = num_rational::BigRational;

pub type Sublattice = lattice::Sublattice<Int>;
pub type IntMatrix = lattice::IntMatrix<Int>;
pub type Coefficient = coeff::Coefficient<Rat>;
pub type TorusElement = algebra::TorusElement<Rat>;
