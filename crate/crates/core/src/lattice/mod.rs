//! Exact integer-lattice algebra: normal forms, mixed kernels, saturation
//! and the finite-index adjustments used when a subgroup's quotient has
//! torsion.

mod matrix;
mod normal_form;
mod sublattice;

pub use matrix::IntMatrix;
pub use normal_form::{
    hermite_normal_form, integer_kernel, is_hermite_normal_form, smith_normal_form,
    unimodular_inverse, SmithDecomposition,
};
pub use sublattice::{kernel_mixed, satisfies_mixed, LatticeIndex, Sublattice};
