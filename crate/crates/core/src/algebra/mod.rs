//! Quantum tori: presentations, elements, and changes of generators.

mod element;
mod rebase;
mod spec;

pub use element::TorusElement;
pub use rebase::{rebase_element, Rebasing};
pub use spec::AlgebraSpec;
