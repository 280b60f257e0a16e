//! Search and truncation bounds shared by the probes, the harnesses and the
//! command-line front end.

/// Bounds for the bounded searches and truncation windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest window radius for growth sequences.
    pub k_max: usize,
    /// Support radius for annihilator searches.
    pub deg_bound: u32,
    /// Largest exponent tried by the complement solver.
    pub s_max: u64,
    /// Entry bound for the isotropic sublattice search.
    pub search_bound: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            k_max: 6,
            deg_bound: 3,
            s_max: 10,
            search_bound: 2,
        }
    }
}
