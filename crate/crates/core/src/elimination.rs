//! Fraction-free sparse elimination over the coefficient ring.
//!
//! Rank and span membership are taken over the fraction field of the
//! coefficient ring, but no quotient is ever formed: a row is reduced by
//! `row ← p·row − e·basis_row` (or `row − e·basis_row` when the pivot has
//! been normalized to one by a unit division). Every operation is invertible
//! over the fraction field, so ranks are exact, and the bookkeeping of row
//! combinations yields dependencies with ring coefficients.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::coeff::{Coefficient, ScalarRing};
use crate::scalar::ExactRational;

pub type SparseRow<K, Q> = BTreeMap<K, Coefficient<Q>>;

/// Row-combination bookkeeping: input label → ring coefficient.
pub type Combination<Q> = BTreeMap<usize, Coefficient<Q>>;

struct BasisRow<K, Q> {
    row: SparseRow<K, Q>,
    combo: Combination<Q>,
}

/// An incrementally built echelon basis keyed by arbitrary ordered columns.
pub struct SparseEchelon<K, Q> {
    ring: ScalarRing,
    basis: Vec<BasisRow<K, Q>>,
    pivots: BTreeMap<K, usize>,
}

fn axpy<K: Ord + Clone, Q: ExactRational>(
    target: &mut BTreeMap<K, Coefficient<Q>>,
    scale_target: Option<&Coefficient<Q>>,
    factor: &Coefficient<Q>,
    source: &BTreeMap<K, Coefficient<Q>>,
) {
    // target ← s·target − factor·source
    if let Some(s) = scale_target {
        for v in target.values_mut() {
            *v = &*v * s;
        }
    }
    for (k, v) in source {
        let delta = factor * v;
        match target.get_mut(k) {
            Some(existing) => {
                let nv = &*existing - &delta;
                if nv.is_zero() {
                    target.remove(k);
                } else {
                    *existing = nv;
                }
            }
            None => {
                target.insert(k.clone(), -&delta);
            }
        }
    }
}

impl<K: Ord + Clone, Q: ExactRational> SparseEchelon<K, Q> {
    pub fn new(ring: &ScalarRing) -> Self {
        Self {
            ring: ring.clone(),
            basis: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut row: SparseRow<K, Q>, mut combo: Combination<Q>) -> (SparseRow<K, Q>, Combination<Q>) {
        let mut cursor: Option<K> = None;
        loop {
            let lower = match &cursor {
                Some(k) => Bound::Excluded(k.clone()),
                None => Bound::Unbounded,
            };
            let next = row
                .range((lower, Bound::Unbounded))
                .find(|(k, _)| self.pivots.contains_key(*k))
                .map(|(k, v)| (k.clone(), v.clone()));
            let Some((key, entry)) = next else { break };
            let b = &self.basis[self.pivots[&key]];
            let pivot = &b.row[&key];
            let scale = if pivot.is_one() { None } else { Some(pivot) };
            axpy(&mut row, scale, &entry, &b.row);
            axpy(&mut combo, scale, &entry, &b.combo);
            debug_assert!(!row.contains_key(&key));
            cursor = Some(key);
        }
        (row, combo)
    }

    /// Whether `row` lies in the span (over the fraction field).
    pub fn contains(&self, row: &SparseRow<K, Q>) -> bool {
        self.reduce(row.clone(), BTreeMap::new()).0.is_empty()
    }

    /// Adds `row` (tagged with `label`). Returns `None` when the rank grew,
    /// otherwise a nonzero ring relation `Σ c_l · row_l = 0` among inserted
    /// rows.
    pub fn insert(&mut self, row: SparseRow<K, Q>, label: usize) -> Option<Combination<Q>> {
        let mut combo = BTreeMap::new();
        combo.insert(label, self.ring.one());
        let (mut row, mut combo) = self.reduce(row, combo);
        let Some((lead_key, lead)) = row.iter().next().map(|(k, v)| (k.clone(), v.clone())) else {
            return Some(combo);
        };
        if lead.is_unit() && !lead.is_one() {
            let inv = lead.unit_inverse().expect("unit");
            for v in row.values_mut() {
                *v = &*v * &inv;
            }
            for v in combo.values_mut() {
                *v = &*v * &inv;
            }
        }
        self.pivots.insert(lead_key, self.basis.len());
        self.basis.push(BasisRow { row, combo });
        None
    }
}

/// Rank over the fraction field of the coefficient ring.
pub fn fraction_free_rank<Q: ExactRational>(ring: &ScalarRing, matrix: &[Vec<Coefficient<Q>>]) -> usize {
    let mut ech = SparseEchelon::new(ring);
    for (i, r) in matrix.iter().enumerate() {
        let row: SparseRow<usize, Q> = r
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        ech.insert(row, i);
    }
    ech.rank()
}
