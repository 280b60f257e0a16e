//! The value group `Γ = Z/N ⊕ Z^m`, written additively. An element
//! `(c, e)` stands for the scalar `ζ_N^c · t_1^{e_1} ⋯ t_m^{e_m}`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElement {
    order: u64,
    tors: u64,
    free: Vec<i64>,
}

impl GammaElement {
    /// Builds `(tors mod N, free)`.
    pub fn new(order: u64, tors: i64, free: Vec<i64>) -> Self {
        assert!(order >= 1, "torsion order must be positive");
        Self {
            order,
            tors: tors.rem_euclid(order as i64) as u64,
            free,
        }
    }

    pub fn zero(order: u64, params: usize) -> Self {
        Self::new(order, 0, vec![0; params])
    }

    pub fn torsion_order(&self) -> u64 {
        self.order
    }

    pub fn params(&self) -> usize {
        self.free.len()
    }

    pub fn tors(&self) -> u64 {
        self.tors
    }

    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn is_zero(&self) -> bool {
        self.tors == 0 && self.free.iter().all(|&e| e == 0)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.order == other.order && self.free.len() == other.free.len()
    }

    fn shape_error(&self, other: &Self) -> Error {
        Error::ShapeMismatch {
            n1: self.order,
            m1: self.free.len(),
            n2: other.order,
            m2: other.free.len(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(self.shape_error(other));
        }
        Ok(Self {
            order: self.order,
            tors: (self.tors + other.tors) % self.order,
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        let tors = ((self.tors as i128 * k as i128).rem_euclid(self.order as i128)) as u64;
        Self {
            order: self.order,
            tors,
            free: self.free.iter().map(|e| e * k).collect(),
        }
    }
}

impl Add for &GammaElement {
    type Output = GammaElement;

    fn add(self, rhs: &GammaElement) -> GammaElement {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for GammaElement {
    type Output = GammaElement;

    fn add(self, rhs: GammaElement) -> GammaElement {
        &self + &rhs
    }
}

impl Neg for &GammaElement {
    type Output = GammaElement;

    fn neg(self) -> GammaElement {
        self.scale(-1)
    }
}

impl Neg for GammaElement {
    type Output = GammaElement;

    fn neg(self) -> GammaElement {
        self.scale(-1)
    }
}

impl Sub for &GammaElement {
    type Output = GammaElement;

    fn sub(self, rhs: &GammaElement) -> GammaElement {
        self + &(-rhs)
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ(ζ^{} mod {}, t^{:?})", self.tors, self.order, self.free)
    }
}
