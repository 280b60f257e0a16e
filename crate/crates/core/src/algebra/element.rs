use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::AlgebraSpec;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::scalar::ExactRational;

/// A finite sum `Σ c_a x̄^a` in a quantum torus, normal-ordered monomials
/// `x̄^a = x̄_1^{a_1} ⋯ x̄_n^{a_n}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement<Q> {
    spec: Arc<AlgebraSpec>,
    terms: BTreeMap<Vec<i64>, Coefficient<Q>>,
}

impl<Q: ExactRational> TorusElement<Q> {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> Self {
        Self {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<AlgebraSpec>) -> Self {
        Self::basis(spec, &vec![0; spec.rank()])
    }

    /// The monomial `x̄^a`.
    pub fn basis(spec: &Arc<AlgebraSpec>, a: &[i64]) -> Self {
        Self::monomial(spec, a, spec.ring().one())
    }

    /// `c · x̄^a`.
    pub fn monomial(spec: &Arc<AlgebraSpec>, a: &[i64], c: Coefficient<Q>) -> Self {
        let mut out = Self::zero(spec);
        out.add_term(a, c);
        out
    }

    /// Collects `(a, c_a)` pairs, summing repeated exponents.
    pub fn from_terms(
        spec: &Arc<AlgebraSpec>,
        terms: impl IntoIterator<Item = (Vec<i64>, Coefficient<Q>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(spec);
        for (a, c) in terms {
            if a.len() != spec.rank() {
                return Err(Error::DimensionMismatch {
                    expected: spec.rank(),
                    found: a.len(),
                });
            }
            if c.ring() != spec.ring() {
                return Err(Error::SpecMismatch);
            }
            out.add_term(&a, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, a: &[i64], c: Coefficient<Q>) {
        assert_eq!(a.len(), self.spec.rank(), "exponent length must equal the rank");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(a) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(a);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(a.to_vec(), c);
            }
        }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Coefficient<Q>> {
        &self.terms
    }

    pub fn coefficient(&self, a: &[i64]) -> Option<&Coefficient<Q>> {
        self.terms.get(a)
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec && *self.spec != *other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Product via `x̄^a x̄^b = λ(a, b) · x̄^{a+b}`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ring = self.spec.ring();
        let mut out = Self::zero(&self.spec);
        for (a, c1) in &self.terms {
            for (b, c2) in &other.terms {
                let twist = ring.embed_unit(&self.spec.cocycle(a, b));
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(&e, &(c1 * c2) * &twist);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a scalar.
    pub fn scale(&self, c: &Coefficient<Q>) -> Self {
        let mut out = Self::zero(&self.spec);
        for (a, v) in &self.terms {
            out.add_term(a, c * v);
        }
        out
    }

    /// Units of a quantum torus over a domain are the scalar multiples of
    /// monomials with unit coefficient.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(Coefficient::is_unit)
    }

    /// Inverse of a unit: `(c x̄^a)^{-1} = c^{-1} λ(a, a) x̄^{-a}`.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let (a, c) = self.terms.iter().next().expect("one term");
        let twist = self.spec.ring().embed_unit(&self.spec.cocycle(a, a));
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        Ok(Self::monomial(&self.spec, &neg, &c.unit_inverse()? * &twist))
    }

    /// Integer power; negative powers require a unit.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.unit_inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.spec);
        for _ in 0..k.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// The group commutator `u v u^{-1} v^{-1}` of two units.
    pub fn group_commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?
            .try_mul(&self.unit_inverse()?)?
            .try_mul(&other.unit_inverse()?)
    }
}

impl<Q: ExactRational> Add for &TorusElement<Q> {
    type Output = TorusElement<Q>;

    fn add(self, rhs: &TorusElement<Q>) -> TorusElement<Q> {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<Q: ExactRational> Sub for &TorusElement<Q> {
    type Output = TorusElement<Q>;

    fn sub(self, rhs: &TorusElement<Q>) -> TorusElement<Q> {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<Q: ExactRational> Mul for &TorusElement<Q> {
    type Output = TorusElement<Q>;

    fn mul(self, rhs: &TorusElement<Q>) -> TorusElement<Q> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<Q: ExactRational> Neg for &TorusElement<Q> {
    type Output = TorusElement<Q>;

    fn neg(self) -> TorusElement<Q> {
        TorusElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

impl<Q: ExactRational> fmt::Debug for TorusElement<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| format!("[{c:?}]·x^{a:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
