//! The exact coefficient ring `Q(ζ_N)[t_1^{±1}, …, t_m^{±1}]`.
//!
//! Its fraction field plays the role of the ground field. Every element of
//! the value group embeds as a unit `ζ^c · t^e`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::cyclotomic::{Cyclotomic, CyclotomicModulus};
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::scalar::ExactRational;

/// The shape `(N, m)` of a coefficient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarRing {
    modulus: Arc<CyclotomicModulus>,
    params: usize,
}

impl ScalarRing {
    pub fn new(torsion_order: u64, params: usize) -> Self {
        Self {
            modulus: CyclotomicModulus::get(torsion_order),
            params,
        }
    }

    pub fn torsion_order(&self) -> u64 {
        self.modulus.order()
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn modulus(&self) -> &Arc<CyclotomicModulus> {
        &self.modulus
    }

    pub fn gamma_zero(&self) -> GammaElement {
        GammaElement::zero(self.torsion_order(), self.params)
    }

    pub fn accepts(&self, g: &GammaElement) -> bool {
        g.torsion_order() == self.torsion_order() && g.params() == self.params
    }

    pub fn zero<Q: ExactRational>(&self) -> Coefficient<Q> {
        Coefficient {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one<Q: ExactRational>(&self) -> Coefficient<Q> {
        self.constant(Q::one())
    }

    pub fn constant<Q: ExactRational>(&self, q: Q) -> Coefficient<Q> {
        self.term(vec![0; self.params], Cyclotomic::from_rational(&self.modulus, q))
    }

    pub fn term<Q: ExactRational>(&self, exponent: Vec<i64>, c: Cyclotomic<Q>) -> Coefficient<Q> {
        assert_eq!(exponent.len(), self.params, "free exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Coefficient {
            ring: self.clone(),
            terms,
        }
    }

    /// `ζ^tors · t^free`, a unit of the coefficient ring.
    pub fn embed_unit<Q: ExactRational>(&self, g: &GammaElement) -> Coefficient<Q> {
        assert!(self.accepts(g), "value group element has the wrong shape");
        self.term(
            g.free().to_vec(),
            Cyclotomic::zeta_pow(&self.modulus, g.tors() as i64),
        )
    }
}

impl fmt::Debug for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarRing(N={}, m={})", self.torsion_order(), self.params)
    }
}

/// A finitely supported map `Z^m → Q(ζ_N)`; no zero values are stored,
/// so equality is syntactic.
#[derive(Clone, PartialEq, Eq)]
pub struct Coefficient<Q> {
    ring: ScalarRing,
    terms: BTreeMap<Vec<i64>, Cyclotomic<Q>>,
}

impl<Q: ExactRational> Coefficient<Q> {
    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Cyclotomic<Q>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// Units are exactly the single-term elements.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ShapeMismatch {
                n1: self.ring.torsion_order(),
                m1: self.ring.params(),
                n2: other.ring.torsion_order(),
                m2: other.ring.params(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e, c);
        }
        Ok(Self {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                add_term(&mut terms, &e, &c1.mul(c2));
            }
        }
        Ok(Self {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale_rational(&self, q: &Q) -> Self {
        if q.is_zero() {
            return self.ring.zero();
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.scale(q))).collect(),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        let inv = c.inverse().ok_or(Error::NotUnit)?;
        Ok(self.ring.term(e.iter().map(|x| -x).collect(), inv))
    }

    /// Exact division by a unit.
    pub fn div_unit(&self, u: &Self) -> Result<Self> {
        self.check(u)?;
        self.try_mul(&u.unit_inverse()?)
    }

    /// Integer power of a unit (negative exponents invert).
    pub fn unit_pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.unit_inverse()? } else { self.clone() };
        let mut acc = self.ring.one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// Leading term under the lexicographic order on exponents.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &Cyclotomic<Q>)> {
        self.terms.iter().next_back()
    }
}

fn add_term<Q: ExactRational>(
    terms: &mut BTreeMap<Vec<i64>, Cyclotomic<Q>>,
    e: &[i64],
    c: &Cyclotomic<Q>,
) {
    match terms.get_mut(e) {
        Some(existing) => {
            let s = existing.add(c);
            if s.is_zero() {
                terms.remove(e);
            } else {
                *existing = s;
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(e.to_vec(), c.clone());
            }
        }
    }
}

impl<Q: ExactRational> Add for &Coefficient<Q> {
    type Output = Coefficient<Q>;

    fn add(self, rhs: &Coefficient<Q>) -> Coefficient<Q> {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<Q: ExactRational> Mul for &Coefficient<Q> {
    type Output = Coefficient<Q>;

    fn mul(self, rhs: &Coefficient<Q>) -> Coefficient<Q> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<Q: ExactRational> Neg for &Coefficient<Q> {
    type Output = Coefficient<Q>;

    fn neg(self) -> Coefficient<Q> {
        Coefficient {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }
}

impl<Q: ExactRational> Sub for &Coefficient<Q> {
    type Output = Coefficient<Q>;

    fn sub(self, rhs: &Coefficient<Q>) -> Coefficient<Q> {
        self + &(-rhs)
    }
}

impl<Q: ExactRational> fmt::Debug for Coefficient<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.iter().all(|&x| x == 0) {
                    format!("({c:?})")
                } else {
                    format!("({c:?})·t^{e:?}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
