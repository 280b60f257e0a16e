//! Exact arithmetic in `Q(ζ_N)`, represented as rational polynomials
//! reduced modulo the cyclotomic polynomial `Φ_N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scalar::ExactRational;

/// `Φ_N` as a monic integer polynomial, coefficients lowest degree first.
#[derive(Debug)]
pub struct CyclotomicModulus {
    order: u64,
    poly: Vec<i64>,
}

impl PartialEq for CyclotomicModulus {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicModulus {}

impl CyclotomicModulus {
    /// Shared modulus for `N`; computed once per order and cached.
    pub fn get(order: u64) -> Arc<CyclotomicModulus> {
        assert!(order >= 1, "cyclotomic order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicModulus>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("cyclotomic cache poisoned");
        if let Some(m) = guard.get(&order) {
            return m.clone();
        }
        let m = Arc::new(CyclotomicModulus {
            order,
            poly: cyclotomic_polynomial(order),
        });
        guard.insert(order, m.clone());
        m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `deg Φ_N = φ(N)`.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }
}

/// `Φ_N = (x^N - 1) / ∏_{d | N, d < N} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &b) in den.iter().enumerate() {
            rem[k + i] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "cyclotomic division must be exact");
    quot
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic<Q> {
    modulus: Arc<CyclotomicModulus>,
    coeffs: Vec<Q>,
}

impl<Q: ExactRational> Cyclotomic<Q> {
    pub fn zero(modulus: &Arc<CyclotomicModulus>) -> Self {
        Self {
            modulus: modulus.clone(),
            coeffs: vec![Q::zero(); modulus.degree()],
        }
    }

    pub fn from_rational(modulus: &Arc<CyclotomicModulus>, q: Q) -> Self {
        let mut z = Self::zero(modulus);
        z.coeffs[0] = q;
        z
    }

    pub fn one(modulus: &Arc<CyclotomicModulus>) -> Self {
        Self::from_rational(modulus, Q::one())
    }

    /// `ζ_N^k`.
    pub fn zeta_pow(modulus: &Arc<CyclotomicModulus>, k: i64) -> Self {
        let e = k.rem_euclid(modulus.order() as i64) as usize;
        let mut raw = vec![Q::zero(); e + 1];
        raw[e] = Q::one();
        Self::reduce(modulus, raw)
    }

    /// Reduces an arbitrary rational polynomial in `ζ` modulo `Φ_N`.
    pub fn from_poly(modulus: &Arc<CyclotomicModulus>, raw: Vec<Q>) -> Self {
        Self::reduce(modulus, raw)
    }

    fn reduce(modulus: &Arc<CyclotomicModulus>, mut raw: Vec<Q>) -> Self {
        let deg = modulus.degree();
        let phi = modulus.polynomial();
        for k in (deg..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[k], Q::zero());
            if c.is_zero() {
                continue;
            }
            for (i, &p) in phi[..deg].iter().enumerate() {
                if p != 0 {
                    raw[k - deg + i] = raw[k - deg + i].clone() - c.clone() * Q::from_int(p);
                }
            }
        }
        raw.resize(deg, Q::zero());
        Self {
            modulus: modulus.clone(),
            coeffs: raw,
        }
    }

    pub fn modulus(&self) -> &Arc<CyclotomicModulus> {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) {
        assert!(
            self.modulus == other.modulus,
            "cyclotomic orders differ: {} vs {}",
            self.modulus.order(),
            other.modulus.order()
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            modulus: self.modulus.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = self.coeffs.len();
        if d == 1 {
            return Self {
                modulus: self.modulus.clone(),
                coeffs: vec![self.coeffs[0].clone() * other.coeffs[0].clone()],
            };
        }
        let mut raw = vec![Q::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] = raw[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::reduce(&self.modulus, raw)
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|a| a.clone() * q.clone()).collect(),
        }
    }

    /// Field inverse via the extended Euclidean algorithm against `Φ_N`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coeffs.len() == 1 {
            return Some(Self::from_rational(&self.modulus, self.coeffs[0].recip()));
        }
        let phi: Vec<Q> = self.modulus.polynomial().iter().map(|&c| Q::from_int(c)).collect();
        let (mut r0, mut r1) = (phi, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<Q>::new(), vec![Q::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let scaled = s0.into_iter().map(|x| x * c.clone()).collect();
        Some(Self::reduce(&self.modulus, scaled))
    }
}

fn trim<Q: ExactRational>(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul<Q: ExactRational>(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(out)
}

fn poly_sub<Q: ExactRational>(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Q::zero);
            let y = b.get(i).cloned().unwrap_or_else(Q::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem<Q: ExactRational>(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    let lead = den[dd].recip();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Q::zero(); rem.len() - dd];
    while rem.len() >= den.len() {
        let k = rem.len() - 1 - dd;
        let c = rem[rem.len() - 1].clone() * lead.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
        }
        quot[k] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl<Q: ExactRational> fmt::Debug for Cyclotomic<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·ζ"),
                _ => format!("{c}·ζ^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
