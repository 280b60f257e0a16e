use std::sync::Arc;

use super::{AlgebraSpec, TorusElement};
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::lattice::{unimodular_inverse, IntMatrix};
use crate::scalar::ExactRational;
use crate::Int;

fn choose2(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// A change of generators `y_k = x̄^{u_k}` given by the rows of a
/// unimodular matrix, with the induced identification of the two
/// presentations of the same algebra.
#[derive(Clone, Debug)]
pub struct Rebasing {
    source: Arc<AlgebraSpec>,
    target: Arc<AlgebraSpec>,
    u: Vec<Vec<i64>>,
    u_inv: Vec<Vec<i64>>,
}

fn row_times(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0i64; cols];
    for (vi, row) in v.iter().zip(m) {
        if *vi == 0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

impl Rebasing {
    pub fn new(source: &Arc<AlgebraSpec>, u: &IntMatrix<Int>) -> Result<Self> {
        let target = Arc::new(source.rebase(u)?);
        let u_inv = unimodular_inverse(u)?;
        Ok(Self {
            source: source.clone(),
            target,
            u: u.to_i64_rows()?,
            u_inv: u_inv.to_i64_rows()?,
        })
    }

    pub fn source(&self) -> &Arc<AlgebraSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraSpec> {
        &self.target
    }

    /// `a ↦ a U^{-1}`: exponents in the new generators.
    pub fn to_target_coords(&self, a: &[i64]) -> Vec<i64> {
        row_times(a, &self.u_inv)
    }

    /// `a' ↦ a' U`.
    pub fn to_source_coords(&self, a: &[i64]) -> Vec<i64> {
        row_times(a, &self.u)
    }

    /// The scalar `φ(a')` with `y^{a'} = φ(a') · x̄^{a'U}`.
    pub fn discrepancy(&self, a: &[i64]) -> GammaElement {
        let s = &self.source;
        let mut acc = s.ring().gamma_zero();
        for k in 0..a.len() {
            if a[k] == 0 {
                continue;
            }
            let c = choose2(a[k]);
            if c != 0 {
                acc = &acc + &s.cocycle(&self.u[k], &self.u[k]).scale(c);
            }
            for l in k + 1..a.len() {
                if a[l] != 0 {
                    acc = &acc + &s.cocycle(&self.u[k], &self.u[l]).scale(a[k] * a[l]);
                }
            }
        }
        acc
    }

    /// Rewrites an element of the source presentation in the new generators.
    pub fn forward<Q: ExactRational>(&self, x: &TorusElement<Q>) -> Result<TorusElement<Q>> {
        if **x.spec() != *self.source {
            return Err(Error::SpecMismatch);
        }
        let ring = self.source.ring();
        let mut out = TorusElement::zero(&self.target);
        for (a, c) in x.terms() {
            let a2 = self.to_target_coords(a);
            let twist = ring.embed_unit(&-self.discrepancy(&a2));
            out.add_term(&a2, c * &twist);
        }
        Ok(out)
    }

    /// Rewrites an element of the target presentation in the source generators.
    pub fn backward<Q: ExactRational>(&self, y: &TorusElement<Q>) -> Result<TorusElement<Q>> {
        if **y.spec() != *self.target {
            return Err(Error::SpecMismatch);
        }
        let ring = self.source.ring();
        let mut out = TorusElement::zero(&self.source);
        for (a2, c) in y.terms() {
            let twist = ring.embed_unit(&self.discrepancy(a2));
            out.add_term(&self.to_source_coords(a2), c * &twist);
        }
        Ok(out)
    }
}

/// Re-expresses `x` over the basis given by the rows of `u`.
pub fn rebase_element<Q: ExactRational>(x: &TorusElement<Q>, u: &IntMatrix<Int>) -> Result<TorusElement<Q>> {
    Rebasing::new(x.spec(), u)?.forward(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn t(k: i64) -> GammaElement {
        GammaElement::new(1, 0, vec![k])
    }

    #[test]
    fn new_generators_are_old_monomials() {
        let s = Arc::new(AlgebraSpec::from_upper(2, 1, 1, &[(0, 1, t(1))]).unwrap());
        let u = IntMatrix::from_i64_rows(2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let rb = Rebasing::new(&s, &u).unwrap();
        for k in 0..2 {
            let mut e = vec![0; 2];
            e[k] = 1;
            let y: TorusElement<Q> = TorusElement::basis(rb.target(), &e);
            let back = rb.backward(&y).unwrap();
            assert_eq!(back, TorusElement::basis(&s, &rb.to_source_coords(&e)));
        }
    }

    #[test]
    fn round_trip_and_multiplicativity() {
        let s = Arc::new(AlgebraSpec::from_upper(2, 3, 1, &[(0, 1, GammaElement::new(3, 1, vec![2]))]).unwrap());
        let u = IntMatrix::from_i64_rows(2, &[vec![2, 1], vec![1, 1]]).unwrap();
        let rb = Rebasing::new(&s, &u).unwrap();
        let a: TorusElement<Q> = TorusElement::basis(&s, &[3, -2]);
        let b = &TorusElement::basis(&s, &[-1, 4]) + &TorusElement::basis(&s, &[0, 1]);
        let fa = rb.forward(&a).unwrap();
        let fb = rb.forward(&b).unwrap();
        assert_eq!(rb.backward(&fa).unwrap(), a);
        assert_eq!(rb.forward(&(&a * &b)).unwrap(), &fa * &fb);
    }
}
