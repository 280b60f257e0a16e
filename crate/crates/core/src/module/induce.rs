use std::collections::HashMap;
use std::sync::Arc;

use super::cfinite::CFiniteModule;
use super::matrix::{twist, ElementMatrix};
use crate::algebra::{AlgebraSpec, Rebasing, TorusElement};
use crate::coeff::Coefficient;
use crate::commutative::verify_virtual_complement;
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::lattice::hermite_normal_form;
use crate::scalar::ExactRational;
use crate::{IntMatrix, Sublattice};

/// Normal forms in `F∗A ⊗_{F∗E} χ`, written in the local presentation.
struct Induced<'a, Q> {
    local: &'a Arc<AlgebraSpec>,
    r: usize,
    /// rows of `E` in local coordinates
    e_local: Vec<Vec<i64>>,
    /// `χ` on the local monomials `y^{E_k}`
    chi_local: Vec<Coefficient<Q>>,
    /// HNF of the tail projection of `E`, and `W` with `H = W · P`
    h: Vec<Vec<i64>>,
    w: Vec<Vec<i64>>,
    reps: HashMap<Vec<i64>, usize>,
}

fn choose2(m: i64) -> i64 {
    m * (m - 1) / 2
}

impl<Q: ExactRational> Induced<'_, Q> {
    fn sum_scaled(&self, coeffs: &[i64], rows: &[Vec<i64>], len: usize) -> Vec<i64> {
        let mut v = vec![0i64; len];
        for (c, row) in coeffs.iter().zip(rows) {
            for (x, y) in v.iter_mut().zip(row) {
                *x += c * y;
            }
        }
        v
    }

    /// `x̄^ε · 1` for `ε = Σ m_k E_k`.
    fn character(&self, m: &[i64]) -> Result<Coefficient<Q>> {
        let ring = self.local.ring();
        let mut mu: GammaElement = ring.gamma_zero();
        for k in 0..m.len() {
            if m[k] == 0 {
                continue;
            }
            let ek = &self.e_local[k];
            mu = &mu + &self.local.cocycle(ek, ek).scale(choose2(m[k]));
            for l in k + 1..m.len() {
                mu = &mu + &self.local.cocycle(ek, &self.e_local[l]).scale(m[k] * m[l]);
            }
        }
        let mut value = ring.embed_unit(&-mu);
        for (chi, &mk) in self.chi_local.iter().zip(m) {
            value = &value * &chi.unit_pow(mk)?;
        }
        Ok(value)
    }

    /// `x̄^w ⊗ 1 = coeff · x̄^{(c, 0)} · f_l`, returned as `(l, c, coeff)`.
    fn normal_form(&self, w: &[i64]) -> Result<(usize, Vec<i64>, Coefficient<Q>)> {
        let n = w.len();
        let t = n - self.r;
        let mut rem = w[self.r..].to_vec();
        let mut q = vec![0i64; t];
        for i in 0..t {
            let p = self.h[i][i];
            q[i] = rem[i].div_euclid(p);
            for (x, y) in rem.iter_mut().zip(&self.h[i]) {
                *x -= q[i] * y;
            }
        }
        let l = *self.reps.get(&rem).expect("reduced tail is a coset representative");
        let m = self.sum_scaled(&q, &self.w, t);
        let eps = self.sum_scaled(&m, &self.e_local, n);
        let rest: Vec<i64> = w.iter().zip(&eps).map(|(a, b)| a - b).collect();
        debug_assert_eq!(&rest[self.r..], &rem[..]);
        let ring = self.local.ring();
        let coeff = &ring.embed_unit(&-self.local.cocycle(&rest, &eps)) * &self.character(&m)?;
        let mut c = rest;
        for x in c[self.r..].iter_mut() {
            *x = 0;
        }
        Ok((l, c, coeff))
    }

    /// Matrix of `y_j^{±1}` on the free generators `x̄^{(0, g_l)} ⊗ 1`,
    /// without the semilinear twist.
    fn generator_matrix(&self, j: usize, sign: i64, reps: &[Vec<i64>]) -> Result<ElementMatrix<Q>> {
        let n = self.local.rank();
        let d = reps.len();
        let ring = self.local.ring();
        let mut ej = vec![0i64; n];
        ej[j] = sign;
        let mut m = ElementMatrix::zero(self.local, d);
        for (l, g) in reps.iter().enumerate() {
            let mut base = vec![0i64; n];
            base[self.r..].copy_from_slice(g);
            let twist_coeff = ring.embed_unit(&self.local.cocycle(&ej, &base));
            let w: Vec<i64> = ej.iter().zip(&base).map(|(a, b)| a + b).collect();
            let (l2, c, coeff) = self.normal_form(&w)?;
            let entry = TorusElement::monomial(self.local, &c, &twist_coeff * &coeff);
            let updated = m.get(l2, l).try_add(&entry)?;
            m.set(l2, l, updated);
        }
        Ok(m)
    }
}

/// The induced module `F∗A ⊗_{F∗E} χ`, free over `F∗C` of rank
/// `d = [Z^n : C + E]`.
///
/// `C` must be commutative and saturated, `E` a commutative virtual
/// complement, and `chi[k]` the (unit) value of `x̄^{E_k}` on the
/// generator, for the HNF basis rows `E_k` of `E`.
pub fn induce_cyclic<Q: ExactRational>(
    spec: &Arc<AlgebraSpec>,
    c: &Sublattice,
    e: &Sublattice,
    chi: &[Coefficient<Q>],
) -> Result<CFiniteModule<Q>> {
    let n = spec.rank();
    if let Some((i, j)) = spec.noncommuting_pair(c)? {
        return Err(Error::Precondition(format!(
            "C is not commutative: basis vectors {} and {} do not commute",
            i + 1,
            j + 1
        )));
    }
    if let Some((i, j)) = spec.noncommuting_pair(e)? {
        return Err(Error::Precondition(format!(
            "E is not commutative: basis vectors {} and {} do not commute",
            i + 1,
            j + 1
        )));
    }
    if !c.is_saturated() {
        return Err(Error::NotSaturated);
    }
    if !verify_virtual_complement(spec, c, e)?.passed() {
        return Err(Error::Precondition("E is not a virtual complement of C".into()));
    }
    if chi.len() != e.rank() {
        return Err(Error::DimensionMismatch {
            expected: e.rank(),
            found: chi.len(),
        });
    }
    for x in chi {
        if x.ring() != spec.ring() {
            return Err(Error::SpecMismatch);
        }
        if !x.is_unit() {
            return Err(Error::NotUnit);
        }
    }

    let r = c.rank();
    let t = n - r;
    let split = c.complete_basis()?;
    let rebasing = Rebasing::new(spec, &split)?;
    let local = rebasing.target();
    let ring = spec.ring();

    let e_rows = e.to_i64_rows()?;
    let e_local: Vec<Vec<i64>> = e_rows.iter().map(|row| rebasing.to_target_coords(row)).collect();
    let chi_local: Vec<Coefficient<Q>> = e_local
        .iter()
        .zip(chi)
        .map(|(ek, x)| x * &ring.embed_unit(&rebasing.discrepancy(ek)))
        .collect();

    let tails: Vec<Vec<i64>> = e_local.iter().map(|row| row[r..].to_vec()).collect();
    let (h, w) = hermite_normal_form(&IntMatrix::from_i64_rows(t, &tails)?);
    let h = h.to_i64_rows()?;
    let w = w.to_i64_rows()?;

    let mut reps: Vec<Vec<i64>> = vec![Vec::new()];
    for (i, row) in h.iter().enumerate().take(t) {
        let bound = row[i];
        reps = reps
            .into_iter()
            .flat_map(|prefix| {
                (0..bound).map(move |g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    let index: HashMap<Vec<i64>, usize> = reps.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();

    let induced = Induced {
        local,
        r,
        e_local,
        chi_local,
        h,
        w,
        reps: index,
    };
    if t == 0 {
        return CFiniteModule::trivial_action(spec, &split, 1);
    }
    let mut actions = Vec::with_capacity(t);
    let mut inverses = Vec::with_capacity(t);
    for j in r..n {
        actions.push(induced.generator_matrix(j, 1, &reps)?);
        inverses.push(induced.generator_matrix(j, -1, &reps)?.map(|x| twist(x, j, 1)));
    }
    CFiniteModule::with_inverses(spec, &split, r, actions, inverses)
}
