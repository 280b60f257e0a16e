use std::fmt;
use std::sync::Arc;

use crate::algebra::{AlgebraSpec, TorusElement};
use crate::error::{Error, Result};
use crate::gamma::GammaElement;
use crate::scalar::ExactRational;

/// The twist `τ_j^{power}` of `F∗C` for a (local) generator `j`: each
/// monomial `x̄^c` is scaled by `β(e_j, c)^{power}`.
pub fn twist<Q: ExactRational>(x: &TorusElement<Q>, j: usize, power: i64) -> TorusElement<Q> {
    let spec = x.spec();
    let n = spec.rank();
    let mut ej = vec![0i64; n];
    ej[j] = 1;
    let mut out = TorusElement::zero(spec);
    for (c, v) in x.terms() {
        let g: GammaElement = spec.beta(&ej, c).scale(power);
        out.add_term(c, v * &spec.ring().embed_unit(&g));
    }
    out
}

/// A square matrix with entries in a commutative subalgebra of a quantum
/// torus.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementMatrix<Q> {
    spec: Arc<AlgebraSpec>,
    rows: Vec<Vec<TorusElement<Q>>>,
}

impl<Q: ExactRational> ElementMatrix<Q> {
    pub fn zero(spec: &Arc<AlgebraSpec>, d: usize) -> Self {
        Self {
            spec: spec.clone(),
            rows: vec![vec![TorusElement::zero(spec); d]; d],
        }
    }

    pub fn identity(spec: &Arc<AlgebraSpec>, d: usize) -> Self {
        let mut m = Self::zero(spec, d);
        for i in 0..d {
            m.rows[i][i] = TorusElement::one(spec);
        }
        m
    }

    /// A scalar multiple of the identity.
    pub fn diagonal(spec: &Arc<AlgebraSpec>, d: usize, x: &TorusElement<Q>) -> Self {
        let mut m = Self::zero(spec, d);
        for i in 0..d {
            m.rows[i][i] = x.clone();
        }
        m
    }

    pub fn from_rows(spec: &Arc<AlgebraSpec>, rows: Vec<Vec<TorusElement<Q>>>) -> Result<Self> {
        let d = rows.len();
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            if row.iter().any(|x| **x.spec() != **spec) {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(Self {
            spec: spec.clone(),
            rows,
        })
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &TorusElement<Q> {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: TorusElement<Q>) {
        self.rows[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<TorusElement<Q>>] {
        &self.rows
    }

    pub fn map(&self, f: impl Fn(&TorusElement<Q>) -> TorusElement<Q>) -> Self {
        Self {
            spec: self.spec.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Entrywise `τ_j^{power}`.
    pub fn twisted(&self, j: usize, power: i64) -> Self {
        self.map(|x| twist(x, j, power))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.dim();
        if other.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: other.dim(),
            });
        }
        let mut out = Self::zero(&self.spec, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = TorusElement::zero(&self.spec);
                for k in 0..d {
                    if self.rows[i][k].is_zero() || other.rows[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&self.rows[i][k].try_mul(&other.rows[k][j])?)?;
                }
                out.rows[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// `x · self` for an element `x` of the (commutative) entry algebra.
    pub fn scale(&self, x: &TorusElement<Q>) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| x.try_mul(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: self.spec.clone(),
            rows,
        })
    }

    /// `self · v`.
    pub fn apply(&self, v: &[TorusElement<Q>]) -> Result<Vec<TorusElement<Q>>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        self.rows
            .iter()
            .map(|row| {
                let mut acc = TorusElement::zero(&self.spec);
                for (a, x) in row.iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.try_add(&a.try_mul(x)?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        Self {
            spec: self.spec.clone(),
            rows,
        }
    }

    /// Determinant by cofactor expansion (the entries commute).
    pub fn determinant(&self) -> Result<TorusElement<Q>> {
        let d = self.dim();
        match d {
            0 => return Ok(TorusElement::one(&self.spec)),
            1 => return Ok(self.rows[0][0].clone()),
            _ => {}
        }
        let mut acc = TorusElement::zero(&self.spec);
        for j in 0..d {
            let a = &self.rows[0][j];
            if a.is_zero() {
                continue;
            }
            let term = a.try_mul(&self.minor(0, j).determinant()?)?;
            acc = if j % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
        }
        Ok(acc)
    }

    pub fn adjugate(&self) -> Result<Self> {
        let d = self.dim();
        let mut out = Self::zero(&self.spec, d);
        if d == 1 {
            out.rows[0][0] = TorusElement::one(&self.spec);
            return Ok(out);
        }
        for i in 0..d {
            for j in 0..d {
                let m = self.minor(j, i).determinant()?;
                out.rows[i][j] = if (i + j) % 2 == 0 { m } else { -&m };
            }
        }
        Ok(out)
    }

    /// Inverse when the determinant is a unit; `None` otherwise.
    pub fn inverse(&self) -> Result<Option<Self>> {
        let det = self.determinant()?;
        if !det.is_unit() {
            return Ok(None);
        }
        let inv = det.unit_inverse()?;
        Ok(Some(self.adjugate()?.scale(&inv)?))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.spec, self.dim())
    }

    /// Largest absolute exponent entry over all entries.
    pub fn radius(&self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .flat_map(|x| x.support().flat_map(|a| a.iter().map(|v| v.abs())).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }

    /// Re-homes the entries in another presentation with the same number of
    /// generators.
    pub fn rehome(&self, spec: &Arc<AlgebraSpec>) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| TorusElement::from_terms(spec, x.terms().iter().map(|(a, c)| (a.clone(), c.clone()))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            rows,
        })
    }
}

impl<Q: ExactRational> fmt::Debug for ElementMatrix<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}
