//! Hermite and Smith normal forms over an exact integer type.


use super::IntMatrix;
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Row-style Hermite normal form. Returns `(H, U)` with `U` unimodular and
/// `U * M = H`. Nonzero rows of `H` come first, pivots are positive and
/// strictly move right, entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form<T: ExactInt>(m: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut p = 0;
    for col in 0..cols {
        if p == rows {
            break;
        }
        for i in p + 1..rows {
            if h.get(i, col).is_zero() {
                continue;
            }
            let a = h.get(p, col).clone();
            let b = h.get(i, col).clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let z = -(b / g.clone());
            let w = a / g;
            h.combine_rows(p, i, &x, &y, &z, &w);
            u.combine_rows(p, i, &x, &y, &z, &w);
        }
        if h.get(p, col).is_zero() {
            continue;
        }
        if h.get(p, col).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h.get(p, col).clone();
        for i in 0..p {
            let q = h.get(i, col).div_floor(&pivot);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(i, p, &k);
                u.add_row_multiple(i, p, &k);
            }
        }
        p += 1;
    }
    (h, u)
}

/// Checks the row-HNF shape predicate used as the canonical sublattice form.
pub fn is_hermite_normal_form<T: ExactInt>(h: &IntMatrix<T>) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let pivot = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
        match pivot {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero {
                    return false;
                }
                if let Some(lp) = last_pivot {
                    if j <= lp {
                        return false;
                    }
                }
                let pv = h.get(i, j);
                if !pv.is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = h.get(k, j);
                    if e.is_negative() || e >= pv {
                        return false;
                    }
                }
                last_pivot = Some(j);
            }
        }
    }
    true
}

/// `U * M * V = D` with `D` diagonal and `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T: ExactInt> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: ExactInt> SmithDecomposition<T> {
    /// The nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form<T: ExactInt>(m: &IntMatrix<T>) -> SmithDecomposition<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SmithDecomposition { u, d, v };
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).clone() / pivot.clone();
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-q.clone());
                    u.add_row_multiple(i, t, &-q);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j).clone() / pivot.clone();
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-q.clone());
                    v.add_col_multiple(j, t, &-q);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            if let Some(i) = bad {
                d.add_row_multiple(t, i, &T::one());
                u.add_row_multiple(t, i, &T::one());
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}

/// Basis (as rows) of the right kernel `{x : M x = 0}`.
pub fn integer_kernel<T: ExactInt>(m: &IntMatrix<T>) -> IntMatrix<T> {
    let (h, u) = hermite_normal_form(&m.transpose());
    let zero_rows: Vec<usize> = (0..h.rows()).filter(|&i| h.row_is_zero(i)).collect();
    u.select_rows(zero_rows)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse<T: ExactInt>(m: &IntMatrix<T>) -> Result<IntMatrix<T>> {
    if m.rows() != m.cols() {
        return Err(Error::NotUnimodular);
    }
    let (h, u) = hermite_normal_form(m);
    if h != IntMatrix::identity(m.rows()) {
        return Err(Error::NotUnimodular);
    }
    Ok(u)
}
