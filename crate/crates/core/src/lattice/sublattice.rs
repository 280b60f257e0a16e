use std::fmt;


use super::normal_form::{hermite_normal_form, integer_kernel, smith_normal_form, unimodular_inverse};
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// A subgroup of `Z^n`, stored as the nonzero rows of its row HNF.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sublattice<T> {
    ambient: usize,
    basis: IntMatrix<T>,
}

/// Index of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex<T> {
    Finite(T),
    Infinite,
}

impl<T: ExactInt> LatticeIndex<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, LatticeIndex::Finite(_))
    }
}

impl<T: ExactInt> Sublattice<T> {
    /// The lattice spanned by the rows of `generators`.
    pub fn span(generators: &IntMatrix<T>) -> Self {
        let (h, _) = hermite_normal_form(generators);
        let nonzero: Vec<usize> = (0..h.rows()).filter(|&i| !h.row_is_zero(i)).collect();
        Self {
            ambient: generators.cols(),
            basis: h.select_rows(nonzero),
        }
    }

    pub fn from_i64_rows(ambient: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Ok(Self::span(&IntMatrix::from_i64_rows(ambient, rows)?))
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient != n {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: n,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[T]) -> Result<Option<Vec<T>>> {
        self.check_ambient(v.len())?;
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for i in 0..self.rank() {
            let row = self.basis.row(i);
            while row[col].is_zero() {
                if !rest[col].is_zero() {
                    return Ok(None);
                }
                col += 1;
            }
            let (q, r) = rest[col].div_rem(&row[col]);
            if !r.is_zero() {
                return Ok(None);
            }
            for (x, b) in rest.iter_mut().zip(row) {
                *x = x.clone() - q.clone() * b.clone();
            }
            coords.push(q);
            col += 1;
        }
        if rest.iter().all(|x| x.is_zero()) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        for i in 0..other.rank() {
            if !self.contains(other.basis.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        Ok(Self::span(&self.basis.stack(&other.basis)?))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // (x, y) with x*B1 = y*B2, i.e. the left kernel of [B1; -B2]
        let mut neg = other.basis.clone();
        for i in 0..neg.rows() {
            neg.negate_row(i);
        }
        let stacked = self.basis.stack(&neg)?;
        let left = integer_kernel(&stacked.transpose());
        let xs = left.select_cols(0..self.rank());
        Ok(Self::span(&xs.mul(&self.basis)?))
    }

    /// `[other : self]`, requiring `self ≤ other`.
    pub fn index_in(&self, other: &Self) -> Result<LatticeIndex<T>> {
        if !other.contains_lattice(self)? {
            return Err(Error::NotContained);
        }
        if self.rank() != other.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        let coords = other.coordinates_matrix(self)?;
        Ok(LatticeIndex::Finite(coords.determinant()?.abs()))
    }

    /// Matrix whose rows are the coordinates of `inner`'s basis in `self`'s basis.
    pub fn coordinates_matrix(&self, inner: &Self) -> Result<IntMatrix<T>> {
        let mut rows = Vec::with_capacity(inner.rank());
        for i in 0..inner.rank() {
            rows.push(
                self.coordinates(inner.basis.row(i))?
                    .ok_or(Error::NotContained)?,
            );
        }
        IntMatrix::from_rows(self.rank(), rows)
    }

    /// Smallest `S ⊇ self` of the same rank with `Z^n / S` torsion-free.
    pub fn saturation(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let orth = integer_kernel(&self.basis);
        if orth.rows() == 0 {
            return Self::full(self.ambient);
        }
        Self::span(&integer_kernel(&orth))
    }

    pub fn is_saturated(&self) -> bool {
        smith_normal_form(&self.basis)
            .invariant_factors()
            .iter()
            .all(|d| d.is_one())
    }

    /// An `n × n` unimodular matrix whose first `rank` rows are this
    /// lattice's basis. Requires a saturated lattice.
    pub fn complete_basis(&self) -> Result<IntMatrix<T>> {
        if !self.is_saturated() {
            return Err(Error::NotSaturated);
        }
        let n = self.ambient;
        let pivots: Vec<usize> = (0..self.rank())
            .map(|i| {
                (0..n)
                    .find(|&j| !self.basis.get(i, j).is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect();
        let unit_pivots = pivots
            .iter()
            .enumerate()
            .all(|(i, &j)| self.basis.get(i, j).is_one());
        let mut rows = self.basis.row_vecs();
        if unit_pivots {
            for j in (0..n).filter(|j| !pivots.contains(j)) {
                let mut e = vec![T::zero(); n];
                e[j] = T::one();
                rows.push(e);
            }
        } else {
            // U B V = [I 0]  =>  the last rows of V^{-1} complete B
            let s = smith_normal_form(&self.basis);
            let vinv = unimodular_inverse(&s.v)?;
            for j in self.rank()..n {
                rows.push(vinv.row(j).to_vec());
            }
        }
        let full = IntMatrix::from_rows(n, rows)?;
        debug_assert!(full.is_unimodular());
        Ok(full)
    }

    /// A finite-index `A' ≥ self` with `A' / self` torsion-free: `self`
    /// plus a complement of its saturation.
    pub fn finite_index_adjust(&self, n: usize) -> Result<Self> {
        self.check_ambient(n)?;
        let sat = self.saturation();
        let completion = sat.complete_basis()?;
        let complement = completion.select_rows(sat.rank()..n);
        Ok(Self::span(&self.basis.stack(&complement)?))
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.basis.to_i64_rows()
    }
}

impl<T: ExactInt> fmt::Debug for Sublattice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice(n={}, {:?})", self.ambient, self.basis)
    }
}

/// `{a ∈ Z^n : G_free a = 0, G_tors a ≡ 0 (mod N)}`.
///
/// Solved as the kernel of `[[G_free, 0], [G_tors, N·I]]` projected onto
/// the first `n` coordinates.
pub fn kernel_mixed<T: ExactInt>(
    g_free: &IntMatrix<T>,
    g_tors: &IntMatrix<T>,
    modulus: &T,
) -> Result<Sublattice<T>> {
    let n = g_free.cols().max(g_tors.cols());
    if g_free.rows() > 0 && g_free.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g_free.cols(),
        });
    }
    if g_tors.rows() > 0 && g_tors.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g_tors.cols(),
        });
    }
    if !modulus.is_positive() {
        return Err(Error::Precondition("modulus must be at least 1".into()));
    }
    let t = if modulus.is_one() { 0 } else { g_tors.rows() };
    let p = g_free.rows();
    let mut big = IntMatrix::zeros(p + t, n + t);
    for i in 0..p {
        for j in 0..n {
            big.set(i, j, g_free.get(i, j).clone());
        }
    }
    for i in 0..t {
        for j in 0..n {
            big.set(p + i, j, g_tors.get(i, j).clone());
        }
        big.set(p + i, n + i, modulus.clone());
    }
    let ker = integer_kernel(&big);
    let lattice = Sublattice::span(&ker.select_cols(0..n));
    for i in 0..lattice.rank() {
        debug_assert!(satisfies_mixed(g_free, g_tors, modulus, lattice.basis.row(i)));
    }
    Ok(lattice)
}

/// Membership test for the congruence system solved by [`kernel_mixed`].
pub fn satisfies_mixed<T: ExactInt>(
    g_free: &IntMatrix<T>,
    g_tors: &IntMatrix<T>,
    modulus: &T,
    v: &[T],
) -> bool {
    let dot = |row: &[T]| {
        row.iter()
            .zip(v)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    };
    (0..g_free.rows()).all(|i| dot(g_free.row(i)).is_zero())
        && (0..g_tors.rows()).all(|i| dot(g_tors.row(i)).is_multiple_of(modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type L = Sublattice<BigInt>;

    fn lat(n: usize, rows: &[Vec<i64>]) -> L {
        L::from_i64_rows(n, rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_mixed_examples() {
        let g = IntMatrix::from_i64_rows(2, &[vec![0, 1], vec![-1, 0]]).unwrap();
        let k = kernel_mixed(&g, &IntMatrix::zeros(0, 2), &BigInt::from(1)).unwrap();
        assert!(k.is_zero());

        let t = IntMatrix::from_i64_rows(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let k = kernel_mixed(&IntMatrix::zeros(0, 2), &t, &BigInt::from(3)).unwrap();
        assert_eq!(k, lat(2, &[vec![3, 0], vec![0, 3]]));

        let z = IntMatrix::from_i64_rows(3, &[vec![0, 0, 0]]).unwrap();
        let k = kernel_mixed(&z, &IntMatrix::zeros(0, 3), &BigInt::from(1)).unwrap();
        assert_eq!(k, L::full(3));
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(lat(2, &[vec![2, 0]]).saturation(), lat(2, &[vec![1, 0]]));
        assert_eq!(lat(2, &[vec![1, 1]]).saturation(), lat(2, &[vec![1, 1]]));
        assert!(L::zero(2).saturation().is_zero());
    }

    #[test]
    fn finite_index_adjust_examples() {
        let a = lat(2, &[vec![2, 0]]).finite_index_adjust(2).unwrap();
        assert_eq!(a, lat(2, &[vec![2, 0], vec![0, 1]]));
        assert_eq!(
            L::full(2).index_in(&L::full(2)).unwrap(),
            LatticeIndex::Finite(BigInt::from(1))
        );
        assert_eq!(a.index_in(&L::full(2)).unwrap(), LatticeIndex::Finite(BigInt::from(2)));
        assert_eq!(lat(3, &[vec![1, 1, 0]]).finite_index_adjust(3).unwrap(), L::full(3));
        assert_eq!(L::zero(3).finite_index_adjust(3).unwrap(), L::full(3));
    }

    #[test]
    fn sum_intersection_index() {
        let x = lat(2, &[vec![1, 0]]);
        let y = lat(2, &[vec![0, 1]]);
        assert_eq!(x.sum(&y).unwrap(), L::full(2));
        let i = lat(2, &[vec![2, 0]]).intersection(&lat(2, &[vec![3, 0]])).unwrap();
        assert_eq!(i, lat(2, &[vec![6, 0]]));
        let three = lat(2, &[vec![3, 0], vec![0, 3]]);
        assert_eq!(three.index_in(&L::full(2)).unwrap(), LatticeIndex::Finite(BigInt::from(9)));
        assert_eq!(x.index_in(&L::full(2)).unwrap(), LatticeIndex::Infinite);
        assert_eq!(L::full(2).index_in(&x), Err(Error::NotContained));
        assert!(x.sum(&L::full(3)).is_err());
    }

    #[test]
    fn complete_basis_non_unit_pivot() {
        let c = lat(2, &[vec![2, 3]]);
        let u = c.complete_basis().unwrap();
        assert!(u.is_unimodular());
        assert_eq!(u.row(0), &big(&[2, 3])[..]);
        assert_eq!(lat(2, &[vec![2, 0]]).complete_basis(), Err(Error::NotSaturated));
    }

    #[test]
    fn membership() {
        let l = lat(3, &[vec![1, 1, 0], vec![0, 2, 2]]);
        assert!(l.contains(&big(&[1, 3, 2])).unwrap());
        assert!(!l.contains(&big(&[0, 1, 1])).unwrap());
        assert_eq!(l.coordinates(&big(&[1, 3, 2])).unwrap(), Some(big(&[1, 1])));
    }
}
