//! Scalar traits the rest of the crate is generic over.
//!
//! Lattice code is written against [`ExactInt`] (arbitrary precision by
//! default, fixed-width integers for fast tests) and coefficient arithmetic
//! against [`ExactRational`]. The concrete choices used by the CLI live as
//! type aliases at the crate root.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact integer type usable in lattice normal forms.
pub trait ExactInt:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_small(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every exact integer type")
    }

    fn to_small(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

impl<T> ExactInt for T where
    T: Clone
        + Debug
        + Display
        + Eq
        + Ord
        + Hash
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// An exact field of rationals.
pub trait ExactRational:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + FromStr + Send + Sync + 'static
{
    type Int: ExactInt;

    fn from_int(v: i64) -> Self;
    fn from_fraction(numer: i64, denom: i64) -> Self;
    fn recip(&self) -> Self;
    fn numer_int(&self) -> Self::Int;
    fn denom_int(&self) -> Self::Int;
}

impl<T: ExactInt> ExactRational for Ratio<T> {
    type Int = T;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(<T as ExactInt>::from_small(v))
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        Ratio::new(
            <T as ExactInt>::from_small(numer),
            <T as ExactInt>::from_small(denom),
        )
    }

    fn recip(&self) -> Self {
        Ratio::recip(self)
    }

    fn numer_int(&self) -> T {
        self.numer().clone()
    }

    fn denom_int(&self) -> T {
        self.denom().clone()
    }
}
