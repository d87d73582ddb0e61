//! The scalar abstraction shared by matrices, polynomials and Lie algebras.
//!
//! Everything downstream is generic over a [`FieldScalar`]: exact field
//! elements with total arithmetic except division by zero. The two
//! implementors are `Rat` and number-field elements.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rat::Rat;

pub trait FieldScalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Embeds a rational constant.
    fn from_rat(r: Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self.clone()
    }
}

impl FieldScalar for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }
}
