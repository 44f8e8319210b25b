//! Extended reals for divergence values and generator endpoint limits.

use std::fmt;
use std::ops::{Add, Neg};

use crate::scalar::Scalar;

/// A real number or one of the two infinities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    PosInf,
    NegInf,
}

impl<T: Scalar> Extended<T> {
    pub fn zero() -> Self {
        Extended::Finite(T::zero())
    }

    /// Maps IEEE infinities onto the tagged variants.
    pub fn from_scalar(x: T) -> Self {
        if x.is_infinite() {
            if x > T::zero() {
                Extended::PosInf
            } else {
                Extended::NegInf
            }
        } else {
            Extended::Finite(x)
        }
    }

    pub fn to_scalar(self) -> T {
        match self {
            Extended::Finite(x) => x,
            Extended::PosInf => T::infinity(),
            Extended::NegInf => T::neg_infinity(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Multiplies by a nonnegative mass, with `0 · ∞ = 0`.
    pub fn times_mass(self, mass: T) -> Self {
        debug_assert!(mass >= T::zero());
        match self {
            Extended::Finite(x) => Extended::Finite(x * mass),
            _ if mass == T::zero() => Extended::zero(),
            inf => inf,
        }
    }

    /// Equality up to `tol·(1 + |other|)`, with equal infinities comparing equal.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => {
                (*a - *b).abs() <= tol * (T::one() + b.abs())
            }
            (Extended::PosInf, Extended::PosInf) | (Extended::NegInf, Extended::NegInf) => true,
            _ => false,
        }
    }

    /// `self ≥ other − tol`, read in the extended order.
    pub fn ge_with_tol(&self, other: &Self, tol: T) -> bool {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => *a >= *b - tol,
            (Extended::PosInf, _) | (_, Extended::NegInf) => true,
            _ => false,
        }
    }
}

impl<T: Scalar> Add for Extended<T> {
    type Output = Self;

    /// `+∞ + −∞` is undefined and yields `Finite(NaN)`.
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            (Extended::PosInf, Extended::NegInf) | (Extended::NegInf, Extended::PosInf) => {
                Extended::Finite(T::nan())
            }
            (Extended::PosInf, _) | (_, Extended::PosInf) => Extended::PosInf,
            _ => Extended::NegInf,
        }
    }
}

impl<T: Scalar> Neg for Extended<T> {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            Extended::Finite(x) => Extended::Finite(-x),
            Extended::PosInf => Extended::NegInf,
            Extended::NegInf => Extended::PosInf,
        }
    }
}

impl<T: Scalar> From<T> for Extended<T> {
    fn from(x: T) -> Self {
        Extended::from_scalar(x)
    }
}

impl<T: Scalar> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::PosInf => f.write_str("inf"),
            Extended::NegInf => f.write_str("-inf"),
        }
    }
}
