//! Arithmetic abstraction over `f64` and exact rationals.
//!
//! The map dynamics, cylinder enumeration, and cutting-time machinery are
//! generic over [`Scalar`] so that maps with rational parameters (the
//! doubling map, `beta = 9/5, alpha = 1/10`, ...) can be run with exact
//! arithmetic. Exactness matters wherever decisions are made near interval
//! boundaries: discontinuity hits, cutting-time detection, and periodic-point
//! residuals. Potentials and pressure sums always live in `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;

/// A totally ordered field element the dynamics can be driven with.
///
/// `EXACT` distinguishes the two tolerance regimes: exact scalars compare
/// with `==` and ignore the float tolerances, while `f64` comparisons use
/// the tolerance supplied at each call site.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// Exact construction from a fraction; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn powi(&self, n: u32) -> Self;
    /// Equality within `tol` for approximate scalars, exact `==` otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        if self < &<Self as Scalar>::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn powi(&self, n: u32) -> Self {
        let mut acc = <Self as Scalar>::one();
        for _ in 0..n {
            acc *= self.clone();
        }
        acc
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Numerically stable log of a sum of exponentials, streamed.
///
/// Feed raw exponents; the running maximum keeps every intermediate in range
/// so `exp(S_n phi)` never overflows even for wild potentials at deep levels.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
    count: usize,
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            count: 0,
        }
    }

    pub fn push(&mut self, exponent: f64) {
        self.count += 1;
        if exponent <= self.max {
            self.sum += (exponent - self.max).exp();
        } else if self.count == 1 {
            self.max = exponent;
            self.sum = 1.0;
        } else {
            self.sum = self.sum * (self.max - exponent).exp() + 1.0;
            self.max = exponent;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// log(sum of exp(x_i)); negative infinity when empty.
    pub fn value(&self) -> f64 {
        if self.count == 0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}
