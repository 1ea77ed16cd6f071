//! Number abstraction shared by the floating-point and exact-rational pipelines.
//!
//! Every geometric quantity in the crate (states, positions, times, speeds,
//! weights) is generic over [`Scalar`]. `f64` is the default; [`Rational`]
//! gives bit-exact event geometry for polynomial fluxes with rational data.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used by the exact mode.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact; tolerances collapse to zero.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion for rationals (binary expansion of the float).
    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Smallest integer `n >= self`, clamped at 0.
    fn ceil_usize(&self) -> usize;
    /// Applies a transcendental map through `f64`. Inexact for rationals.
    fn map_f64(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_f64(f(self.to_f64()))
    }

    /// `|self| <= tol` in float mode, `self == 0` in exact mode.
    fn negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
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
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn ceil_usize(&self) -> usize {
        if *self <= 0.0 {
            0
        } else {
            self.ceil() as usize
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).expect("finite float")
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ceil_usize(&self) -> usize {
        if Signed::is_negative(self) {
            0
        } else {
            self.ceil().to_integer().to_usize().expect("fan size fits in usize")
        }
    }
}

/// Total order for scalars that never hold NaN.
pub fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

pub fn max<S: Scalar>(a: &S, b: &S) -> S {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Sign with a dead band: values that are [`Scalar::negligible`] map to 0.
pub fn snapped_sign<S: Scalar>(x: &S, tol: f64) -> i8 {
    if x.negligible(tol) {
        0
    } else if *x > S::zero() {
        1
    } else {
        -1
    }
}

/// Parses `"3/4"`, `"-2"` or `"0.25"` into a scalar. Decimal strings are
/// read exactly in rational mode.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(S::from_ratio(n, d));
    }
    if let Ok(n) = text.parse::<i64>() {
        return Some(S::from_i64(n));
    }
    if S::EXACT {
        // exact decimal: digits after the point become a power-of-ten denominator
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, text.strip_prefix('+').unwrap_or(text)),
        };
        if let Some((int, frac)) = body.split_once('.') {
            if !frac.is_empty() && frac.len() <= 15 && frac.bytes().all(|b| b.is_ascii_digit()) {
                let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
                let den = 10_i64.pow(frac.len() as u32);
                let frac: i64 = frac.parse().ok()?;
                return Some(S::from_ratio(sign * (int * den + frac), den));
            }
        }
    }
    let x: f64 = text.parse().ok()?;
    x.is_finite().then(|| S::from_f64(x))
}
