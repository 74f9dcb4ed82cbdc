//! Scalar abstractions shared by the exact and floating code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::iter::Sum;
use std::ops::Neg;

/// Coefficient field for spin vectors: exact rationals or floats.
pub trait Coeff: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Whether the value is zero up to the representation's own notion of negligible.
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    /// Decimal numerator and denominator used by the JSON form.
    fn to_num_den(&self) -> (String, String);
    fn from_num_den(num: &str, den: &str) -> Option<Self>;
}

impl Coeff for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_num_den(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
    fn from_num_den(num: &str, den: &str) -> Option<Self> {
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(num.parse().ok()?, d))
    }
}

impl Coeff for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_num_den(&self) -> (String, String) {
        (format!("{:?}", self), "1".to_string())
    }
    fn from_num_den(num: &str, den: &str) -> Option<Self> {
        Some(num.parse::<f64>().ok()? / den.parse::<f64>().ok()?)
    }
    fn negligible(&self) -> bool {
        self.abs() < 1e-300
    }
}

impl Coeff for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn to_num_den(&self) -> (String, String) {
        (format!("{:?}", self), "1".to_string())
    }
    fn from_num_den(num: &str, den: &str) -> Option<Self> {
        Some(num.parse::<f32>().ok()? / den.parse::<f32>().ok()?)
    }
    fn negligible(&self) -> bool {
        Signed::abs(self) < 1e-37
    }
}

/// Real scalar used by the site solver, the chain operators and the eigensolver.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Sum + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable constant")
    }
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {}
impl Real for f32 {}
