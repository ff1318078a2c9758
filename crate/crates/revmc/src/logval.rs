//! Nonnegative reals stored in the log domain.
//!
//! The marginal likelihoods in this crate reach magnitudes like 1e-2029,
//! far outside `f64` range, so probability-scale values travel as their
//! natural logarithm with an explicit exact-zero state.

use std::ops::{Add, Div, Mul};

use crate::num::Scalar;

/// A nonnegative quantity stored as its natural logarithm.
///
/// `Zero` represents exactly zero; `Pos(ln)` a strictly positive value.
/// Derived comparisons order `Zero` below every positive value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum LogValue<T> {
    /// Exactly zero.
    Zero,
    /// A positive value, stored as its natural log.
    Pos(T),
}

impl<T: Scalar> LogValue<T> {
    pub fn zero() -> Self {
        LogValue::Zero
    }

    pub fn one() -> Self {
        LogValue::Pos(T::zero())
    }

    /// Wraps a natural logarithm. `-inf` collapses to the exact zero.
    pub fn from_ln(ln: T) -> Self {
        debug_assert!(!ln.is_nan(), "LogValue from NaN");
        if ln == T::neg_infinity() {
            LogValue::Zero
        } else {
            LogValue::Pos(ln)
        }
    }

    /// Wraps a plain nonnegative value.
    ///
    /// Panics on negative input; this type has no sign.
    pub fn from_value(v: T) -> Self {
        assert!(v >= T::zero(), "LogValue::from_value needs v >= 0");
        if v == T::zero() {
            LogValue::Zero
        } else {
            LogValue::Pos(v.ln())
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogValue::Zero)
    }

    /// Natural log; `None` for the exact zero.
    pub fn ln(&self) -> Option<T> {
        match self {
            LogValue::Zero => None,
            LogValue::Pos(l) => Some(*l),
        }
    }

    /// Natural log, mapping zero to `-inf`.
    pub fn ln_or_neg_inf(&self) -> T {
        self.ln().unwrap_or_else(T::neg_infinity)
    }

    /// Base-10 log; `None` for the exact zero.
    pub fn log10(&self) -> Option<T> {
        self.ln().map(|l| l / T::LN_10())
    }

    /// The plain value; underflows to 0.0 or overflows to inf outside range.
    pub fn value(&self) -> T {
        match self {
            LogValue::Zero => T::zero(),
            LogValue::Pos(l) => l.exp(),
        }
    }
}

impl<T: Scalar> Mul for LogValue<T> {
    type Output = Self;

    // log domain: multiplication adds the stored logarithms
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (LogValue::Zero, _) | (_, LogValue::Zero) => LogValue::Zero,
            (LogValue::Pos(a), LogValue::Pos(b)) => LogValue::Pos(a + b),
        }
    }
}

impl<T: Scalar> Div for LogValue<T> {
    type Output = Self;

    // log domain: division subtracts the stored logarithms
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        match (self, rhs) {
            (_, LogValue::Zero) => panic!("LogValue division by zero"),
            (LogValue::Zero, _) => LogValue::Zero,
            (LogValue::Pos(a), LogValue::Pos(b)) => LogValue::Pos(a - b),
        }
    }
}

impl<T: Scalar> Add for LogValue<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (LogValue::Zero, x) => x,
            (x, LogValue::Zero) => x,
            (LogValue::Pos(a), LogValue::Pos(b)) => {
                // standard stable log-sum: hi + ln(1 + exp(lo - hi))
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                LogValue::Pos(hi + (lo - hi).exp().ln_1p())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert!(LogValue::<f64>::from_value(0.0).is_zero());
        assert_eq!(LogValue::from_value(1.0_f64), LogValue::one());
        assert!(LogValue::from_ln(f64::NEG_INFINITY).is_zero());
        assert_eq!(LogValue::from_value(2.5_f64).ln(), Some(2.5_f64.ln()));
    }

    #[test]
    fn arithmetic() {
        let a = LogValue::from_value(0.125_f64);
        let b = LogValue::from_value(0.5_f64);
        assert!((a * b).ln().unwrap() - 0.0625_f64.ln() < 1e-15);
        assert!(((a / b).value() - 0.25).abs() < 1e-15);
        assert!(((a + b).value() - 0.625).abs() < 1e-15);
        assert_eq!(a * LogValue::zero(), LogValue::zero());
        assert_eq!(a + LogValue::zero(), a);
    }

    #[test]
    fn extreme_magnitudes_survive() {
        // value ~ 1e-2000: representable only in the log domain
        let tiny = LogValue::Pos(-2000.0 * std::f64::consts::LN_10);
        let ratio = tiny / LogValue::Pos(-1970.0 * std::f64::consts::LN_10);
        assert!((ratio.log10().unwrap() + 30.0).abs() < 1e-9);
        // adding a vastly smaller value is a no-op
        let sum = tiny + LogValue::Pos(-9000.0);
        assert!((sum.ln().unwrap() - tiny.ln().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ordering() {
        let small = LogValue::from_value(0.1_f64);
        let big = LogValue::from_value(0.9_f64);
        assert!(LogValue::<f64>::zero() < small);
        assert!(small < big);
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn divide_by_zero_panics() {
        let _ = LogValue::from_value(1.0_f64) / LogValue::zero();
    }
}
