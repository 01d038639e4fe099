//! Signed values stored as `(sign, ln|v|)`.
//!
//! Quantities such as `(1-p)^N` leave the range of `f64` long before the
//! interesting physics happens for N in the hundreds, so anything that feeds
//! root finding at large N is carried around in this form.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)` for `a >= b`; `-inf` when equal.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    debug_assert!(a >= b || a.is_nan() || b.is_nan());
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp()).ln_1p()
}

/// `ln(x^e)` with the convention `0^0 = 1`.
pub fn ln_pow(ln_base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * ln_base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A real number as sign plus natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: Sign,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: Sign::Zero,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn new(sign: Sign, ln_abs: f64) -> Self {
        if sign == Sign::Zero || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog { sign, ln_abs }
        }
    }

    pub fn positive(ln_abs: f64) -> Self {
        Self::new(Sign::Positive, ln_abs)
    }

    pub fn from_f64(v: f64) -> Self {
        match v.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self::positive(v.ln()),
            Some(Ordering::Less) => Self::new(Sign::Negative, (-v).ln()),
            _ => Self::ZERO,
        }
    }

    /// Converts back; underflows to a signed zero-magnitude value when out of range.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Positive => self.ln_abs.exp(),
            Sign::Negative => -self.ln_abs.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_negative(self) -> bool {
        self.sign == Sign::Negative
    }

    pub fn abs(self) -> Self {
        Self::positive(self.ln_abs)
    }
}

impl Add for SignedLog {
    type Output = SignedLog;

    fn add(self, other: SignedLog) -> SignedLog {
        match (self.sign, other.sign) {
            (Sign::Zero, _) => other,
            (_, Sign::Zero) => self,
            (a, b) if a == b => Self::new(a, log_add_exp(self.ln_abs, other.ln_abs)),
            _ => {
                if self.ln_abs == other.ln_abs {
                    Self::ZERO
                } else if self.ln_abs > other.ln_abs {
                    Self::new(self.sign, log_sub_exp(self.ln_abs, other.ln_abs))
                } else {
                    Self::new(other.sign, log_sub_exp(other.ln_abs, self.ln_abs))
                }
            }
        }
    }
}

impl Sub for SignedLog {
    type Output = SignedLog;

    fn sub(self, other: SignedLog) -> SignedLog {
        self + (-other)
    }
}

/// A zero divisor is a caller bug.
impl Div for SignedLog {
    type Output = SignedLog;

    fn div(self, other: SignedLog) -> SignedLog {
        debug_assert!(!other.is_zero());
        let sign = if self.sign == other.sign {
            Sign::Positive
        } else {
            Sign::Negative
        };
        match self.sign {
            Sign::Zero => Self::ZERO,
            _ => Self::new(sign, self.ln_abs - other.ln_abs),
        }
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> SignedLog {
        let sign = match self.sign {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        };
        SignedLog { sign, ..self }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, other: SignedLog) -> SignedLog {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let sign = if self.sign == other.sign {
            Sign::Positive
        } else {
            Sign::Negative
        };
        Self::new(sign, self.ln_abs + other.ln_abs)
    }
}

/// `ln C(n, k)` for every `k` in `0..=n`.
pub fn ln_binomial_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    row.push(acc);
    for k in 0..n {
        acc += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        row.push(acc);
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials_match_pascal() {
        let row = ln_binomial_row(10);
        let exact = [1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1];
        for (l, e) in row.iter().zip(exact) {
            assert!((l.exp() - e as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_handling() {
        assert!(SignedLog::from_f64(0.0).is_zero());
        assert_eq!(SignedLog::from_f64(-2.0) + SignedLog::from_f64(2.0), SignedLog::ZERO);
        assert_eq!(ln_pow(f64::NEG_INFINITY, 0.0), 0.0);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn far_below_f64_range() {
        let a = SignedLog::positive(-2000.0);
        let b = SignedLog::positive(-2001.0);
        let d = a - b;
        let expected = -2000.0 + (1.0 - (-1.0f64).exp()).ln();
        assert!((d.ln_abs - expected).abs() < 1e-12);
        assert_eq!(d.to_f64(), 0.0);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_plain(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let la = SignedLog::from_f64(a);
            let lb = SignedLog::from_f64(b);
            let tol = 1e-12 * (a.abs() + b.abs()).max(1.0);
            prop_assert!(((la + lb).to_f64() - (a + b)).abs() <= tol);
            prop_assert!(((la - lb).to_f64() - (a - b)).abs() <= tol);
            prop_assert!(((la * lb).to_f64() - a * b).abs() <= 1e-12 * (a * b).abs().max(1e-300));
            if b != 0.0 {
                prop_assert!(((la / lb).to_f64() - a / b).abs() <= 1e-12 * (a / b).abs().max(1e-300));
            }
        }
    }
}
