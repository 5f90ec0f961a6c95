//! Rational phases `j / l` and trigonometry at rational multiples of `pi`.
//!
//! Angles are carried as exact integer fractions and reduced before any
//! floating-point work, so `sin(2 pi x j / l)` stays accurate for large `x`
//! and the quarter-turn values (0, +-1) come out exact.

use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// A fraction `num / den` with `den > 0`, not necessarily reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::invalid(format!("phase denominator must be positive, got {den}")));
        }
        Ok(RationalPhase { num, den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// `gcd(num, den) = 1`.
    pub fn is_reduced(&self) -> bool {
        self.num.gcd(&self.den) == 1
    }

    /// `0 < num / den <= 1/2`.
    pub fn in_half_interval(&self) -> bool {
        self.num > 0 && 2 * self.num <= self.den
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `||num / den||`, the distance to the nearest integer, as an exact
    /// fraction in `[0, 1/2]`.
    pub fn distance_to_integer(&self) -> Ratio<i64> {
        distance_to_integer(self.num, self.den)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `||num / den||` as a reduced fraction.
pub fn distance_to_integer(num: i64, den: i64) -> Ratio<i64> {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den);
    Ratio::new(r.min(den - r), den)
}

/// `sin(pi * num / den)` for `den > 0`.
///
/// The angle is folded into `[0, pi/2]` in integers first; multiples of
/// `pi/2` return exactly 0 or +-1.
pub fn sin_pi(num: i64, den: i64) -> f64 {
    debug_assert!(den > 0);
    let two_den = 2 * den as i128;
    let mut r = (num as i128).rem_euclid(two_den);
    let den = den as i128;
    let mut sign = 1.0;
    if r >= den {
        r -= den;
        sign = -1.0;
    }
    // r in [0, den): sin(pi r / den) = sin(pi (den - r) / den)
    if 2 * r > den {
        r = den - r;
    }
    if r == 0 {
        return 0.0;
    }
    if 2 * r == den {
        return sign;
    }
    sign * (PI * (r as f64 / den as f64)).sin()
}

/// `cos(pi * num / den)` for `den > 0`.
pub fn cos_pi(num: i64, den: i64) -> f64 {
    debug_assert!(den > 0);
    let two_den = 2 * den as i128;
    let r = (num as i128).rem_euclid(two_den);
    // cos(a) = sin(a + pi/2)
    let shifted = 2 * r + den as i128;
    let reduced = shifted.rem_euclid(4 * den as i128);
    sin_pi(reduced as i64, 2 * den)
}

/// `cot(pi * num / den)`; callers must keep `num / den` off the integers.
pub fn cot_pi(num: i64, den: i64) -> f64 {
    cos_pi(num, den) / sin_pi(num, den)
}

/// `sin^2(pi * num / den)`.
pub fn sin_sq_pi(num: i64, den: i64) -> f64 {
    let s = sin_pi(num, den);
    s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(sin_pi(0, 7), 0.0);
        assert_eq!(sin_pi(1, 2), 1.0);
        assert_eq!(sin_pi(3, 2), -1.0);
        assert_eq!(sin_pi(5, 5), 0.0);
        assert_eq!(cos_pi(1, 2), 0.0);
        assert_eq!(cos_pi(1, 1), -1.0);
        assert_eq!(cos_pi(4, 2), 1.0);
        assert_eq!(cot_pi(1, 2), 0.0);
    }

    #[test]
    fn matches_std_trig() {
        for den in 1..40i64 {
            for num in -90..90i64 {
                let a = PI * num as f64 / den as f64;
                assert!((sin_pi(num, den) - a.sin()).abs() < 1e-13, "{num}/{den}");
                assert!((cos_pi(num, den) - a.cos()).abs() < 1e-13, "{num}/{den}");
            }
        }
    }

    #[test]
    fn large_numerators_reduce_exactly() {
        let den = 997;
        let base = sin_pi(123, den);
        assert_eq!(sin_pi(123 + 2 * den * 1_000_000_007, den), base);
        assert_eq!(sin_pi(123 - 2 * den * 31, den), base);
    }

    #[test]
    fn distance_to_nearest_integer() {
        assert_eq!(distance_to_integer(5, 6), Ratio::new(1, 6));
        assert_eq!(distance_to_integer(1, 2), Ratio::new(1, 2));
        assert_eq!(distance_to_integer(-1, 3), Ratio::new(1, 3));
        assert_eq!(distance_to_integer(8, 4), Ratio::new(0, 1));
    }

    #[test]
    fn phase_predicates() {
        let p = RationalPhase::new(2, 4).unwrap();
        assert!(!p.is_reduced());
        assert!(p.in_half_interval());
        assert!(RationalPhase::new(1, 0).is_err());
        assert!(!RationalPhase::new(2, 3).unwrap().in_half_interval());
    }
}
