//! The short-interval divisibility indicator `chi_q(x)`.
//!
//! `chi_q(x)` is minus the dashed signed count of multiples of `q` in
//! `[x - h, x + h]`. It is computed exactly by floor divisions
//! ([`chi_direct`]) and through its finite Fourier expansion
//!
//! ```text
//! chi_q(x) = sum_{l | q, l > 1} (l / q) sum*_{j <= l/2} c_{j,l} sin(2 pi x j / l),
//! c_{j,q}  = (4 / q) cot(pi j / q) sin^2(pi j h / q) = F_h(j / q) / q,
//! ```
//!
//! where `sum*` runs over `j` coprime to `l` ([`chi_fourier_eval`]).

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::phase::{cos_pi, cot_pi, sin_pi, sin_sq_pi, RationalPhase};

/// A value in `(1/2) Z`, stored as twice the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        HalfInteger(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Exact `chi_q(x)` for window half-width `h`.
///
/// Counts multiples of `q` in `(x, x + h]` and `[x - h, x)`, halves the two
/// endpoint terms and negates. Requires `q >= 1`, `h >= 1`, `x - h >= 0`.
pub fn chi_direct(q: u64, x: i64, h: u64) -> HalfInteger {
    assert!(q >= 1, "q must be >= 1");
    let q = q as i64;
    let h = h as i64;
    debug_assert!(x - h >= 0, "x - h must be >= 0");
    let multiples_upto = |n: i64| n.div_euclid(q);
    let right = multiples_upto(x + h) - multiples_upto(x);
    let left = multiples_upto(x - 1) - multiples_upto(x - h - 1);
    let at_right_end = i64::from((x + h).rem_euclid(q) == 0);
    let at_left_end = i64::from((x - h).rem_euclid(q) == 0);
    // twice the dashed signed count
    let dashed_twice = 2 * right - 2 * left - at_right_end + at_left_end;
    HalfInteger(-dashed_twice)
}

/// `F_h(a) = 4 cot(pi a) sin^2(pi a h)` for rational `0 < a <= 1/2`.
///
/// The two analytic zeros, `a = 1/2` and `a h` integral, are detected in
/// integers and returned as exact zeros.
pub fn big_f(a: RationalPhase, h: u64) -> Result<f64> {
    if !a.in_half_interval() {
        return Err(Error::invalid(format!("F_h needs 0 < a <= 1/2, got {a}")));
    }
    Ok(big_f_unchecked(a.num(), a.den(), h))
}

#[inline]
fn big_f_unchecked(j: i64, l: i64, h: u64) -> f64 {
    if 2 * j == l {
        return 0.0;
    }
    let jh = ((j as i128 * h as i128).rem_euclid(l as i128)) as i64;
    if jh == 0 {
        return 0.0;
    }
    4.0 * cot_pi(j, l) * sin_sq_pi(jh, l)
}

/// `c_{j,q} = (4/q) cot(pi j / q) sin^2(pi j h / q)` for `1 <= j <= q`; the
/// `j = q` term is defined as 0.
pub fn fourier_coefficient(j: u64, q: u64, h: u64) -> Result<f64> {
    if q < 1 || j < 1 || j > q {
        return Err(Error::invalid(format!(
            "coefficient index needs 1 <= j <= q (j = {j}, q = {q})"
        )));
    }
    if j == q {
        return Ok(0.0);
    }
    let (j, q) = (j as i64, q as i64);
    let jh = ((j as i128 * h as i128).rem_euclid(q as i128)) as i64;
    Ok((4.0 / q as f64) * cot_pi(j, q) * sin_sq_pi(jh, q))
}

/// Coefficients `c_{j,q}` for one modulus, with the `h`-independent factors
/// tabulated. `coefficient(j, h)` is bit-identical to
/// [`fourier_coefficient`]`(j, q, h)`.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    q: u64,
    scale: f64,
    /// `cot(pi j / q)` for `j = 0..q` (entry 0 unused).
    cot: Vec<f64>,
    /// `sin^2(pi k / q)` for `k = 0..q`.
    sin_sq: Vec<f64>,
}

impl CoefficientTable {
    pub fn new(q: u64) -> Result<Self> {
        if q < 1 {
            return Err(Error::invalid("modulus must be >= 1"));
        }
        let qi = q as i64;
        let cot = (0..qi).map(|j| if j == 0 { 0.0 } else { cot_pi(j, qi) }).collect();
        let sin_sq = (0..qi).map(|k| sin_sq_pi(k, qi)).collect();
        Ok(CoefficientTable {
            q,
            scale: 4.0 / q as f64,
            cot,
            sin_sq,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `cot(pi j / q)` for `1 <= j < q`.
    pub fn cot_factor(&self, j: u64) -> f64 {
        self.cot[j as usize]
    }

    /// `sin^2(pi k / q)` for `0 <= k < q`.
    pub fn sin_sq_factor(&self, k: u64) -> f64 {
        self.sin_sq[k as usize]
    }

    /// `c_{j,q}` at half-width `h`, `1 <= j <= q`.
    pub fn coefficient(&self, j: u64, h: u64) -> f64 {
        debug_assert!(j >= 1 && j <= self.q);
        if j == self.q {
            return 0.0;
        }
        let jh = ((j as u128 * h as u128) % self.q as u128) as usize;
        self.scale * self.cot[j as usize] * self.sin_sq[jh]
    }

    /// `sum_{0 < j < q} c_{j,q}^2` at half-width `h`.
    pub fn parseval_sum(&self, h: u64) -> f64 {
        let q = self.q as usize;
        let step = (h % self.q) as usize;
        let mut k = 0usize;
        let mut total = 0.0;
        for j in 1..q {
            k += step;
            if k >= q {
                k -= q;
            }
            let c = self.scale * self.cot[j] * self.sin_sq[k];
            total += c * c;
        }
        total
    }
}

/// `sum_{0 < j < q} |c_{j,q}|^2`, with the `j = q` term taken as 0.
pub fn parseval_sum(q: u64, h: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::invalid("Parseval sum needs q >= 2"));
    }
    Ok(CoefficientTable::new(q)?.parseval_sum(h))
}

/// One term of the expansion: `weight * sin(2 pi x j / l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub l: u64,
    pub j: u64,
    /// `(l / q) c_{j,l} = F_h(j / l) / q`.
    pub weight: f64,
}

/// The Fourier expansion of `chi_q` at fixed `(q, h)`; the weights do not
/// depend on `x` and are computed once.
#[derive(Debug, Clone)]
pub struct ChiExpansion {
    q: u64,
    h: u64,
    terms: Vec<ExpansionTerm>,
}

impl ChiExpansion {
    pub fn new(q: u64, h: u64) -> Self {
        assert!(q >= 1, "q must be >= 1");
        let mut terms = Vec::new();
        for l in divisors(q).into_iter().filter(|&l| l > 1) {
            for j in 1..=l / 2 {
                if j.gcd(&l) != 1 {
                    continue;
                }
                let weight = big_f_unchecked(j as i64, l as i64, h) / q as f64;
                terms.push(ExpansionTerm { l, j, weight });
            }
        }
        ChiExpansion { q, h, terms }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    /// Evaluates the expansion at `x`; `x j mod l` is reduced in integers
    /// before any trigonometry.
    pub fn eval(&self, x: i64) -> f64 {
        let mut total = 0.0;
        for t in &self.terms {
            if t.weight == 0.0 {
                continue;
            }
            let l = t.l as i64;
            let phase = (x.rem_euclid(l) as i128 * t.j as i128).rem_euclid(l as i128) as i64;
            total += t.weight * sin_pi(2 * phase, l);
        }
        total
    }
}

/// `chi_q(x)` through its finite Fourier expansion.
pub fn chi_fourier_eval(q: u64, x: i64, h: u64) -> f64 {
    ChiExpansion::new(q, h).eval(x)
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A frequency for [`cosine_exp_sum`]: an exact fraction or a real number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Rational(RationalPhase),
    Real(f64),
}

impl From<RationalPhase> for Frequency {
    fn from(p: RationalPhase) -> Self {
        Frequency::Rational(p)
    }
}

impl From<f64> for Frequency {
    fn from(t: f64) -> Self {
        Frequency::Real(t)
    }
}

/// `sum_{x = N+1}^{2N} cos(2 pi theta x)` in closed form:
///
/// ```text
/// sin(pi N theta) cos(pi (3N + 1) theta) / sin(pi theta),
/// ```
///
/// and `N` when `theta` is an integer.
pub fn cosine_exp_sum(theta: impl Into<Frequency>, n: u64) -> f64 {
    match theta.into() {
        Frequency::Rational(p) => cosine_exp_sum_rational(p.num(), p.den(), n),
        Frequency::Real(t) => {
            let t = t.rem_euclid(1.0);
            if t == 0.0 {
                return n as f64;
            }
            let pi = std::f64::consts::PI;
            let nf = n as f64;
            (pi * nf * t).sin() * (pi * (3.0 * nf + 1.0) * t).cos() / (pi * t).sin()
        }
    }
}

/// [`cosine_exp_sum`] at `theta = num / den`, phases reduced exactly.
pub fn cosine_exp_sum_rational(num: i64, den: i64, n: u64) -> f64 {
    assert!(den > 0, "denominator must be positive");
    if num.rem_euclid(den) == 0 {
        return n as f64;
    }
    let period = 2 * den as i128;
    let reduce = |k: i128| -> i64 { (k.rem_euclid(period) * num as i128).rem_euclid(period) as i64 };
    let n = n as i128;
    sin_pi(reduce(n), den) * cos_pi(reduce(3 * n + 1), den) / sin_pi(num, den)
}
