//! Spectral decomposition of `I_f` for `f = g * 1`.
//!
//! Writing `A(x) = sum_{q <= Q} g(q) chi_q(x)` through the Fourier expansion of
//! `chi_q` groups the terms by reduced fraction `j / l`:
//!
//! ```text
//! A(x) = sum_{1 < l <= Q} R_l sum*_{j <= l/2} F_h(j / l) sin(2 pi x j / l),
//! R_l  = sum_{d <= Q/l} g(l d) / (l d).
//! ```
//!
//! Squaring and summing over `x` splits `I_f = sum_x A(x)^2` into the diagonal
//! (coinciding fractions, `sin^2` sums) and the off-diagonal pairs with
//! `delta = j/l - r/t > 0`, each contributing
//! `R_l R_t F_h(j/l) F_h(r/t) [C(delta) - C(sigma)]` where
//! `C(theta) = sum_x cos(2 pi theta x)` and `sigma = ||j/l + r/t||`.
//! The ordered-pair sum with `delta > 0` carries prefactor 1: the factor 2
//! from symmetrising the square cancels against `sin a sin b = (cos(a - b) -
//! cos(a + b)) / 2`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::chi::{big_f, chi_direct, cosine_exp_sum_rational};
use crate::error::{Error, Result};
use crate::phase::RationalPhase;
use crate::symmetry::{deterministic_sum, symmetry_integral, SymmetrySeries, WindowParams};
use crate::tables::{convolve_with_ones, FunctionTable};

/// Default largest `Q` accepted by [`reconcile`].
pub const DEFAULT_MAX_Q: usize = 40;

/// Default budget on the number of off-diagonal pairs.
pub const DEFAULT_MAX_PAIRS: u64 = 1_000_000;

/// `R_l = sum_{d <= Q/l} g(l d) / (l d)`; zero for `l > Q`.
pub fn ramanujan_coefficient(g: &FunctionTable, q: usize, l: usize) -> Result<f64> {
    if l <= 1 {
        return Err(Error::invalid(format!("Ramanujan coefficient needs l > 1, got {l}")));
    }
    let limit = q.min(g.len());
    let mut total = 0.0;
    let mut m = l;
    while m <= limit {
        total += g.value(m) / m as f64;
        m += l;
    }
    Ok(total)
}

/// `A(x) = sum_{q <= Q} g(q) chi_q(x)` at one point; needs `x > h`.
pub fn aggregate_chi_at(g: &FunctionTable, q_max: usize, x: usize, h: usize) -> f64 {
    assert!(x > h, "need x - h >= 1");
    let limit = q_max.min(g.len());
    let mut total = 0.0;
    for q in 1..=limit {
        let gq = g.value(q);
        if gq == 0.0 {
            continue;
        }
        total += gq * chi_direct(q as u64, x as i64, h as u64).to_f64();
    }
    total
}

/// `A(x)` for every `x` in `(N, 2N]`; equals `-S'_f(x, h)` for `f = g * 1`.
pub fn aggregate_chi_series(g: &FunctionTable, params: &WindowParams) -> Result<SymmetrySeries> {
    use rayon::prelude::*;
    let values = params
        .xs()
        .into_par_iter()
        .map(|x| aggregate_chi_at(g, params.q(), x, params.h()))
        .collect();
    Ok(SymmetrySeries {
        params: *params,
        values,
    })
}

/// Reduced fractions `j / l` with `1 < l <= Q`, `1 <= j <= l/2`, ordered by
/// `(l, j)`.
pub fn reduced_fractions(q_max: usize) -> Vec<RationalPhase> {
    let mut out = Vec::new();
    for l in 2..=q_max as i64 {
        for j in 1..=l / 2 {
            if j.gcd(&l) == 1 {
                out.push(RationalPhase::new(j, l).expect("positive denominator"));
            }
        }
    }
    out
}

/// Number of ordered pairs with `delta > 0`, i.e. unordered pairs of distinct
/// reduced fractions.
pub fn offdiagonal_pair_count(q_max: usize) -> u64 {
    let n = reduced_fractions(q_max).len() as u64;
    n * n.saturating_sub(1) / 2
}

/// A pair of reduced fractions `j/l > r/t` with exact `delta` and `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FractionPair {
    pub first: RationalPhase,
    pub second: RationalPhase,
    /// `j/l - r/t > 0`.
    pub delta: Ratio<i64>,
    /// `||j/l + r/t||` in `[0, 1/2]`.
    pub sigma: Ratio<i64>,
}

impl FractionPair {
    /// Builds the pair, ordering the two fractions so that `delta > 0`.
    /// Returns `None` for equal fractions.
    pub fn new(a: RationalPhase, b: RationalPhase) -> Option<Self> {
        let (j, l, r, t) = (a.num(), a.den(), b.num(), b.den());
        let cross = j * t - r * l;
        match cross.signum() {
            0 => None,
            1 => Some(Self::ordered(a, b)),
            _ => Some(Self::ordered(b, a)),
        }
    }

    fn ordered(first: RationalPhase, second: RationalPhase) -> Self {
        let (j, l, r, t) = (first.num(), first.den(), second.num(), second.den());
        let den = l * t;
        let delta = Ratio::new(j * t - r * l, den);
        let s = (j * t + r * l).rem_euclid(den);
        let sigma = Ratio::new(s.min(den - s), den);
        FractionPair {
            first,
            second,
            delta,
            sigma,
        }
    }

    /// `sigma <= 1 / a`.
    pub fn sigma_within(&self, a: u64) -> bool {
        (*self.sigma.numer() as i128) * (a as i128) <= *self.sigma.denom() as i128
    }
}

/// Iterates over all off-diagonal pairs for support `Q`, in the order
/// `(first index, second index)` of [`reduced_fractions`].
pub fn offdiagonal_pairs(q_max: usize) -> impl Iterator<Item = FractionPair> {
    let fractions = reduced_fractions(q_max);
    let n = fractions.len();
    (0..n).flat_map(move |a| {
        let fractions = fractions.clone();
        (a + 1..n).filter_map(move |b| FractionPair::new(fractions[a], fractions[b]))
    })
}

/// All ordered pairs `(j/l, r/t)` of reduced fractions with `delta > 0`.
pub fn enumerate_offdiagonal_pairs(q_max: usize) -> Vec<FractionPair> {
    offdiagonal_pairs(q_max).collect()
}

/// A pair with `sigma <= 1/A`, and whether its weight
/// `F_h(j/l) F_h(r/t)` vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearIntegerPair {
    pub pair: FractionPair,
    pub weight_vanishes: bool,
}

/// Off-diagonal pairs with `sigma <= 1/A`, compared exactly.
///
/// The weight check uses half-width `h`.
pub fn classify_near_integer_pairs(q_max: usize, a: u64, h: u64) -> Result<Vec<NearIntegerPair>> {
    if a < 1 {
        return Err(Error::invalid("threshold A must be >= 1"));
    }
    let fractions = reduced_fractions(q_max);
    let mut out = Vec::new();
    for (ia, fa) in fractions.iter().enumerate() {
        let (j, l) = (fa.num() as i128, fa.den() as i128);
        for fb in &fractions[ia + 1..] {
            let (r, t) = (fb.num() as i128, fb.den() as i128);
            // both fractions lie in (0, 1/2], so the sum lies in (0, 1]
            let den = l * t;
            let s = j * t + r * l;
            let dist = s.min(den - s);
            if dist * a as i128 > den {
                continue;
            }
            let pair = FractionPair::new(*fa, *fb).expect("distinct reduced fractions");
            let weight = big_f(pair.first, h)? * big_f(pair.second, h)?;
            out.push(NearIntegerPair {
                pair,
                weight_vanishes: weight == 0.0,
            });
        }
    }
    Ok(out)
}

/// `A = max(N ceil(log N), 2Q + 1)`.
pub fn default_threshold(params: &WindowParams) -> u64 {
    let n = params.n() as u64;
    let log_ceil = (params.n() as f64).ln().ceil() as u64;
    (n * log_ceil).max(2 * params.q() as u64 + 1)
}

/// `sum_x sin^2(2 pi x j / l) = N/2 - C(2j/l)/2`.
fn sin_sq_sum(j: i64, l: i64, n: u64) -> f64 {
    0.5 * n as f64 - 0.5 * cosine_exp_sum_rational(2 * j, l, n)
}

/// Weights `R_l F_h(j/l)` for every reduced fraction, in list order.
fn fraction_weights(g: &FunctionTable, params: &WindowParams, fractions: &[RationalPhase]) -> Result<Vec<f64>> {
    let q = params.q();
    let r: Vec<f64> = (0..=q)
        .map(|l| if l < 2 { Ok(0.0) } else { ramanujan_coefficient(g, q, l) })
        .collect::<Result<_>>()?;
    fractions
        .iter()
        .map(|p| Ok(r[p.den() as usize] * big_f(*p, params.h() as u64)?))
        .collect()
}

/// The diagonal `D_f = sum_l R_l^2 sum*_j F_h(j/l)^2 sum_x sin^2(2 pi x j / l)`.
pub fn diagonal_term(g: &FunctionTable, params: &WindowParams) -> Result<f64> {
    let fractions = reduced_fractions(params.q());
    let weights = fraction_weights(g, params, &fractions)?;
    let n = params.n() as u64;
    let terms: Vec<f64> = fractions
        .iter()
        .zip(&weights)
        .map(|(p, w)| {
            if *w == 0.0 {
                0.0
            } else {
                w * w * sin_sq_sum(p.num(), p.den(), n)
            }
        })
        .collect();
    Ok(deterministic_sum(&terms))
}

/// The two off-diagonal parts `(sum w w C(delta), sum w w C(sigma))`; the
/// off-diagonal contribution to `I_f` is their difference.
pub fn offdiagonal_term(g: &FunctionTable, params: &WindowParams, max_pairs: u64) -> Result<(f64, f64)> {
    let fractions = reduced_fractions(params.q());
    let count = offdiagonal_pair_count(params.q());
    if count > max_pairs {
        return Err(Error::BudgetExceeded {
            what: "off-diagonal pair count",
            count,
            budget: max_pairs,
        });
    }
    let weights = fraction_weights(g, params, &fractions)?;
    let n = params.n() as u64;
    let mut delta_terms = Vec::with_capacity(count as usize);
    let mut sigma_terms = Vec::with_capacity(count as usize);
    for (ia, fa) in fractions.iter().enumerate() {
        for (ib, fb) in fractions.iter().enumerate().skip(ia + 1) {
            let w = weights[ia] * weights[ib];
            if w == 0.0 {
                continue;
            }
            let pair = FractionPair::new(*fa, *fb).expect("distinct reduced fractions");
            let c_delta = cosine_exp_sum_rational(*pair.delta.numer(), *pair.delta.denom(), n);
            let c_sigma = cosine_exp_sum_rational(*pair.sigma.numer(), *pair.sigma.denom(), n);
            delta_terms.push(w * c_delta);
            sigma_terms.push(w * c_sigma);
        }
    }
    Ok((deterministic_sum(&delta_terms), deterministic_sum(&sigma_terms)))
}

/// Budgets for [`reconcile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconcileOptions {
    pub max_q: usize,
    pub max_pairs: u64,
    /// Near-integer threshold `A`; `None` selects [`default_threshold`].
    pub threshold: Option<u64>,
}

impl Default for ReconcileOptions {
    fn default() -> Self {
        ReconcileOptions {
            max_q: DEFAULT_MAX_Q,
            max_pairs: DEFAULT_MAX_PAIRS,
            threshold: None,
        }
    }
}

/// `I_f` three ways plus the spectral parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub i_direct: f64,
    pub i_via_chi: f64,
    pub diagonal: f64,
    pub offdiag_delta: f64,
    pub offdiag_sigma: f64,
    /// `i_direct - (diagonal + offdiag_delta - offdiag_sigma)`.
    pub residual: f64,
    pub pair_count: u64,
    /// Pairs with `sigma <= 1/A`.
    pub near_pair_count: u64,
}

/// Runs every route for `f = g * 1` and reports how they close.
pub fn reconcile(g: &FunctionTable, params: &WindowParams, options: &ReconcileOptions) -> Result<DecompositionReport> {
    if params.q() > options.max_q {
        return Err(Error::BudgetExceeded {
            what: "support bound Q",
            count: params.q() as u64,
            budget: options.max_q as u64,
        });
    }
    let support: Vec<f64> = (1..=params.q()).map(|q| g.get(q).unwrap_or(0.0)).collect();
    let g = FunctionTable::new(g.name(), support)?;
    let f = convolve_with_ones(&g, params.table_len())?;

    let i_direct = symmetry_integral(&f, params)?;
    let i_via_chi = aggregate_chi_series(&g, params)?.sum_of_squares();
    let diagonal = diagonal_term(&g, params)?;
    let (offdiag_delta, offdiag_sigma) = offdiagonal_term(&g, params, options.max_pairs)?;
    let residual = i_direct - (diagonal + offdiag_delta - offdiag_sigma);

    let threshold = options.threshold.unwrap_or_else(|| default_threshold(params));
    let near_pair_count = classify_near_integer_pairs(params.q(), threshold, params.h() as u64)?.len() as u64;

    Ok(DecompositionReport {
        i_direct,
        i_via_chi,
        diagonal,
        offdiag_delta,
        offdiag_sigma,
        residual,
        pair_count: offdiagonal_pair_count(params.q()),
        near_pair_count,
    })
}
