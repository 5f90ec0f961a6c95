//! Dashed symmetry sums `S'_f(x, h)` and the symmetry integral `I_f(N, h)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tables::FunctionTable;

/// Number of consecutive terms summed sequentially before block partials are
/// combined (in index order).
pub const SUM_BLOCK: usize = 1 << 14;

/// Guard for the quadratic brute-force oracle.
pub const BRUTEFORCE_MAX_N: usize = 100_000;

/// Sum with a fixed association order: sequential within blocks of
/// [`SUM_BLOCK`] terms, then block partials left to right. The result does
/// not depend on how the blocks are scheduled.
pub fn deterministic_sum(terms: &[f64]) -> f64 {
    let partials: Vec<f64> = terms
        .par_chunks(SUM_BLOCK)
        .map(|block| block.iter().fold(0.0, |acc, v| acc + v))
        .collect();
    partials.into_iter().fold(0.0, |acc, v| acc + v)
}

/// The triple `(N, h, Q)`: `x` runs over `(N, 2N]`, windows are
/// `[x - h, x + h]`, generators live on `[1, Q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowParams {
    n: usize,
    h: usize,
    q: usize,
}

impl WindowParams {
    /// Validates `1 <= h < N` and `1 <= Q <= N`.
    pub fn new(n: usize, h: usize, q: usize) -> Result<Self> {
        if h < 1 {
            return Err(Error::invalid("h must be >= 1"));
        }
        if h >= n {
            return Err(Error::invalid(format!("need h < N (h = {h}, N = {n})")));
        }
        if q < 1 {
            return Err(Error::invalid("Q must be >= 1"));
        }
        if q > n {
            return Err(Error::invalid(format!("need Q <= N (Q = {q}, N = {n})")));
        }
        Ok(WindowParams { n, h, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `log Q / log N`.
    pub fn level(&self) -> f64 {
        (self.q as f64).ln() / (self.n as f64).ln()
    }

    /// `h^2 <= N`, the finite stand-in for `h = o(sqrt N)`.
    pub fn theorem_regime(&self) -> bool {
        self.h * self.h <= self.n
    }

    /// Table length every route needs: `2N + h`.
    pub fn table_len(&self) -> usize {
        2 * self.n + self.h
    }

    /// The `x` range `(N, 2N]`.
    pub fn xs(&self) -> std::ops::RangeInclusive<usize> {
        self.n + 1..=2 * self.n
    }
}

/// `S'_f(x, h)` for every `x` in `(N, 2N]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetrySeries {
    pub params: WindowParams,
    /// `values[i]` belongs to `x = N + 1 + i`.
    pub values: Vec<f64>,
}

impl SymmetrySeries {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.params.xs().zip(self.values.iter().copied())
    }

    pub fn value_at(&self, x: usize) -> Option<f64> {
        x.checked_sub(self.params.n + 1)
            .and_then(|i| self.values.get(i).copied())
    }

    /// `sum_x S'(x)^2` with the deterministic summation order.
    pub fn sum_of_squares(&self) -> f64 {
        let squares: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        deterministic_sum(&squares)
    }
}

fn check_len(f: &FunctionTable, params: &WindowParams) -> Result<()> {
    if f.len() < params.table_len() {
        return Err(Error::TableTooShort {
            name: f.name().to_string(),
            len: f.len(),
            needed: params.table_len(),
        });
    }
    Ok(())
}

/// Right window sum minus left window sum minus the endpoint correction,
/// all from the prefix array. Shared by the per-`x` and series routes so the
/// two agree bit for bit.
#[inline]
fn dashed_from_prefix(prefix: &[f64], values: &[f64], x: usize, h: usize) -> f64 {
    let right = prefix[x + h] - prefix[x];
    let left = prefix[x - 1] - prefix[x - h - 1];
    let endpoints = (values[x + h - 1] - values[x - h - 1]) / 2.0;
    right - left - endpoints
}

/// `S'_f(x, h) = sum_{|n - x| <= h} sgn(n - x) f(n) - (f(x + h) - f(x - h)) / 2`.
pub fn symmetry_sum(f: &FunctionTable, x: usize, h: usize) -> Result<f64> {
    if h < 1 {
        return Err(Error::invalid("h must be >= 1"));
    }
    if x <= h || x + h > f.len() {
        return Err(Error::WindowOutOfRange {
            lo: x as i64 - h as i64,
            hi: (x + h) as i64,
            len: f.len(),
        });
    }
    Ok(dashed_from_prefix(f.prefix_sums(), f.values(), x, h))
}

/// All `S'_f(x, h)` for `N < x <= 2N`, constant time per `x`.
pub fn symmetry_series(f: &FunctionTable, params: &WindowParams) -> Result<SymmetrySeries> {
    check_len(f, params)?;
    let prefix = f.prefix_sums();
    let values = f.values();
    let h = params.h;
    let out: Vec<f64> = params
        .xs()
        .into_par_iter()
        .map(|x| dashed_from_prefix(prefix, values, x, h))
        .collect();
    Ok(SymmetrySeries {
        params: *params,
        values: out,
    })
}

/// `I_f(N, h) = sum_{N < x <= 2N} S'_f(x, h)^2`.
pub fn symmetry_integral(f: &FunctionTable, params: &WindowParams) -> Result<f64> {
    Ok(symmetry_series(f, params)?.sum_of_squares())
}

/// Exact value of `int_N^{2N} |sum_{|n - x| <= h} sgn(n - x) f(n)|^2 dx`.
///
/// On an open cell `(m, m + 1)` the inner sum is the constant
/// `sum_{m < n <= m + h} f(n) - sum_{m - h < n <= m} f(n)`; the integral is the
/// sum of those constants squared over `m = N, ..., 2N - 1`.
pub fn symmetry_integral_continuous(f: &FunctionTable, params: &WindowParams) -> Result<f64> {
    check_len(f, params)?;
    let prefix = f.prefix_sums();
    let h = params.h;
    let squares: Vec<f64> = (params.n..2 * params.n)
        .into_par_iter()
        .map(|m| {
            let c = (prefix[m + h] - prefix[m]) - (prefix[m] - prefix[m - h]);
            c * c
        })
        .collect();
    Ok(deterministic_sum(&squares))
}

/// Naive double loop over `x` and the window. Test oracle only.
pub fn symmetry_integral_bruteforce(f: &FunctionTable, params: &WindowParams) -> Result<f64> {
    if params.n > BRUTEFORCE_MAX_N {
        return Err(Error::invalid(format!(
            "brute-force oracle limited to N <= {BRUTEFORCE_MAX_N} (N = {})",
            params.n
        )));
    }
    check_len(f, params)?;
    let h = params.h as i64;
    let mut total = 0.0;
    for x in params.xs() {
        let mut s = 0.0;
        for n in x - params.h..=x + params.h {
            let offset = n as i64 - x as i64;
            let weight = match offset.signum() {
                0 => continue,
                sign if offset.abs() == h => 0.5 * sign as f64,
                sign => sign as f64,
            };
            s += weight * f.value(n);
        }
        total += s * s;
    }
    Ok(total)
}
