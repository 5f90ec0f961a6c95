//! Experiment grids over `(function, N, h, Q)` and log-log slope fits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::{symmetry_integral, WindowParams};
use crate::tables::{
    build_generator, convolve_with_ones, sieve_standard, FunctionTable, GeneratorSpec, StandardFunction,
};

/// The function a scan cell measures.
///
/// Standard functions are sieved directly on `[1, 2N + h]` and ignore `Q`;
/// generator cells (written `g:<kind>`) build `g` on `[1, Q]` and convolve.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Standard(StandardFunction),
    Generator(GeneratorSpec),
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Standard(s) => write!(f, "{s}"),
            FunctionSpec::Generator(g) => write!(f, "g:{g}"),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix("g:") {
            Some(rest) => Ok(FunctionSpec::Generator(rest.parse()?)),
            None => Ok(FunctionSpec::Standard(s.parse()?)),
        }
    }
}

impl FunctionSpec {
    /// Builds `f` on `[1, 2N + h]` together with the `max_g` column value.
    pub fn table(&self, params: &WindowParams) -> Result<(FunctionTable, f64)> {
        match self {
            FunctionSpec::Standard(s) => {
                let f = sieve_standard(*s, params.table_len())?;
                let max = f.max_abs();
                Ok((f, max))
            }
            FunctionSpec::Generator(spec) => {
                let g = build_generator(spec, params.q())?;
                let f = convolve_with_ones(&g, params.table_len())?;
                Ok((f, g.max_abs()))
            }
        }
    }
}

/// One experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub function: FunctionSpec,
    pub n: usize,
    pub h: usize,
    pub q: usize,
}

impl ScanCell {
    pub fn params(&self) -> Result<WindowParams> {
        WindowParams::new(self.n, self.h, self.q)
    }
}

/// One measured cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub function_name: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub integral: f64,
    /// `integral / (N h)`.
    pub ratio: f64,
    /// `max |g|` for generator cells, `max |f|` on `[1, 2N + h]` for sieved ones.
    pub max_g: f64,
    pub theorem_regime: bool,
}

/// `h^2 <= N`.
pub fn regime_check(n: usize, h: usize) -> bool {
    (h as u128) * (h as u128) <= n as u128
}

/// Measures one cell.
pub fn evaluate_cell(cell: &ScanCell) -> Result<ScanRow> {
    let params = cell.params()?;
    let (f, max_g) = cell.function.table(&params)?;
    let integral = symmetry_integral(&f, &params)?;
    Ok(ScanRow {
        function_name: cell.function.to_string(),
        n: cell.n,
        h: cell.h,
        q: cell.q,
        integral,
        ratio: integral / (cell.n as f64 * cell.h as f64),
        max_g,
        theorem_regime: regime_check(cell.n, cell.h),
    })
}

/// Measures every cell; failures are reported in place and the scan goes on.
/// Output order is input order.
pub fn run_scan(grid: &[ScanCell]) -> Vec<Result<ScanRow>> {
    grid.par_iter().map(evaluate_cell).collect()
}

/// Least-squares fit of `log(integral)` against `log(N h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Rows dropped because their integral was zero.
    #[serde(skip)]
    pub excluded: usize,
}

/// Ordinary least squares on `(log(N h), log integral)`; zero integrals are
/// excluded and counted.
pub fn fit_power_law(rows: &[ScanRow]) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.integral > 0.0)
        .map(|r| ((r.n as f64 * r.h as f64).ln(), r.integral.ln()))
        .collect();
    let excluded = rows.len() - points.len();
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "power-law fit needs at least 3 rows with positive integral, got {}",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("power-law fit needs at least two distinct N h values"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: points.len(),
        excluded,
    })
}

/// The flagship grid: `N = 2^12 .. 2^17`, `h = floor(N^0.3)`, `Q = N`.
pub fn flagship_grid(function: FunctionSpec) -> Vec<ScanCell> {
    (12..=17)
        .map(|k| {
            let n = 1usize << k;
            ScanCell {
                function: function.clone(),
                n,
                h: (n as f64).powf(0.3).floor() as usize,
                q: n,
            }
        })
        .collect()
}
