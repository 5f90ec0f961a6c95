//! Plain-text file formats: table, series, pair and scan CSVs, and grid files.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! emitted file reads back to identical values.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scaling::{FunctionSpec, ScanCell, ScanRow};
use crate::spectral::FractionPair;
use crate::symmetry::SymmetrySeries;
use crate::tables::FunctionTable;

pub const TABLE_HEADER: &str = "n,value";
pub const SERIES_HEADER: &str = "x,value";
pub const PAIR_HEADER: &str = "j,l,r,t,delta_num,delta_den,sigma_num,sigma_den";
pub const SCAN_HEADER: &str = "function,N,h,Q,integral,ratio,max_g,theorem_regime";
pub const GRID_HEADER: &str = "function,N,h,Q";
pub const CHI_HEADER: &str = "q,h,x,chi_direct,chi_fourier,abs_err";

pub fn table_csv(table: &FunctionTable) -> String {
    let mut out = String::with_capacity(16 * table.len());
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for (i, v) in table.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, v);
    }
    out
}

pub fn series_csv(series: &SymmetrySeries) -> String {
    let mut out = String::with_capacity(16 * series.values.len());
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (x, v) in series.iter() {
        let _ = writeln!(out, "{x},{v}");
    }
    out
}

pub fn pairs_csv<'a>(pairs: impl IntoIterator<Item = &'a FractionPair>) -> String {
    let mut out = String::new();
    out.push_str(PAIR_HEADER);
    out.push('\n');
    for p in pairs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.first.num(),
            p.first.den(),
            p.second.num(),
            p.second.den(),
            p.delta.numer(),
            p.delta.denom(),
            p.sigma.numer(),
            p.sigma.denom()
        );
    }
    out
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.function_name, r.n, r.h, r.q, r.integral, r.ratio, r.max_g, r.theorem_regime
        );
    }
    out
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(source: &str, line: usize, name: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(source, line, format!("bad {name} `{raw}`")))
}

fn expect_header(source: &str, line: usize, got: &str, want: &str) -> Result<()> {
    let normalized: String = got.split(',').map(str::trim).collect::<Vec<_>>().join(",");
    if normalized != want {
        return Err(Error::parse(
            source,
            line,
            format!("expected header `{want}`, got `{got}`"),
        ));
    }
    Ok(())
}

/// Parses a grid CSV (`function,N,h,Q`). Every row is validated; any error
/// rejects the whole file.
pub fn parse_grid(text: &str, source: &str) -> Result<Vec<ScanCell>> {
    let mut lines = content_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(Error::EmptyInput(format!("{source}: empty grid")));
    };
    expect_header(source, hline, header, GRID_HEADER)?;
    let mut cells = Vec::new();
    for (line, row) in lines {
        let parts: Vec<&str> = row.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::parse(
                source,
                line,
                format!("expected 4 fields, got {}", parts.len()),
            ));
        }
        let function: FunctionSpec = parts[0]
            .parse()
            .map_err(|e| Error::parse(source, line, format!("{e}")))?;
        let cell = ScanCell {
            function,
            n: field(source, line, "N", parts[1])?,
            h: field(source, line, "h", parts[2])?,
            q: field(source, line, "Q", parts[3])?,
        };
        cell.params().map_err(|e| Error::parse(source, line, format!("{e}")))?;
        cells.push(cell);
    }
    if cells.is_empty() {
        return Err(Error::EmptyInput(format!("{source}: empty grid")));
    }
    Ok(cells)
}

pub fn read_grid_file(path: &Path) -> Result<Vec<ScanCell>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_grid(&text, &path.display().to_string())
}

/// Parses a scan CSV as written by [`scan_csv`].
pub fn parse_scan(text: &str, source: &str) -> Result<Vec<ScanRow>> {
    let mut lines = content_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(Error::EmptyInput(format!("{source}: empty scan file")));
    };
    expect_header(source, hline, header, SCAN_HEADER)?;
    let mut rows = Vec::new();
    for (line, row) in lines {
        let p: Vec<&str> = row.split(',').collect();
        if p.len() != 8 {
            return Err(Error::parse(
                source,
                line,
                format!("expected 8 fields, got {}", p.len()),
            ));
        }
        rows.push(ScanRow {
            function_name: p[0].trim().to_string(),
            n: field(source, line, "N", p[1])?,
            h: field(source, line, "h", p[2])?,
            q: field(source, line, "Q", p[3])?,
            integral: field(source, line, "integral", p[4])?,
            ratio: field(source, line, "ratio", p[5])?,
            max_g: field(source, line, "max_g", p[6])?,
            theorem_regime: field(source, line, "theorem_regime", p[7])?,
        });
    }
    Ok(rows)
}

pub fn read_scan_file(path: &Path) -> Result<Vec<ScanRow>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scan(&text, &path.display().to_string())
}

/// Parses a table CSV (`n,value`); indices must run 1, 2, 3, ...
pub fn parse_table(text: &str, source: &str, name: &str) -> Result<FunctionTable> {
    let mut lines = content_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(Error::EmptyInput(format!("{source}: empty table")));
    };
    expect_header(source, hline, header, TABLE_HEADER)?;
    let mut values = Vec::new();
    for (line, row) in lines {
        let Some((n, v)) = row.split_once(',') else {
            return Err(Error::parse(source, line, "expected `n,value`"));
        };
        let n: usize = field(source, line, "n", n)?;
        if n != values.len() + 1 {
            return Err(Error::parse(
                source,
                line,
                format!("expected n = {}, got {n}", values.len() + 1),
            ));
        }
        values.push(field(source, line, "value", v)?);
    }
    FunctionTable::new(name, values)
}
