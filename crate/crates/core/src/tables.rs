//! Arithmetic-function tables on `[1, M]`: generators `g`, their convolutions
//! `f = g * 1`, and the standard sieved functions (`d`, `d_k`, `Lambda`, `mu`,
//! `mu^2`).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest magnitude at which every integer is representable in an `f64`.
const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Values of an arithmetic function on `[1, M]`.
///
/// Index origin is 1: `value(n)` is `f(n)`. The table is immutable once
/// built; its prefix sums are computed lazily and cached.
#[derive(Debug, Clone)]
pub struct FunctionTable {
    name: String,
    values: Vec<f64>,
    exact: bool,
    prefix: OnceLock<Vec<f64>>,
}

impl FunctionTable {
    /// Builds a table from `values[0] = f(1), values[1] = f(2), ...`.
    ///
    /// The exactness flag is derived: it is set when every value is an
    /// integer of magnitude below 2^53.
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::invalid(format!("table `{name}` must have length >= 1")));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "table `{name}` has a non-finite value at n = {}",
                pos + 1
            )));
        }
        let exact = values.iter().all(|v| v.fract() == 0.0 && v.abs() < EXACT_LIMIT);
        Ok(FunctionTable {
            name,
            values,
            exact,
            prefix: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// First index covered; always 1.
    pub fn start(&self) -> usize {
        1
    }

    /// `M`, the last index covered.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `f(n)`. Panics when `n` is outside `[1, M]`.
    pub fn value(&self, n: usize) -> f64 {
        assert!(
            n >= 1 && n <= self.values.len(),
            "index {n} outside [1, {}] of table `{}`",
            self.values.len(),
            self.name
        );
        self.values[n - 1]
    }

    /// `f(n)`, or `None` outside `[1, M]`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// Values in index order, `values()[n - 1] = f(n)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `P[0] = 0`, `P[n] = f(1) + ... + f(n)`, summed left to right.
    pub fn prefix_sums(&self) -> &[f64] {
        self.prefix.get_or_init(|| {
            let mut out = Vec::with_capacity(self.values.len() + 1);
            let mut acc = 0.0;
            out.push(acc);
            for &v in &self.values {
                acc += v;
                out.push(acc);
            }
            out
        })
    }

    pub(crate) fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Generator kinds for `g`; every built generator is supported in `[1, Q]`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `g = [q = 1]`, so `g * 1` is the constant one.
    DeltaOne,
    /// `g = [q = q0]`.
    DeltaAt(usize),
    /// `g = 1`, so `g * 1` is the (truncated) divisor function.
    Ones,
    /// `g = mu`, so `g * 1` is the unit at full support.
    Moebius,
    /// `g(q) = -mu(q) log q`, so `g * 1 = Lambda` at full support.
    NegMoebiusLog,
    /// `g = d_{k-1}`, so `g * 1 = d_k` at full support.
    DivisorKMinusOne(u32),
    /// `q value` pairs read from a file.
    Custom(PathBuf),
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::DeltaOne => write!(f, "delta_one"),
            GeneratorSpec::DeltaAt(q0) => write!(f, "delta_at:{q0}"),
            GeneratorSpec::Ones => write!(f, "ones"),
            GeneratorSpec::Moebius => write!(f, "moebius"),
            GeneratorSpec::NegMoebiusLog => write!(f, "neg_moebius_log"),
            GeneratorSpec::DivisorKMinusOne(k) => write!(f, "divisor_k_minus_1:{k}"),
            GeneratorSpec::Custom(path) => write!(f, "custom:{}", path.display()),
        }
    }
}

/// Splits `name:arg` or `name(arg)` into its parts.
fn split_arg(s: &str) -> (&str, Option<&str>) {
    if let Some((head, tail)) = s.split_once(':') {
        return (head, Some(tail));
    }
    if let Some((head, tail)) = s.split_once('(') {
        if let Some(arg) = tail.strip_suffix(')') {
            return (head, Some(arg));
        }
    }
    (s, None)
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = split_arg(s);
        let need_int = |what: &str| -> Result<u64> {
            let arg = arg.ok_or_else(|| Error::invalid(format!("generator `{what}` needs an argument")))?;
            arg.trim()
                .parse::<u64>()
                .map_err(|_| Error::invalid(format!("generator `{what}`: bad integer `{arg}`")))
        };
        match head {
            "delta_one" => Ok(GeneratorSpec::DeltaOne),
            "delta_at" => Ok(GeneratorSpec::DeltaAt(need_int("delta_at")? as usize)),
            "ones" => Ok(GeneratorSpec::Ones),
            "moebius" | "mu" => Ok(GeneratorSpec::Moebius),
            "neg_moebius_log" => Ok(GeneratorSpec::NegMoebiusLog),
            "divisor_k_minus_1" => Ok(GeneratorSpec::DivisorKMinusOne(need_int("divisor_k_minus_1")? as u32)),
            "custom" => match arg {
                Some(path) if !path.is_empty() => Ok(GeneratorSpec::Custom(PathBuf::from(path))),
                _ => Err(Error::invalid("generator `custom` needs a file path")),
            },
            _ => Err(Error::invalid(format!("unknown generator `{s}`"))),
        }
    }
}

/// Builds the generator table `g` on `[1, Q]`.
pub fn build_generator(spec: &GeneratorSpec, q: usize) -> Result<FunctionTable> {
    if q < 1 {
        return Err(Error::invalid("support bound Q must be >= 1"));
    }
    let name = format!("g:{spec}");
    let values = match spec {
        GeneratorSpec::DeltaOne => {
            let mut v = vec![0.0; q];
            v[0] = 1.0;
            v
        }
        GeneratorSpec::DeltaAt(q0) => {
            if *q0 == 0 {
                return Err(Error::invalid("delta_at needs q0 >= 1"));
            }
            let mut v = vec![0.0; q];
            if *q0 <= q {
                v[q0 - 1] = 1.0;
            }
            v
        }
        GeneratorSpec::Ones => vec![1.0; q],
        GeneratorSpec::Moebius => moebius_values(q).into_iter().map(f64::from).collect(),
        GeneratorSpec::NegMoebiusLog => moebius_values(q)
            .into_iter()
            .enumerate()
            .map(|(i, mu)| {
                if mu == 0 || i == 0 {
                    0.0
                } else {
                    -f64::from(mu) * ((i + 1) as f64).ln()
                }
            })
            .collect(),
        GeneratorSpec::DivisorKMinusOne(k) => {
            if *k == 0 {
                return Err(Error::invalid("divisor_k_minus_1 needs k >= 1"));
            }
            if *k == 1 {
                let mut v = vec![0.0; q];
                v[0] = 1.0;
                v
            } else {
                divisor_k(*k - 1, q)?.values
            }
        }
        GeneratorSpec::Custom(path) => return read_generator_file(path, q),
    };
    FunctionTable::new(name, values)
}

/// Reads a custom generator file: one `q value` pair per line, whitespace
/// separated. Blank lines and `#` comments are skipped; absent `q` means 0;
/// entries above `Q` are dropped.
pub fn read_generator_file(path: &Path, q: usize) -> Result<FunctionTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_generator_text(&text, &path.display().to_string(), q)
}

/// Parses the custom generator format from memory.
pub fn parse_generator_text(text: &str, source_name: &str, q: usize) -> Result<FunctionTable> {
    if q < 1 {
        return Err(Error::invalid("support bound Q must be >= 1"));
    }
    let mut values = vec![0.0; q];
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(qs), Some(vs), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(
                source_name,
                line_no,
                "expected exactly two fields `q value`",
            ));
        };
        let qi: usize = qs
            .parse()
            .map_err(|_| Error::parse(source_name, line_no, format!("bad index `{qs}`")))?;
        if qi == 0 {
            return Err(Error::parse(source_name, line_no, "index q must be >= 1"));
        }
        let v: f64 = vs
            .parse()
            .map_err(|_| Error::parse(source_name, line_no, format!("bad value `{vs}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(source_name, line_no, format!("non-finite value `{vs}`")));
        }
        if !seen.insert(qi) {
            return Err(Error::parse(source_name, line_no, format!("duplicate index {qi}")));
        }
        if qi <= q {
            values[qi - 1] = v;
        }
    }
    FunctionTable::new(format!("g:custom:{source_name}"), values)
}

/// `f(n) = sum_{q | n, q <= Q} g(q)` for `1 <= n <= M`, where `Q = g.len()`.
///
/// Harmonic sieve: each `q` scatters `g(q)` onto its multiples, so the work is
/// `sum_{q <= Q} M / q`. Each `f(n)` accumulates its divisors in increasing order.
pub fn convolve_with_ones(g: &FunctionTable, m: usize) -> Result<FunctionTable> {
    if m < 1 {
        return Err(Error::invalid("table length M must be >= 1"));
    }
    let mut f = vec![0.0; m];
    let support = g.len().min(m);
    for (q, &gq) in (1..=support).zip(g.values()) {
        if gq == 0.0 {
            continue;
        }
        for slot in f[q - 1..].iter_mut().step_by(q) {
            *slot += gq;
        }
    }
    let name = match g.name().strip_prefix("g:") {
        Some(rest) => format!("{rest}*1"),
        None => format!("{}*1", g.name()),
    };
    FunctionTable::new(name, f)
}

/// Pointwise `sum_{q | n} g(q)` by trial division. Test oracle for
/// [`convolve_with_ones`]; divisors beyond the table are ignored.
pub fn divisor_sum_oracle(n: usize, g: &FunctionTable) -> f64 {
    assert!(n >= 1, "n must be >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small
        .into_iter()
        .chain(large.into_iter().rev())
        .filter_map(|q| g.get(q))
        .fold(0.0, |acc, v| acc + v)
}

/// Standard arithmetic functions produced by [`sieve_standard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFunction {
    /// Divisor function `d = d_2`.
    Divisor,
    /// `k`-fold divisor function.
    DivisorK(u32),
    /// von Mangoldt `Lambda`.
    VonMangoldt,
    Moebius,
    MoebiusSq,
}

impl fmt::Display for StandardFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardFunction::Divisor => write!(f, "d"),
            StandardFunction::DivisorK(k) => write!(f, "d_{k}"),
            StandardFunction::VonMangoldt => write!(f, "Lambda"),
            StandardFunction::Moebius => write!(f, "moebius"),
            StandardFunction::MoebiusSq => write!(f, "moebius_sq"),
        }
    }
}

impl FromStr for StandardFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "d" => Ok(StandardFunction::Divisor),
            "Lambda" | "lambda" | "von_mangoldt" => Ok(StandardFunction::VonMangoldt),
            "moebius" | "mu" => Ok(StandardFunction::Moebius),
            "moebius_sq" | "mu_sq" => Ok(StandardFunction::MoebiusSq),
            other => {
                let k = other
                    .strip_prefix("d_")
                    .or_else(|| other.strip_prefix('d'))
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown function `{other}`")))?;
                Ok(StandardFunction::DivisorK(k))
            }
        }
    }
}

/// Table of a standard arithmetic function on `[1, M]`.
pub fn sieve_standard(function: StandardFunction, m: usize) -> Result<FunctionTable> {
    if m < 1 {
        return Err(Error::invalid("table length M must be >= 1"));
    }
    let table = match function {
        StandardFunction::Divisor => divisor_k(2, m)?,
        StandardFunction::DivisorK(k) => divisor_k(k, m)?,
        StandardFunction::VonMangoldt => FunctionTable::new("Lambda", von_mangoldt_values(m))?,
        StandardFunction::Moebius => {
            FunctionTable::new("moebius", moebius_values(m).into_iter().map(f64::from).collect())?
        }
        StandardFunction::MoebiusSq => FunctionTable::new(
            "moebius_sq",
            moebius_values(m).into_iter().map(|mu| f64::from(mu * mu)).collect(),
        )?,
    };
    Ok(table.with_name(function.to_string()))
}

/// `d_k` on `[1, M]` by `k - 1` harmonic-sieve convolutions of the ones table.
fn divisor_k(k: u32, m: usize) -> Result<FunctionTable> {
    if k == 0 {
        return Err(Error::invalid("d_k needs k >= 1"));
    }
    let mut f = FunctionTable::new("d_1", vec![1.0; m])?;
    for _ in 1..k {
        f = convolve_with_ones(&f, m)?;
    }
    let name = if k == 2 { "d".to_string() } else { format!("d_{k}") };
    Ok(f.with_name(name))
}

/// Linear sieve for `mu` on `[1, M]`.
fn moebius_values(m: usize) -> Vec<i32> {
    let mut mu = vec![0i32; m + 1];
    let mut composite = vec![false; m + 1];
    let mut primes = Vec::new();
    if m >= 1 {
        mu[1] = 1;
    }
    for i in 2..=m {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > m {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu.remove(0);
    mu
}

/// Prime-power sieve for `Lambda` on `[1, M]`.
fn von_mangoldt_values(m: usize) -> Vec<f64> {
    let mut lambda = vec![0.0; m + 1];
    let mut composite = vec![false; m + 1];
    for p in 2..=m {
        if composite[p] {
            continue;
        }
        for c in (p * p..=m).step_by(p) {
            composite[c] = true;
        }
        let log_p = (p as f64).ln();
        let mut pk = p;
        loop {
            lambda[pk] = log_p;
            match pk.checked_mul(p) {
                Some(next) if next <= m => pk = next,
                _ => break,
            }
        }
    }
    lambda.remove(0);
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(t: &FunctionTable) -> Vec<f64> {
        t.values().to_vec()
    }

    #[test]
    fn generator_examples() {
        let g = build_generator(&GeneratorSpec::DeltaOne, 5).unwrap();
        assert_eq!(vals(&g), vec![1.0, 0.0, 0.0, 0.0, 0.0]);

        let g = build_generator(&GeneratorSpec::Moebius, 6).unwrap();
        assert_eq!(vals(&g), vec![1.0, -1.0, -1.0, 0.0, -1.0, 1.0]);

        let g = build_generator(&GeneratorSpec::NegMoebiusLog, 4).unwrap();
        assert_eq!(g.value(1), 0.0);
        assert!(g.value(1).is_sign_positive());
        assert_eq!(g.value(2), 2f64.ln());
        assert_eq!(g.value(3), 3f64.ln());
        assert_eq!(g.value(4), 0.0);
        assert!(!g.is_exact());
    }

    #[test]
    fn generator_rejects_zero_support() {
        assert!(build_generator(&GeneratorSpec::Ones, 0).is_err());
        assert!(build_generator(&GeneratorSpec::DeltaAt(0), 4).is_err());
        assert!(build_generator(&GeneratorSpec::DivisorKMinusOne(0), 4).is_err());
    }

    #[test]
    fn delta_at_beyond_support_is_zero() {
        let g = build_generator(&GeneratorSpec::DeltaAt(7), 5).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn generator_names_round_trip() {
        for s in [
            "delta_one",
            "delta_at:2",
            "ones",
            "moebius",
            "neg_moebius_log",
            "divisor_k_minus_1:3",
            "custom:/tmp/g.txt",
        ] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "delta_at(5)".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::DeltaAt(5)
        );
        assert!("bogus".parse::<GeneratorSpec>().is_err());
        assert!("delta_at".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn custom_text_format() {
        let g = parse_generator_text("# header\n1 2.5\n\n4 -1   # tail\n9 7\n", "mem", 5).unwrap();
        assert_eq!(vals(&g), vec![2.5, 0.0, 0.0, -1.0, 0.0]);

        let err = parse_generator_text("1 2\n3\n", "mem", 5).unwrap_err();
        assert!(err.to_string().contains("mem:2"), "{err}");
        assert!(parse_generator_text("0 1\n", "mem", 5).is_err());
        assert!(parse_generator_text("1 x\n", "mem", 5).is_err());
        assert!(parse_generator_text("1 1\n1 2\n", "mem", 5).is_err());
        assert!(parse_generator_text("1 inf\n", "mem", 5).is_err());
    }

    #[test]
    fn convolution_examples() {
        let ones = build_generator(&GeneratorSpec::Ones, 10).unwrap();
        let f = convolve_with_ones(&ones, 10).unwrap();
        assert_eq!(f.value(6), 4.0);

        let mu = build_generator(&GeneratorSpec::Moebius, 10).unwrap();
        let f = convolve_with_ones(&mu, 10).unwrap();
        let mut unit = vec![0.0; 10];
        unit[0] = 1.0;
        assert_eq!(vals(&f), unit);

        let two = build_generator(&GeneratorSpec::Ones, 2).unwrap();
        let f = convolve_with_ones(&two, 10).unwrap();
        assert_eq!(f.value(6), 2.0);
        assert_eq!(f.value(7), 1.0);
    }

    #[test]
    fn divisor_sum_oracle_examples() {
        let ones = build_generator(&GeneratorSpec::Ones, 10).unwrap();
        assert_eq!(divisor_sum_oracle(6, &ones), 4.0);
        let g = build_generator(&GeneratorSpec::DeltaAt(3), 10).unwrap();
        assert_eq!(divisor_sum_oracle(1, &g), g.value(1));
        let mu = build_generator(&GeneratorSpec::Moebius, 12).unwrap();
        assert_eq!(divisor_sum_oracle(12, &mu), 0.0);
    }

    /// Ordered triples `(a, b, c)` with `abc = n`.
    fn d3_brute(n: usize) -> usize {
        let mut count = 0;
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    if a * b * c == n {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn sieve_examples() {
        let d3 = sieve_standard(StandardFunction::DivisorK(3), 4).unwrap();
        assert_eq!(d3_brute(4), 6);
        assert_eq!(d3.value(4), 6.0);

        let lam = sieve_standard(StandardFunction::VonMangoldt, 8).unwrap();
        assert_eq!(lam.value(8), 2f64.ln());
        assert_eq!(lam.value(6), 0.0);

        let mu = sieve_standard(StandardFunction::Moebius, 6).unwrap();
        assert_eq!(mu.value(6), 1.0);

        assert!(sieve_standard(StandardFunction::DivisorK(0), 4).is_err());
    }

    #[test]
    fn d3_matches_triple_enumeration() {
        let d3 = sieve_standard(StandardFunction::DivisorK(3), 60).unwrap();
        for n in 1..=60 {
            assert_eq!(d3.value(n), d3_brute(n) as f64, "n = {n}");
        }
    }

    #[test]
    fn d2_equals_d() {
        let d = sieve_standard(StandardFunction::Divisor, 5000).unwrap();
        let d2 = sieve_standard(StandardFunction::DivisorK(2), 5000).unwrap();
        assert_eq!(d.values(), d2.values());
        assert!(d.is_exact());
    }

    #[test]
    fn moebius_inversion_gives_unit() {
        let mu = sieve_standard(StandardFunction::Moebius, 10_000).unwrap();
        let f = convolve_with_ones(&mu, 10_000).unwrap();
        for n in 1..=10_000 {
            assert_eq!(f.value(n), if n == 1 { 1.0 } else { 0.0 }, "n = {n}");
        }
    }

    #[test]
    fn chebyshev_identity() {
        let m = 10_000;
        let lam = sieve_standard(StandardFunction::VonMangoldt, m).unwrap();
        let psi = convolve_with_ones(&lam, m).unwrap();
        let via_generator = convolve_with_ones(&build_generator(&GeneratorSpec::NegMoebiusLog, m).unwrap(), m).unwrap();
        for n in 1..=m {
            let log_n = (n as f64).ln();
            assert!((psi.value(n) - log_n).abs() <= 1e-9, "n = {n}");
            assert!((via_generator.value(n) - lam.value(n)).abs() <= 1e-9, "n = {n}");
        }
    }

    #[test]
    fn moebius_sq_marks_squarefree() {
        let t = sieve_standard(StandardFunction::MoebiusSq, 12).unwrap();
        assert_eq!(
            vals(&t),
            vec![1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn standard_function_names() {
        assert_eq!("d".parse::<StandardFunction>().unwrap(), StandardFunction::Divisor);
        assert_eq!(
            "d_3".parse::<StandardFunction>().unwrap(),
            StandardFunction::DivisorK(3)
        );
        assert_eq!("d3".parse::<StandardFunction>().unwrap(), StandardFunction::DivisorK(3));
        assert_eq!(
            "Lambda".parse::<StandardFunction>().unwrap(),
            StandardFunction::VonMangoldt
        );
        assert!("dx".parse::<StandardFunction>().is_err());
    }

    #[test]
    fn prefix_sums_accumulate() {
        let t = FunctionTable::new("t", vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.prefix_sums(), &[0.0, 1.0, 3.0, 6.0]);
        assert!(FunctionTable::new("e", vec![]).is_err());
        assert!(FunctionTable::new("n", vec![f64::NAN]).is_err());
    }
}
