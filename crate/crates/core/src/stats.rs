//! Exact and Monte Carlo expected subsquare counts.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{
    build_m, count_constrained, count_latin_squares, fold_constrained, ConstraintSpec, EnumerateError,
    EnumerateOptions,
};
use crate::exact::{binomial, BigCount, Ratio};
use crate::sampler::{fold_samples, SamplerConfig};
use crate::square::{LatinSquare, PartialSquare};
use crate::subsquares::{count_intercalates, enumerate_subsquares};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte-carlo",
        }
    }
}

/// An expected subsquare count. Exact estimates carry the rational value,
/// zero samples and zero standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    pub samples: u64,
    pub mean: f64,
    /// Sample standard deviation over the square root of the sample count.
    pub stderr: f64,
    pub seed: Option<u64>,
    pub exact: Option<Ratio>,
}

pub const CSV_HEADER: &str = "n,m,mode,samples,mean,stderr,seed,exact_num,exact_den";

impl Estimate {
    pub fn exact(n: usize, m: usize, value: Ratio) -> Self {
        Self {
            n,
            m,
            mode: Mode::Exact,
            samples: 0,
            mean: value.to_f64(),
            stderr: 0.0,
            seed: None,
            exact: Some(value),
        }
    }

    pub fn csv_row(&self) -> String {
        let (num, den) = match &self.exact {
            Some(r) => (r.numer().to_string(), r.denom().to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.mode.name(),
            self.samples,
            sig12(self.mean),
            sig12(self.stderr),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            num,
            den
        )
    }
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&e) {
        trim(format!("{:.*}", (11 - e).max(0) as usize, x))
    } else {
        let s = format!("{x:.11e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

fn subsquare_count(l: &LatinSquare, m: usize) -> u64 {
    if m == 2 {
        count_intercalates(l)
    } else {
        enumerate_subsquares(l, m).expect("order checked").len() as u64
    }
}

/// Values not needing a search: `n^2` for `m = 1`, one for `m = n`, zero
/// for `n/2 < m < n`.
fn trivial_em(n: usize, m: usize) -> Option<Ratio> {
    if m == 1 {
        Some(Ratio::integer((n * n) as u64))
    } else if m == n {
        Some(Ratio::one())
    } else if 2 * m > n {
        Some(Ratio::zero())
    } else {
        None
    }
}

fn check_em_params(n: usize, m: usize) -> Result<(), StatsError> {
    if n == 0 || m == 0 || m > n {
        return Err(StatsError::Params(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// Average number of order-`m` subsquares over all Latin squares of
/// order `n`.
pub fn exact_em_by_enumeration(n: usize, m: usize, eo: &EnumerateOptions) -> Result<Ratio, StatsError> {
    check_em_params(n, m)?;
    let (squares, total) = fold_constrained(
        &ConstraintSpec::new(n)?,
        eo,
        || (0u64, 0u64),
        |acc, l| {
            acc.0 += 1;
            acc.1 += enumerate_subsquares(l, m).expect("order checked").len() as u64;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    Ok(Ratio::new(total, squares))
}

/// `binom(n,m)^3 * |LS(m)| * |L_P| / |LS(n)|` with `P` the block from
/// [`build_m`] in the corner. Valid for `m <= 3`, where every order-`m`
/// square is isotopic to every other.
pub fn exact_em_by_symmetry(n: usize, m: usize, eo: &EnumerateOptions) -> Result<Ratio, StatsError> {
    check_em_params(n, m)?;
    if m > 3 {
        return Err(StatsError::Params(format!(
            "the single-witness formula needs m <= 3, got {m}"
        )));
    }
    let block = if m == 1 { LatinSquare::cyclic(1) } else { build_m(m)? };
    let mut p = PartialSquare::empty(n);
    for [r, c, s] in block.entries() {
        p.set(r, c, s).map_err(EnumerateError::from)?;
    }
    let fixed = count_constrained(&ConstraintSpec::containing(&p), eo)?;
    let total = count_latin_squares(n, eo)?;
    let small = count_latin_squares(m, eo)?;
    let c = binomial(n as u64, m as u64);
    let num = &(&(&c * &c) * &c) * &(&small * &fixed);
    Ok(Ratio::new(num, total))
}

/// Exact `E_m(n)`: closed values where available, full enumeration for
/// `n <= 5`, the single-witness formula above that.
pub fn exact_em(n: usize, m: usize, eo: &EnumerateOptions) -> Result<Ratio, StatsError> {
    check_em_params(n, m)?;
    if n > eo.max_order {
        return Err(EnumerateError::Guard { n, guard: eo.max_order }.into());
    }
    if let Some(v) = trivial_em(n, m) {
        return Ok(v);
    }
    if n <= 5 {
        exact_em_by_enumeration(n, m, eo)
    } else {
        exact_em_by_symmetry(n, m, eo)
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    count: u64,
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    fn merge(self, o: Moments) -> Moments {
        Moments {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn mean_stderr(&self) -> (f64, f64) {
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        if self.count < 2 {
            return (mean, 0.0);
        }
        // exact integer numerator of the variance
        let num = self.count as u128 * self.sum_sq - self.sum * self.sum;
        let var = num as f64 / (n * (n - 1.0));
        (mean, (var / n).sqrt())
    }
}

/// Monte Carlo `E_m(n)` from `samples` squares drawn with `config`.
pub fn estimate_em_with(
    config: &SamplerConfig,
    m: usize,
    samples: u64,
    workers: usize,
) -> Result<Estimate, StatsError> {
    let n = config.order;
    check_em_params(n, m)?;
    if samples == 0 {
        return Err(StatsError::Params("need at least one sample".into()));
    }
    let mom = fold_samples(
        config,
        samples as usize,
        workers,
        Moments::default,
        |acc, l| acc.push(subsquare_count(l, m)),
        Moments::merge,
    );
    let (mean, stderr) = mom.mean_stderr();
    Ok(Estimate {
        n,
        m,
        mode: Mode::MonteCarlo,
        samples,
        mean,
        stderr,
        seed: Some(config.seed),
        exact: None,
    })
}

/// Monte Carlo `E_m(n)` with the default sampler schedule.
pub fn estimate_em(n: usize, m: usize, samples: u64, seed: u64, workers: usize) -> Result<Estimate, StatsError> {
    estimate_em_with(&SamplerConfig::new(n, seed), m, samples, workers)
}

/// Number of sampled squares with each intercalate count.
pub fn intercalate_histogram(
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<BTreeMap<u64, u64>, StatsError> {
    if n == 0 || samples == 0 {
        return Err(StatsError::Params("need n >= 1 and at least one sample".into()));
    }
    Ok(fold_samples(
        &SamplerConfig::new(n, seed),
        samples as usize,
        workers,
        BTreeMap::new,
        |h, l| *h.entry(count_intercalates(l)).or_default() += 1,
        merge_histograms,
    ))
}

/// Intercalate counts over every Latin square of order `n`.
pub fn exact_intercalate_distribution(n: usize, eo: &EnumerateOptions) -> Result<BTreeMap<u64, u64>, StatsError> {
    Ok(fold_constrained(
        &ConstraintSpec::new(n)?,
        eo,
        BTreeMap::new,
        |h, l| *h.entry(count_intercalates(l)).or_default() += 1,
        merge_histograms,
    )?)
}

fn merge_histograms(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Histogram mass as an exact count.
pub fn histogram_total(h: &BTreeMap<u64, u64>) -> BigCount {
    h.values().map(|&v| BigCount::from(v)).sum()
}
