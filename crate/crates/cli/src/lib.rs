//! The `subsq` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use subsq::enumerate::{count_constrained, enumerate_constrained, ConstraintSpec, EnumerateOptions, PrefixCellSet};
use subsq::sampler::{fold_samples, sample_many, SamplerConfig};
use subsq::square::{parse_squares, PartialSquare, PartialSquareFile};
use subsq::stats::{self, Estimate, CSV_HEADER};
use subsq::subsquares::{count_intercalates, enumerate_subsquares};
use subsq::verify::{self, Report, StepMode, Tier, Variant, VerifyOptions};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Parser, Debug)]
#[command(name = "subsq", version, about = "Latin square cycle switching, counting, sampling and subsquare statistics")]
struct Cli {
    /// Worker threads for counting and sampling.
    #[arg(long, global = true, env = "SUBSQ_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Largest order allowed for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = subsq::enumerate::DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw approximately uniform Latin squares.
    Sample(SampleArgs),
    /// Count subsquares of each order in the squares of a file.
    Count(CountArgs),
    /// Count or list the squares satisfying a constraint file.
    Enumerate(EnumerateArgs),
    /// Run exact verifications.
    Verify(VerifyArgs),
    /// Estimate the expected number of order-m subsquares.
    Estimate(EstimateArgs),
    /// Complete a partial square, printing `none` if impossible.
    Complete(CompleteArgs),
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Steps before the first sample (default 10 n^3).
    #[arg(long)]
    burn_in: Option<u64>,
    /// Proper steps between samples (default n^3).
    #[arg(long)]
    thin: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl ChainArgs {
    fn config(&self, order: usize) -> SamplerConfig {
        let mut cfg = SamplerConfig::new(order, self.seed);
        if let Some(b) = self.burn_in {
            cfg = cfg.with_burn_in(b);
        }
        if let Some(t) = self.thin {
            cfg = cfg.with_thin(t);
        }
        cfg
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    order: usize,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[command(flatten)]
    chain: ChainArgs,
    /// Print a summary instead of the squares.
    #[arg(long)]
    stats_only: bool,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Square file, or `-` for standard input.
    #[arg(long)]
    input: PathBuf,
    /// Only this subsquare order.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Order of the squares when no constraint file is given.
    #[arg(long)]
    order: Option<usize>,
    /// Partial square file with optional `bound m` and `restrict i` headers.
    #[arg(long)]
    constraints: Option<PathBuf>,
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Row,
    Column,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Row => Variant::Row,
            VariantArg::Column => Variant::Column,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    NewLine,
    ColumnCycles,
    RowCycles,
}

impl From<ModeArg> for StepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::NewLine => StepMode::NewLine,
            ModeArg::ColumnCycles => StepMode::ColumnCycles,
            ModeArg::RowCycles => StepMode::RowCycles,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Statement {
    Setnrc,
    Prelim,
    BoundaryRow,
    BoundaryCol,
    Step,
    ThmSubsqbound,
    ChainSchedule,
    E3,
    EmPaths,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    statement: Statement,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Partial square file for `prelim` and `step`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// 1-based row of the switched cell.
    #[arg(long)]
    r: Option<usize>,
    /// 1-based column of the switched cell.
    #[arg(long)]
    c: Option<usize>,
    /// 1-based row outside the block.
    #[arg(long)]
    r_prime: Option<usize>,
    /// Added entry as `row,column,symbol`, 1-based.
    #[arg(long)]
    entry: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Include the order-6 instances.
    #[arg(long)]
    slow: bool,
    /// Write the reports as JSON to this path (`-` for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Replay switches square by square up to this order.
    #[arg(long, default_value_t = 5)]
    census_max_order: usize,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[command(flatten)]
    chain: ChainArgs,
    /// Exact value by enumeration instead of sampling.
    #[arg(long)]
    exact: bool,
    /// Also print the intercalate histogram (`count frequency` lines).
    #[arg(long)]
    histogram: bool,
    /// CSV output path; standard output by default.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompleteArgs {
    /// Partial square file, or `-` for standard input.
    #[arg(long)]
    input: PathBuf,
}

enum Outcome {
    Ok,
    Failed,
}

/// Run with process arguments, printing to standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, VerifyOptions::default(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Run with explicit verification options and output streams. The worker
/// count and guard in `base.enumerate` are replaced by the parsed flags.
pub fn run_with<I, T>(args: I, base: VerifyOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, base, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: Cli, base: VerifyOptions, out: &mut dyn Write) -> Result<Outcome> {
    if cli.workers == 0 {
        bail!("--workers must be at least 1");
    }
    let eo = EnumerateOptions {
        workers: cli.workers,
        max_order: cli.max_order,
    };
    match cli.command {
        Command::Sample(a) => sample(&a, cli.workers, out),
        Command::Count(a) => count(&a, out),
        Command::Enumerate(a) => enumerate(&a, &eo, out),
        Command::Verify(a) => {
            let opts = VerifyOptions {
                enumerate: eo,
                census_max_order: a.census_max_order,
                ..base
            };
            run_verify(&a, &opts, out)
        }
        Command::Estimate(a) => estimate(&a, &eo, cli.workers, out),
        Command::Complete(a) => complete(&a, out),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn sample(a: &SampleArgs, workers: usize, out: &mut dyn Write) -> Result<Outcome> {
    if a.order == 0 || a.order > subsq::square::MAX_ORDER {
        bail!("order must lie in 1..={}", subsq::square::MAX_ORDER);
    }
    let cfg = a.chain.config(a.order);
    if a.stats_only {
        let (valid, intercalates) = fold_samples(
            &cfg,
            a.samples,
            workers,
            || (0u64, 0u64),
            |acc, l| {
                acc.0 += u64::from(l.is_latin());
                acc.1 += count_intercalates(l);
            },
            |x, y| (x.0 + y.0, x.1 + y.1),
        );
        writeln!(out, "samples {}", a.samples)?;
        writeln!(out, "valid {valid}")?;
        let mean = if a.samples == 0 { 0.0 } else { intercalates as f64 / a.samples as f64 };
        writeln!(out, "mean_intercalates {}", stats::sig12(mean))?;
        writeln!(out, "seed {}", cfg.seed)?;
        return Ok(Outcome::Ok);
    }
    for (k, l) in sample_many(&cfg, a.samples, workers).iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        write!(out, "{}", l.to_text())?;
    }
    Ok(Outcome::Ok)
}

fn count(a: &CountArgs, out: &mut dyn Write) -> Result<Outcome> {
    let squares = parse_squares(&read_input(&a.input)?)?;
    if squares.is_empty() {
        bail!("no squares in input");
    }
    for (k, l) in squares.iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        let orders: Vec<usize> = match a.m {
            Some(m) if m == 0 || m > l.order() => bail!("order {m} outside 1..={}", l.order()),
            Some(m) => vec![m],
            None => (1..=l.order()).collect(),
        };
        for m in orders {
            writeln!(out, "{m} {}", enumerate_subsquares(l, m)?.len())?;
        }
    }
    Ok(Outcome::Ok)
}

fn constraint_spec(a: &EnumerateArgs) -> Result<ConstraintSpec> {
    match (&a.constraints, a.order) {
        (Some(path), _) => {
            let file = PartialSquareFile::parse(&read_input(path)?)?;
            if let Some(n) = a.order {
                if n != file.square.order() {
                    bail!("--order {n} disagrees with the constraint file order {}", file.square.order());
                }
            }
            let mut spec = ConstraintSpec::containing(&file.square);
            if let Some(i) = file.restrict {
                let m = file.square.bound();
                spec.restrict(PrefixCellSet::new(m, i)?.cells(), m)?;
            }
            Ok(spec)
        }
        (None, Some(n)) => Ok(ConstraintSpec::new(n)?),
        (None, None) => bail!("give --order or --constraints"),
    }
}

fn enumerate(a: &EnumerateArgs, eo: &EnumerateOptions, out: &mut dyn Write) -> Result<Outcome> {
    let spec = constraint_spec(a)?;
    if a.count_only {
        writeln!(out, "{}", count_constrained(&spec, eo)?)?;
        return Ok(Outcome::Ok);
    }
    let mut failure = None;
    let visited = enumerate_constrained(&spec, eo, |l| {
        if failure.is_none() {
            failure = write!(out, "{}\n", l.to_text()).err();
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    writeln!(out, "count {visited}")?;
    Ok(Outcome::Ok)
}

fn parse_entry(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| anyhow!("--entry expects row,column,symbol"))?;
    match parts[..] {
        [r, c, s] if r > 0 && c > 0 && s > 0 => Ok((r - 1, c - 1, s - 1)),
        _ => bail!("--entry expects three positive 1-based integers"),
    }
}

fn one_based(v: Option<usize>, flag: &str) -> Result<usize> {
    match v {
        Some(x) if x > 0 => Ok(x - 1),
        Some(_) => bail!("--{flag} is 1-based"),
        None => bail!("--{flag} is required"),
    }
}

/// `(n, m)` pairs from the flags, or the tier matrix when absent.
fn blocks(a: &VerifyArgs) -> Vec<(usize, usize)> {
    match (a.n, a.m) {
        (Some(n), Some(m)) => vec![(n, m)],
        (Some(n), None) => (2..=n / 2).map(|m| (n, m)).collect(),
        (None, Some(m)) => {
            let base: &[usize] = if a.slow { &[4, 5, 6] } else { &[4, 5] };
            base.iter().copied().filter(|&n| 2 * m <= n).map(|n| (n, m)).collect()
        }
        (None, None) => {
            let mut v = vec![(4, 2), (5, 2)];
            if a.slow {
                v.extend([(6, 2), (6, 3)]);
            }
            v
        }
    }
}

fn variants(a: &VerifyArgs) -> Vec<Variant> {
    match a.variant {
        Some(v) => vec![v.into()],
        None => vec![Variant::Row, Variant::Column],
    }
}

fn read_partial(path: &Path) -> Result<PartialSquare> {
    Ok(PartialSquareFile::parse(&read_input(path)?)?.square)
}

fn collect_reports(a: &VerifyArgs, opts: &VerifyOptions) -> Result<Vec<Report>> {
    let mut reps = Vec::new();
    match a.statement {
        Statement::All => {
            let tier = if a.slow { Tier::Slow } else { Tier::Fast };
            reps = verify::verify_all(tier, opts)?;
        }
        Statement::Setnrc => {
            for (n, m) in blocks(a) {
                let alphas: Vec<usize> = a.alpha.map_or((1..=m).collect(), |x| vec![x]);
                for alpha in alphas {
                    for v in variants(a) {
                        reps.push(verify::verify_setnrc(n, m, alpha, v, opts)?);
                    }
                }
            }
        }
        Statement::BoundaryRow | Statement::BoundaryCol => {
            let v = if a.statement == Statement::BoundaryRow { Variant::Row } else { Variant::Column };
            for (n, m) in blocks(a) {
                let js: Vec<usize> = a.j.map_or((1..=m).collect(), |x| vec![x]);
                for j in js {
                    reps.push(verify::verify_boundary(n, m, j, v, opts)?);
                }
            }
        }
        Statement::ThmSubsqbound => {
            reps.push(verify::verify_bound_identity(32));
            for (n, m) in blocks(a) {
                reps.push(verify::verify_theorem(n, m, opts)?);
            }
        }
        Statement::Prelim => {
            let Some(path) = &a.input else {
                bail!("prelim needs --input with a partial square (use `verify all` for the standard cases)");
            };
            let p = read_partial(path)?;
            let (r, c) = (one_based(a.r, "r")?, one_based(a.c, "c")?);
            let rows: Vec<usize> = match a.r_prime {
                Some(x) => vec![one_based(Some(x), "r-prime")?],
                None => (p.bound()..p.order()).collect(),
            };
            for rp in rows {
                reps.push(verify::verify_prelim(&p, r, c, rp, opts)?);
            }
        }
        Statement::Step => match &a.input {
            Some(path) => {
                let p = read_partial(path)?;
                let entry = parse_entry(a.entry.as_deref().ok_or_else(|| anyhow!("--entry is required"))?)?;
                let mode = a.mode.ok_or_else(|| anyhow!("--mode is required"))?;
                reps.push(verify::verify_step(&p, entry, mode.into(), opts)?);
            }
            None => {
                let m = a.m.unwrap_or(2);
                let n = a.n.unwrap_or(2 * m + 1);
                reps.extend(verify::verify_chain_steps(n, m, opts)?);
            }
        },
        Statement::ChainSchedule => {
            let ms: Vec<usize> = a.m.map_or((2..=8).collect(), |m| vec![m]);
            for &m in &ms {
                reps.push(verify::verify_chain_schedule(m)?);
            }
            if let Some(n) = a.n {
                for &m in &ms {
                    reps.extend(verify::verify_chain_steps(n, m, opts)?);
                }
            }
        }
        Statement::E3 => reps.push(verify::verify_e3(a.n.unwrap_or(6), opts)?),
        Statement::EmPaths => {
            for (n, m) in blocks(a) {
                reps.push(verify::verify_em_paths(n, m, opts)?);
            }
        }
    }
    Ok(reps)
}

fn run_verify(a: &VerifyArgs, opts: &VerifyOptions, out: &mut dyn Write) -> Result<Outcome> {
    let reps = collect_reports(a, opts)?;
    let failed = reps.iter().filter(|r| !r.pass).count();
    for r in &reps {
        writeln!(out, "{r}")?;
    }
    writeln!(out, "{} reports, {} passed, {failed} failed", reps.len(), reps.len() - failed)?;
    if let Some(path) = &a.json {
        let doc = json!({"pass": failed == 0, "reports": reps});
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        if path == Path::new("-") {
            out.write_all(text.as_bytes())?;
        } else {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Failed })
}

fn estimate(a: &EstimateArgs, eo: &EnumerateOptions, workers: usize, out: &mut dyn Write) -> Result<Outcome> {
    let row = if a.exact {
        Estimate::exact(a.n, a.m, stats::exact_em(a.n, a.m, eo)?)
    } else {
        stats::estimate_em_with(&a.chain.config(a.n), a.m, a.samples, workers)?
    };
    let mut text = format!("{CSV_HEADER}\n{}\n", row.csv_row());
    if a.histogram {
        let hist = if a.exact {
            stats::exact_intercalate_distribution(a.n, eo)?
        } else {
            stats::intercalate_histogram(a.n, a.samples, a.chain.seed, workers)?
        };
        text.push_str("\nintercalates,frequency\n");
        for (k, v) in hist {
            text.push_str(&format!("{k},{v}\n"));
        }
    }
    match &a.csv {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Outcome::Ok)
}

fn complete(a: &CompleteArgs, out: &mut dyn Write) -> Result<Outcome> {
    let file = PartialSquareFile::parse(&read_input(&a.input)?)?;
    match subsq::enumerate::complete(&file.square) {
        Some(l) => write!(out, "{}", l.to_text())?,
        None => writeln!(out, "none")?,
    }
    Ok(Outcome::Ok)
}
