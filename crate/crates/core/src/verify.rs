//! Exact finite-`n` checks of the switching arguments that bound the
//! probability of a random Latin square having a subsquare in its corner.
//!
//! Every check compares exact rationals built from exhaustive counts. The
//! corner block is `[m] x [m]` with symbols in `[m]`; `T_i` is its first `i`
//! cells in row-major order and `Delta_i` the squares whose symbols on
//! `T_i` all lie in `[m]`.
//!
//! The switching maps themselves are also replayed on every square of the
//! source set when the order is small enough (see
//! [`VerifyOptions::census_max_order`]). The switch kernel is a field of
//! [`VerifyOptions`], so a corrupted kernel makes the replayed checks fail.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cycles::{extract_cycle, switch_cycle, Axis, Cycle, CycleError};
use crate::enumerate::{
    build_m, count_constrained, count_delta, count_latin_squares, fold_constrained, ConstraintSpec,
    EnumerateError, EnumerateOptions, PrefixCellSet,
};
use crate::exact::{binomial, BigCount, Ratio};
use crate::square::{bits, LatinSquare, PartialSquare};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Stats(#[from] stats::StatsError),
}

pub type SwitchFn = fn(&LatinSquare, &Cycle) -> Result<LatinSquare, CycleError>;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub enumerate: EnumerateOptions,
    /// Kernel used when replaying switches.
    pub switch: SwitchFn,
    /// Largest order at which switches are replayed square by square.
    pub census_max_order: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            enumerate: EnumerateOptions::default(),
            switch: switch_cycle,
            census_max_order: 5,
        }
    }
}

impl VerifyOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            enumerate: EnumerateOptions::with_workers(workers),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    /// `lhs` divides `rhs`; both sides are integers.
    #[serde(rename = "|")]
    Divides,
}

impl Relation {
    pub fn holds(self, lhs: &Ratio, rhs: &Ratio) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Divides => {
                let ints = lhs.denom() == BigCount::from(1u64) && rhs.denom() == BigCount::from(1u64);
                ints && lhs.numer().divides(&rhs.numer())
            }
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Divides => "|",
        })
    }
}

/// One exact comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Ratio,
    pub relation: Relation,
    pub rhs: Ratio,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: Ratio, relation: Relation, rhs: Ratio) -> Self {
        let pass = relation.holds(&lhs, &rhs);
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            pass,
        }
    }

    fn truth(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, Ratio::integer(u64::from(ok)), Relation::Eq, Ratio::one())
    }
}

/// Outcome of one verification.
///
/// `lhs relation rhs` is the headline comparison; `checks` holds the
/// supporting identities. `pass` is true when the headline and every check
/// hold.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub statement: String,
    pub params: Map<String, Value>,
    pub counts: BTreeMap<String, BigCount>,
    pub lhs: Ratio,
    pub relation: Relation,
    pub rhs: Ratio,
    pub pass: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// JSON value with the timing field removed.
    pub fn to_json_untimed(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("seconds");
        }
        v
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        write!(
            f,
            "{} {} [{}]: {} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.statement,
            params.join(" "),
            self.lhs,
            self.relation,
            self.rhs
        )?;
        for c in self.failed_checks() {
            write!(f, "\n  failed {}: {} {} {}", c.name, c.lhs, c.relation, c.rhs)?;
        }
        Ok(())
    }
}

struct Builder {
    statement: &'static str,
    params: Map<String, Value>,
    counts: BTreeMap<String, BigCount>,
    checks: Vec<Check>,
    notes: Vec<String>,
    start: Instant,
}

impl Builder {
    fn new(statement: &'static str, params: Value) -> Self {
        let Value::Object(params) = params else {
            unreachable!("params are an object")
        };
        Self {
            statement,
            params,
            counts: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    fn count(&mut self, name: &str, v: &BigCount) {
        self.counts.insert(name.to_string(), v.clone());
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, lhs: Ratio, relation: Relation, rhs: Ratio) -> Report {
        let pass = relation.holds(&lhs, &rhs) && self.checks.iter().all(|c| c.pass);
        Report {
            statement: self.statement.to_string(),
            params: self.params,
            counts: self.counts,
            lhs,
            relation,
            rhs,
            pass,
            seconds: self.start.elapsed().as_secs_f64(),
            checks: self.checks,
            notes: self.notes,
        }
    }
}

fn int(v: impl Into<BigCount>) -> Ratio {
    Ratio::integer(v)
}

fn frac(a: &BigCount, b: &BigCount) -> Ratio {
    Ratio::new(a.clone(), b.clone())
}

/// Rows of `p`, 1-based with 0 for empty, separated by `/`.
fn compact(p: &PartialSquare) -> String {
    let n = p.order();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| p.get(r, c).map_or(0, |s| s as usize + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" / ")
}

fn check_block(n: usize, m: usize) -> Result<(), VerifyError> {
    if m < 2 || 2 * m > n {
        return Err(VerifyError::Params(format!("need 2 <= m <= n/2, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// Which first or last line of the block the added cell lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Row,
    Column,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Row => "row",
            Variant::Column => "column",
        }
    }
}

fn in_delta(l: &LatinSquare, m: usize, i: usize) -> bool {
    (0..i).all(|k| (l.get(k / m, k % m) as usize) < m)
}

/// `Delta_i` with the prefix cells transposed.
fn transposed_delta_count(n: usize, m: usize, i: usize, o: &EnumerateOptions) -> Result<BigCount, VerifyError> {
    let mut spec = ConstraintSpec::new(n)?;
    spec.restrict(PrefixCellSet::new(m, i)?.cells().map(|(r, c)| (c, r)), m)?;
    Ok(count_constrained(&spec, o)?)
}

#[derive(Default)]
struct Census {
    sources: u64,
    moves: u64,
    landed: u64,
    broken: u64,
    targets: HashMap<LatinSquare, u32>,
}

impl Census {
    fn merge(mut self, other: Census) -> Census {
        self.sources += other.sources;
        self.moves += other.moves;
        self.landed += other.landed;
        self.broken += other.broken;
        for (k, v) in other.targets {
            *self.targets.entry(k).or_default() += v;
        }
        self
    }

    fn max_in_degree(&self) -> u32 {
        self.targets.values().copied().max().unwrap_or(0)
    }

    fn min_in_degree(&self) -> u32 {
        self.targets.values().copied().min().unwrap_or(0)
    }
}

/// Replay `moves` on every square of `source`, recording switched squares
/// that satisfy `lands`. A switch that fails or breaks Latinness counts as
/// broken.
fn census<G, P>(source: &ConstraintSpec, opts: &VerifyOptions, moves: G, lands: P) -> Result<Census, VerifyError>
where
    G: Fn(&LatinSquare) -> Vec<Cycle> + Sync + Send,
    P: Fn(&LatinSquare) -> bool + Sync + Send,
{
    let switch = opts.switch;
    Ok(fold_constrained(
        source,
        &opts.enumerate,
        Census::default,
        |acc, l| {
            acc.sources += 1;
            for cyc in moves(l) {
                acc.moves += 1;
                match switch(l, &cyc) {
                    Ok(s) if s.is_latin() => {
                        if lands(&s) {
                            acc.landed += 1;
                            *acc.targets.entry(s).or_default() += 1;
                        }
                    }
                    _ => acc.broken += 1,
                }
            }
        },
        Census::merge,
    )?)
}

/// Cycles of `axis` pairing `line` with each of `others`, through cross
/// line `cross`.
fn cycles_from(
    l: &LatinSquare,
    axis: Axis,
    line: usize,
    others: impl Iterator<Item = usize>,
    cross: usize,
) -> Vec<Cycle> {
    others
        .map(|o| extract_cycle(l, axis, line, o, cross).expect("indices in range"))
        .collect()
}

/// Index `i` of the step whose new cell is the `alpha`-th from the end of
/// the first row (`Column`) or first column (`Row`).
pub fn setnrc_index(m: usize, alpha: usize, variant: Variant) -> usize {
    match variant {
        Variant::Row => m * m + 1 - alpha * m,
        Variant::Column => m + 1 - alpha,
    }
}

/// First-row and first-column steps: the conditional probability
/// `|Delta_i| / |Delta_{i-1}|` equals `alpha / (n + alpha - m)`.
///
/// `Variant::Row` adds the cell `(m + 1 - alpha, 1)` and switches row
/// cycles through column 1; `Variant::Column` adds `(1, m + 1 - alpha)` and
/// switches column cycles through row 1.
pub fn verify_setnrc(
    n: usize,
    m: usize,
    alpha: usize,
    variant: Variant,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    check_block(n, m)?;
    if alpha == 0 || alpha > m {
        return Err(VerifyError::Params(format!("alpha must lie in 1..={m}, got {alpha}")));
    }
    let i = setnrc_index(m, alpha, variant);
    let mut b = Builder::new(
        "setnrc",
        json!({"n": n, "m": m, "alpha": alpha, "variant": variant.name(), "i": i}),
    );
    let eo = &opts.enumerate;
    let cur = count_delta(n, m, i, eo)?;
    let prev = count_delta(n, m, i - 1, eo)?;
    let lost = prev.minus(&cur);
    b.count("delta_i", &cur);
    b.count("delta_prev", &prev);
    b.count("delta_prev_minus_delta_i", &lost);
    b.check(Check::new(
        "(n-m)|Delta_i| = alpha |Delta_{i-1} \\ Delta_i|",
        int(&cur * (n - m) as u64),
        Relation::Eq,
        int(&lost * alpha as u64),
    ));
    b.check(Check::new(
        "transposed prefix count",
        int(transposed_delta_count(n, m, i, eo)?),
        Relation::Eq,
        int(cur.clone()),
    ));

    if n <= opts.census_max_order {
        let line = m - alpha;
        let (axis, cross) = match variant {
            Variant::Row => (Axis::Row, 0),
            Variant::Column => (Axis::Column, 0),
        };
        let source = ConstraintSpec::delta(n, PrefixCellSet::new(m, i)?)?;
        let c = census(
            &source,
            opts,
            |l| {
                let outside = |o: &usize| {
                    let v = match variant {
                        Variant::Row => l.get(*o, cross),
                        Variant::Column => l.get(cross, *o),
                    };
                    v as usize >= m
                };
                cycles_from(l, axis, line, (line + 1..n).filter(outside), cross)
            },
            |l| in_delta(l, m, i - 1) && !in_delta(l, m, i),
        )?;
        census_checks(&mut b, &c);
        b.check(Check::new("every switch lands in Delta_{i-1} \\ Delta_i", int(c.landed), Relation::Eq, int(c.moves)));
        b.check(Check::new(
            "switches per square of Delta_i",
            int(c.moves),
            Relation::Eq,
            int(&cur * (n - m) as u64),
        ));
        b.check(Check::new(
            "distinct targets",
            int(c.targets.len()),
            Relation::Eq,
            int(lost.clone()),
        ));
        b.check(Check::new("minimum in-degree", int(c.min_in_degree() as u64), Relation::Eq, int(alpha)));
        b.check(Check::new("maximum in-degree", int(c.max_in_degree() as u64), Relation::Eq, int(alpha)));
    }
    Ok(b.finish(
        frac(&cur, &prev),
        Relation::Eq,
        Ratio::new(alpha, n + alpha - m),
    ))
}

fn census_checks(b: &mut Builder, c: &Census) {
    b.count("census_sources", &BigCount::from(c.sources));
    b.count("census_switches", &BigCount::from(c.moves));
    b.count("census_landed", &BigCount::from(c.landed));
    b.check(Check::new("switches that break Latinness", int(c.broken), Relation::Eq, Ratio::zero()));
}

/// Index of the step adding cell `j` of the last row (`Row`) or last
/// column (`Column`).
pub fn boundary_index(m: usize, j: usize, variant: Variant) -> usize {
    match variant {
        Variant::Row => m * m - m + j,
        Variant::Column => j * m,
    }
}

/// Last-row and last-column steps: `(n - m)|Delta_i| / j <=
/// |Delta_{i-1} \ Delta_i|`, hence `|Delta_i| / |Delta_{i-1}| <= j / (n + j - m)`.
///
/// The last-column case switches column cycles on column `m` and each
/// column outside the block through row `j`.
pub fn verify_boundary(
    n: usize,
    m: usize,
    j: usize,
    variant: Variant,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    check_block(n, m)?;
    if j == 0 || j > m {
        return Err(VerifyError::Params(format!("j must lie in 1..={m}, got {j}")));
    }
    let i = boundary_index(m, j, variant);
    let statement = match variant {
        Variant::Row => "boundary-row",
        Variant::Column => "boundary-col",
    };
    let mut b = Builder::new(statement, json!({"n": n, "m": m, "j": j, "i": i}));
    let eo = &opts.enumerate;
    let cur = count_delta(n, m, i, eo)?;
    let prev = count_delta(n, m, i - 1, eo)?;
    let lost = prev.minus(&cur);
    b.count("delta_i", &cur);
    b.count("delta_prev", &prev);
    b.count("delta_prev_minus_delta_i", &lost);
    let switches = &cur * (n - m) as u64;
    b.check(Check::new(
        "(n-m)|Delta_i| <= j |Delta_{i-1} \\ Delta_i|",
        int(switches.clone()),
        Relation::Le,
        int(&lost * j as u64),
    ));
    b.check(Check::new("j divides (n-m)|Delta_i|", int(j), Relation::Divides, int(switches.clone())));
    b.check(Check::new(
        "|Delta_i| / |Delta_{i-1}| <= j/(n+j-m)",
        frac(&cur, &prev),
        Relation::Le,
        Ratio::new(j, n + j - m),
    ));
    if variant == Variant::Column {
        b.note("column cycles: the last-row argument applied to the transposed block");
    }
    if j == m {
        let other = match variant {
            Variant::Row => boundary_index(m, j, Variant::Column),
            Variant::Column => boundary_index(m, j, Variant::Row),
        };
        b.check(Check::new("both boundary indices coincide at the last cell", int(other), Relation::Eq, int(i)));
    }

    if n <= opts.census_max_order {
        let source = ConstraintSpec::delta(n, PrefixCellSet::new(m, i)?)?;
        let c = census(
            &source,
            opts,
            |l| match variant {
                Variant::Row => cycles_from(l, Axis::Row, m - 1, m..n, j - 1),
                Variant::Column => cycles_from(l, Axis::Column, m - 1, m..n, j - 1),
            },
            |l| in_delta(l, m, i - 1) && !in_delta(l, m, i),
        )?;
        census_checks(&mut b, &c);
        b.check(Check::new(
            "landing switches times j",
            int(c.landed * j as u64),
            Relation::Eq,
            int(switches.clone()),
        ));
        b.check(Check::new("maximum in-degree", int(c.max_in_degree() as u64), Relation::Le, Ratio::one()));
        let slack = lost.minus(&BigCount::from(c.landed));
        b.count("slack", &slack);
        b.note("slack = |Delta_{i-1} \\ Delta_i| minus the number of landing switches; recorded only");
    }
    Ok(b.finish(int(switches), Relation::Le, int(&lost * j as u64)))
}

/// Among the squares containing `p`, the row cycle through `(r, c)` and
/// row `r_prime` avoids the other occupied columns of row `r` in exactly
/// a `1 / (k + 1)` fraction, `k + 1` being the number of occupied cells
/// of row `r`.
///
/// `p` has order `n` and symbol bound `m`; its entries must lie in the
/// `m x m` corner. All indices are 0-based.
pub fn verify_prelim(
    p: &PartialSquare,
    r: usize,
    c: usize,
    r_prime: usize,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let (n, m) = (p.order(), p.bound());
    check_corner(p)?;
    if r >= m || c >= m || p.get(r, c).is_none() {
        return Err(VerifyError::Precondition(format!("cell ({},{}) is not occupied", r + 1, c + 1)));
    }
    if r_prime < m || r_prime >= n {
        return Err(VerifyError::Params(format!(
            "row {} must lie outside the block, in {}..={n}",
            r_prime + 1,
            m + 1
        )));
    }
    let occupied = p.row_columns(r);
    let others = occupied & !(1 << c);
    for ci in bits(others) {
        if !p.columns_form_cycles(c, ci) {
            return Err(VerifyError::Precondition(format!(
                "entries in columns {} and {} do not form a union of column cycles",
                c + 1,
                ci + 1
            )));
        }
    }
    let k = others.count_ones() as usize;
    let mut b = Builder::new(
        "prelim",
        json!({"n": n, "m": m, "r": r + 1, "c": c + 1, "r_prime": r_prime + 1, "k": k, "p": compact(p)}),
    );
    let spec = ConstraintSpec::containing(p);
    let (a, x) = fold_constrained(
        &spec,
        &opts.enumerate,
        || (0u64, 0u64),
        |acc, l| {
            acc.0 += 1;
            let cyc = extract_cycle(l, Axis::Row, r, r_prime, c).expect("indices in range");
            if cyc.hit & others == 0 {
                acc.1 += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    if a == 0 {
        return Err(VerifyError::Precondition("no Latin square contains P".into()));
    }
    let (a, x) = (BigCount::from(a), BigCount::from(x));
    let y = a.minus(&x);
    b.count("A", &a);
    b.count("X", &x);
    b.count("Y", &y);
    b.check(Check::new("|A| = (k+1)|X|", int(a.clone()), Relation::Eq, int(&x * (k + 1) as u64)));
    b.check(Check::new("|Y| = k|X|", int(y), Relation::Eq, int(&x * k as u64)));
    b.check(Check::new("(k+1) divides |A|", int(k + 1), Relation::Divides, int(a.clone())));
    Ok(b.finish(frac(&x, &a), Relation::Eq, Ratio::new(1u64, k + 1)))
}

/// Entries of `p` lie in the corner `[m] x [m]`, `m` being the symbol bound.
fn check_corner(p: &PartialSquare) -> Result<(), VerifyError> {
    let m = p.bound();
    if m >= p.order() {
        return Err(VerifyError::Params(format!(
            "symbol bound {m} must be smaller than the order {}",
            p.order()
        )));
    }
    if let Some((r, c, _)) = p.entries().find(|&(r, c, _)| r >= m || c >= m) {
        return Err(VerifyError::Precondition(format!(
            "entry at ({},{}) lies outside the {m} x {m} corner",
            r + 1,
            c + 1
        )));
    }
    Ok(())
}

/// Which switching argument bounds a single added entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    /// The entry is alone in its row, column or symbol.
    NewLine,
    /// The entry's row meets columns that pairwise form unions of column
    /// cycles with its column.
    ColumnCycles,
    /// Row analogue of `ColumnCycles`.
    RowCycles,
}

impl StepMode {
    pub fn name(self) -> &'static str {
        match self {
            StepMode::NewLine => "new-line",
            StepMode::ColumnCycles => "column-cycles",
            StepMode::RowCycles => "row-cycles",
        }
    }
}

impl std::str::FromStr for StepMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "new-line" => Ok(StepMode::NewLine),
            "column-cycles" => Ok(StepMode::ColumnCycles),
            "row-cycles" => Ok(StepMode::RowCycles),
            other => Err(format!("unknown step mode `{other}`")),
        }
    }
}

/// The factor `f` of `mode` for adding `(r, c, s)` to `p`, or why the mode
/// does not apply. `f` is 1 for a new line, `|C'|` for column cycles and
/// `|R'|` for row cycles.
pub fn step_factor(
    p: &PartialSquare,
    (r, c, s): (usize, usize, usize),
    mode: StepMode,
) -> Result<usize, String> {
    let mut next = p.clone();
    next.set(r, c, s).map_err(|e| e.to_string())?;
    match mode {
        StepMode::NewLine => {
            if p.row_columns(r) == 0 || p.column_rows(c) == 0 || !p.has_symbol(s) {
                Ok(1)
            } else {
                Err(format!(
                    "P already has entries in row {}, column {} and with symbol {}",
                    r + 1,
                    c + 1,
                    s + 1
                ))
            }
        }
        StepMode::ColumnCycles => {
            let cols = next.row_columns(r);
            match bits(cols & !(1 << c)).find(|&o| !next.columns_form_cycles(c, o)) {
                Some(o) => Err(format!(
                    "entries in columns {} and {} do not form a union of column cycles",
                    c + 1,
                    o + 1
                )),
                None => Ok(cols.count_ones() as usize),
            }
        }
        StepMode::RowCycles => {
            let rows = next.column_rows(c);
            match bits(rows & !(1 << r)).find(|&o| !next.rows_form_cycles(r, o)) {
                Some(o) => Err(format!(
                    "entries in rows {} and {} do not form a union of row cycles",
                    r + 1,
                    o + 1
                )),
                None => Ok(rows.count_ones() as usize),
            }
        }
    }
}

/// Adding one entry to `p`: with `X` the squares containing `p + entry` and
/// `Y` those containing `p`, `(n - m)|X| <= f(|Y| - |X|)`.
pub fn verify_step(
    p: &PartialSquare,
    entry: (usize, usize, usize),
    mode: StepMode,
    opts: &VerifyOptions,
) -> Result<Report, VerifyError> {
    let (n, m) = (p.order(), p.bound());
    check_corner(p)?;
    let (r, c, s) = entry;
    if r >= m || c >= m || s >= m {
        return Err(VerifyError::Precondition(format!(
            "entry ({},{},{}) lies outside the corner block",
            r + 1,
            c + 1,
            s + 1
        )));
    }
    if p.get(r, c).is_some() {
        return Err(VerifyError::Precondition(format!("cell ({},{}) is already filled", r + 1, c + 1)));
    }
    let f = step_factor(p, entry, mode).map_err(VerifyError::Precondition)?;
    let mut next = p.clone();
    next.set(r, c, s).map_err(|e| VerifyError::Precondition(e.to_string()))?;
    let mut b = Builder::new(
        "step",
        json!({
            "n": n, "m": m, "entry": [r + 1, c + 1, s + 1], "mode": mode.name(),
            "factor": f, "p": compact(p),
        }),
    );
    let (x, y) = step_counts(p, &next, &opts.enumerate)?;
    b.count("X", &x);
    b.count("Y", &y);
    let gap = y.minus(&x);
    b.check(Check::new("X/Y <= f/(n-m)", frac(&x, &y), Relation::Le, Ratio::new(f, n - m)));
    b.check(Check::new("|X| < |Y|", int(&x + &BigCount::from(1u64)), Relation::Le, int(y.clone())));
    Ok(b.finish(int(&x * (n - m) as u64), Relation::Le, int(&gap * f as u64)))
}

fn step_counts(
    p: &PartialSquare,
    next: &PartialSquare,
    eo: &EnumerateOptions,
) -> Result<(BigCount, BigCount), VerifyError> {
    let y = count_constrained(&ConstraintSpec::containing(p), eo)?;
    if y.is_zero() {
        return Err(VerifyError::Precondition("no Latin square contains P".into()));
    }
    let x = count_constrained(&ConstraintSpec::containing(next), eo)?;
    Ok((x, y))
}

/// One entry of the block-filling order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// 0-based cell.
    pub cell: (usize, usize),
    /// 0-based symbol of the block in that cell.
    pub symbol: usize,
    /// Argument bounding this step; `None` when none applies.
    pub mode: Option<StepMode>,
    /// Factor used in the closed-form product: 1 for a new line, 2 for
    /// cycle steps in the first two rows or columns, `m` otherwise.
    pub factor: Option<usize>,
    /// Exact `|C'|` or `|R'|` for cycle steps, 1 for new lines.
    pub actual: Option<usize>,
}

/// Order in which the entries of the block `M` are added, with the
/// switching argument for each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSchedule {
    pub m: usize,
    #[serde(serialize_with = "serialize_square")]
    pub block: LatinSquare,
    pub steps: Vec<ChainStep>,
}

fn serialize_square<S: serde::Serializer>(l: &LatinSquare, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&l.to_text())
}

impl ChainSchedule {
    /// Factors of the steps that carry one.
    pub fn factors(&self) -> Vec<usize> {
        self.steps.iter().filter_map(|s| s.factor).collect()
    }

    pub fn factor_product(&self) -> BigCount {
        self.factors().into_iter().map(BigCount::from).product()
    }

    /// Multiset of factors as `(factor, multiplicity)`.
    pub fn factor_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in self.factors() {
            *out.entry(f).or_default() += 1;
        }
        out
    }

    /// The first `i` entries placed in the corner of an order-`n` square.
    pub fn prefix(&self, n: usize, i: usize) -> Result<PartialSquare, VerifyError> {
        let mut p = PartialSquare::with_bound(n, self.m).map_err(EnumerateError::from)?;
        for step in &self.steps[..i] {
            p.set(step.cell.0, step.cell.1, step.symbol).map_err(EnumerateError::from)?;
        }
        Ok(p)
    }

    /// `prod f / (n - m)` over the steps with a factor.
    pub fn chain_bound(&self, n: usize) -> Ratio {
        self.factors().into_iter().map(|f| Ratio::new(f, n - self.m)).product()
    }
}

/// Cell order: alternate the first two rows column by column, then the
/// first two columns row by row from row 3, then the remaining
/// `{3..m} x {3..m}` block row by row. Order 3 instead fills the first two
/// rows' leading `2 x 2` block first.
fn chain_cells(m: usize) -> Vec<(usize, usize)> {
    if m == 3 {
        return vec![(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)];
    }
    let mut cells = Vec::with_capacity(m * m);
    for k in 0..m {
        cells.push((0, k));
        cells.push((1, k));
    }
    for k in 2..m {
        cells.push((k, 0));
        cells.push((k, 1));
    }
    for r in 2..m {
        for c in 2..m {
            cells.push((r, c));
        }
    }
    cells
}

/// The block-filling order for the order-`m` block from [`build_m`].
///
/// Each step takes the new-line argument when it applies, otherwise the
/// cycle argument with the smaller exact factor, row cycles on a tie.
pub fn chain_schedule(m: usize) -> Result<ChainSchedule, VerifyError> {
    if m < 2 {
        return Err(VerifyError::Params(format!("chain schedule needs m >= 2, got {m}")));
    }
    let block = build_m(m)?;
    let mut p = PartialSquare::empty(m);
    let mut steps = Vec::with_capacity(m * m);
    for (r, c) in chain_cells(m) {
        let s = block.get(r, c) as usize;
        let entry = (r, c, s);
        let mode_factor = if step_factor(&p, entry, StepMode::NewLine).is_ok() {
            Some((StepMode::NewLine, 1))
        } else {
            let row = step_factor(&p, entry, StepMode::RowCycles).ok();
            let col = step_factor(&p, entry, StepMode::ColumnCycles).ok();
            match (row, col) {
                (Some(a), Some(b)) if b < a => Some((StepMode::ColumnCycles, b)),
                (Some(a), _) => Some((StepMode::RowCycles, a)),
                (None, Some(b)) => Some((StepMode::ColumnCycles, b)),
                (None, None) => None,
            }
        };
        let nominal = mode_factor.map(|(mode, _)| match mode {
            StepMode::NewLine => 1,
            _ if r < 2 || c < 2 => 2,
            _ => m,
        });
        steps.push(ChainStep {
            cell: (r, c),
            symbol: s,
            mode: mode_factor.map(|x| x.0),
            factor: nominal,
            actual: mode_factor.map(|x| x.1),
        });
        p.set(r, c, s).map_err(EnumerateError::from)?;
    }
    Ok(ChainSchedule { m, block, steps })
}

/// Expected factor product: `2^{m-1} m^{2m-5}` for even `m >= 4`,
/// `2^{m-2} m^{2m-5}` for odd `m >= 5`, 12 for `m = 3`, 2 for `m = 2`.
pub fn expected_factor_product(m: usize) -> BigCount {
    let pow = |b: u64, e: usize| -> BigCount { (0..e).map(|_| BigCount::from(b)).product() };
    match m {
        0 | 1 => BigCount::from(1u64),
        2 => BigCount::from(2u64),
        3 => BigCount::from(12u64),
        _ if m % 2 == 0 => &pow(2, m - 1) * &pow(m as u64, 2 * m - 5),
        _ => &pow(2, m - 2) * &pow(m as u64, 2 * m - 5),
    }
}

/// Structural checks of [`chain_schedule`].
pub fn verify_chain_schedule(m: usize) -> Result<Report, VerifyError> {
    let sched = chain_schedule(m)?;
    let mut b = Builder::new("chain-schedule", json!({"m": m}));
    let mut seen = vec![false; m * m];
    for s in &sched.steps {
        seen[s.cell.0 * m + s.cell.1] = true;
    }
    b.check(Check::new("number of steps", int(sched.steps.len()), Relation::Eq, int(m * m)));
    b.check(Check::truth("cells partition the block", seen.iter().all(|&x| x)));
    b.check(Check::truth(
        "block has the prescribed first two rows and columns",
        crate::enumerate::bordered_border(m)?.is_contained_in(&sched.block),
    ));
    b.check(Check::truth(
        "exact factor never exceeds the listed factor",
        sched.steps.iter().all(|s| s.actual <= s.factor),
    ));
    let counts = sched.factor_counts();
    let tagged = sched.factors().len();
    let get = |f: usize| counts.get(&f).copied().unwrap_or(0);
    if m == 3 {
        let seq: Vec<usize> = sched.steps.iter().map(|s| s.factor.unwrap_or(0)).collect();
        b.check(Check::truth("factor sequence (1,1,1,1,1,2,1,2,3)", seq == [1, 1, 1, 1, 1, 2, 1, 2, 3]));
    } else if m >= 4 && m % 2 == 0 {
        b.check(Check::new("steps with factor 1", int(get(1)), Relation::Eq, int(5 * m / 2 - 2)));
        b.check(Check::new("steps with factor 2", int(get(2)), Relation::Eq, int(m - 1)));
        b.check(Check::new("steps with factor m", int(get(m)), Relation::Eq, int(2 * m - 5)));
        b.check(Check::new("steps with a factor", int(tagged), Relation::Eq, int(11 * m / 2 - 8)));
    } else if m >= 5 {
        b.check(Check::new("steps with a factor", int(tagged), Relation::Eq, int((11 * m - 17) / 2)));
    }
    for (f, k) in &counts {
        b.count(&format!("factor_{f}"), &BigCount::from(*k));
    }
    let untagged = sched.steps.len() - tagged;
    b.count("steps_without_factor", &BigCount::from(untagged));
    Ok(b.finish(int(sched.factor_product()), Relation::Eq, int(expected_factor_product(m))))
}

/// Every step of `chain_schedule(m)` with the block in the corner of an
/// order-`n` square, followed by a report on the telescoped product.
///
/// Steps without a factor are checked against the trivial bound `X <= Y`.
pub fn verify_chain_steps(n: usize, m: usize, opts: &VerifyOptions) -> Result<Vec<Report>, VerifyError> {
    if m < 2 || m >= n {
        return Err(VerifyError::Params(format!("need 2 <= m < n, got n = {n}, m = {m}")));
    }
    let sched = chain_schedule(m)?;
    let mut reports = Vec::with_capacity(sched.steps.len() + 1);
    let mut b = Builder::new("chain-product", json!({"n": n, "m": m}));
    let mut product = Ratio::one();
    for (k, step) in sched.steps.iter().enumerate() {
        let p = sched.prefix(n, k)?;
        let entry = (step.cell.0, step.cell.1, step.symbol);
        let mut rep = match step.mode {
            Some(mode) => verify_step(&p, entry, mode, opts)?,
            None => {
                let next = sched.prefix(n, k + 1)?;
                let mut t = Builder::new(
                    "step",
                    json!({
                        "n": n, "m": m, "entry": [entry.0 + 1, entry.1 + 1, entry.2 + 1],
                        "mode": "none", "p": compact(&p),
                    }),
                );
                let (x, y) = step_counts(&p, &next, &opts.enumerate)?;
                t.count("X", &x);
                t.count("Y", &y);
                t.finish(int(x), Relation::Le, int(y))
            }
        };
        rep.params.insert("step".into(), json!(k + 1));
        product = product * frac(&rep.counts["X"], &rep.counts["Y"]);
        reports.push(rep);
    }
    let full = count_constrained(&ConstraintSpec::containing(&sched.prefix(n, m * m)?), &opts.enumerate)?;
    let total = count_latin_squares(n, &opts.enumerate)?;
    b.count("containing_block", &full);
    b.count("latin_squares", &total);
    let exact = frac(&full, &total);
    b.check(Check::new("telescoped product", product, Relation::Eq, exact.clone()));
    Ok({
        reports.push(b.finish(exact, Relation::Le, sched.chain_bound(n)));
        reports
    })
}

/// `n^2 (n+1-m)^2 / (m^2 binom(n,m)^4)`.
pub fn subsqbound_closed(n: usize, m: usize) -> Ratio {
    let c = binomial(n as u64, m as u64);
    let c4 = &(&c * &c) * &(&c * &c);
    let num = BigCount::from((n * n * (n + 1 - m) * (n + 1 - m)) as u64);
    Ratio::new(num, &c4 * (m * m) as u64)
}

/// `(prod_{j=1}^m j/(n+j-m))^2 (prod_{j=2}^{m-1} j/(n+j-m))^2`.
pub fn subsqbound_product(n: usize, m: usize) -> Ratio {
    let term = |j: usize| Ratio::new(j, n + j - m);
    let a: Ratio = (1..=m).map(term).product();
    let b: Ratio = (2..m).map(term).product();
    (&a * &a) * (&b * &b)
}

/// Exact values of the corner-block bounds at `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremBounds {
    pub n: usize,
    pub m: usize,
    /// Closed-form bound on `Pr(Delta_{m^2})`.
    pub closed_form: Ratio,
    /// Product of the first-line and boundary-line factors.
    pub product_form: Ratio,
    /// `prod f / (n - m)` over [`chain_schedule`] steps with a factor:
    /// bound on the probability of containing one fixed block.
    pub chain: Ratio,
    /// `binom(n,m)^3 * closed_form`.
    pub expectation_closed: Ratio,
    /// `binom(n,m)^3 * m^{m^2} * chain`.
    pub expectation_chain: Ratio,
}

pub fn theorem_bounds(n: usize, m: usize) -> Result<TheoremBounds, VerifyError> {
    check_block(n, m)?;
    let closed = subsqbound_closed(n, m);
    let product = subsqbound_product(n, m);
    let chain = chain_schedule(m)?.chain_bound(n);
    let c = binomial(n as u64, m as u64);
    let c3 = int(&(&c * &c) * &c);
    let blocks = int(m as u64).pow((m * m) as u32);
    Ok(TheoremBounds {
        n,
        m,
        expectation_closed: &c3 * &closed,
        expectation_chain: &(&c3 * &blocks) * &chain,
        closed_form: closed,
        product_form: product,
        chain,
    })
}

/// The closed-form bound against exact counts: `|Delta_{m^2}| / |Delta_0|`
/// is at most the closed form, which equals the product form.
pub fn verify_theorem(n: usize, m: usize, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    let t = theorem_bounds(n, m)?;
    let mut b = Builder::new("thm-subsqbound", json!({"n": n, "m": m}));
    b.check(Check::new("closed form = product form", t.closed_form.clone(), Relation::Eq, t.product_form.clone()));
    let eo = &opts.enumerate;
    let counts: Vec<BigCount> = (0..=m * m).map(|i| count_delta(n, m, i, eo)).collect::<Result<_, _>>()?;
    let conditional: Ratio = counts.windows(2).map(|w| frac(&w[1], &w[0])).product();
    let exact = frac(&counts[m * m], &counts[0]);
    b.check(Check::new("chain rule", conditional, Relation::Eq, exact.clone()));
    b.check(Check::truth("Delta_i is non-increasing", counts.windows(2).all(|w| w[1] <= w[0])));
    // first-line and boundary-line factors, one per step
    for i in 1..=m * m {
        let (r, c) = ((i - 1) / m, (i - 1) % m);
        let bound = if r == 0 {
            Some((Relation::Eq, Ratio::new(m - c, n - c)))
        } else if c == 0 {
            Some((Relation::Eq, Ratio::new(m - r, n - r)))
        } else if r == m - 1 {
            Some((Relation::Le, Ratio::new(c + 1, n + c + 1 - m)))
        } else if c == m - 1 {
            Some((Relation::Le, Ratio::new(r + 1, n + r + 1 - m)))
        } else {
            None
        };
        if let Some((rel, rhs)) = bound {
            b.check(Check::new(format!("step {i}"), frac(&counts[i], &counts[i - 1]), rel, rhs));
        }
    }
    b.count("delta_0", &counts[0]);
    b.count("delta_last", &counts[m * m]);
    let block = chain_schedule(m)?;
    let fixed = count_constrained(&ConstraintSpec::containing(&block.prefix(n, m * m)?), eo)?;
    b.count("containing_block", &fixed);
    b.check(Check::new("fixed block probability <= chain bound", frac(&fixed, &counts[0]), Relation::Le, t.chain.clone()));
    let em = stats::exact_em(n, m, eo)?;
    let c = binomial(n as u64, m as u64);
    b.check(Check::new(
        "E_m = binom(n,m)^3 Pr(Delta_{m^2})",
        em.clone(),
        Relation::Eq,
        &int(&(&c * &c) * &c) * &exact,
    ));
    b.check(Check::new("E_m <= expectation bound", em.clone(), Relation::Le, t.expectation_closed.clone()));
    b.check(Check::new("E_m <= chain expectation bound", em, Relation::Le, t.expectation_chain.clone()));
    if n == 5 && m == 2 {
        b.check(Check::new("closed form at (5,2)", t.closed_form.clone(), Relation::Eq, Ratio::new(1u64, 100u64)));
    }
    Ok(b.finish(exact, Relation::Le, t.closed_form))
}

/// Closed form equals product form for every `2 <= m <= n/2`, `n <= max_n`.
pub fn verify_bound_identity(max_n: usize) -> Report {
    let mut b = Builder::new("thm-subsqbound-identity", json!({"max_n": max_n}));
    let (mut total, mut equal) = (0u64, 0u64);
    for n in 4..=max_n {
        for m in 2..=n / 2 {
            total += 1;
            if subsqbound_closed(n, m) == subsqbound_product(n, m) {
                equal += 1;
            } else {
                b.check(Check::new(
                    format!("n={n} m={m}"),
                    subsqbound_closed(n, m),
                    Relation::Eq,
                    subsqbound_product(n, m),
                ));
            }
        }
    }
    b.finish(int(equal), Relation::Eq, int(total))
}

/// Exact expected number of order-3 subsquares against the chain bound
/// `binom(n,3)^3 * 144 / (n-3)^9`.
pub fn verify_e3(n: usize, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    if n < 6 {
        return Err(VerifyError::Params(format!("order-3 subsquares need n >= 6, got {n}")));
    }
    let eo = &opts.enumerate;
    if n > eo.max_order {
        return Err(EnumerateError::Guard { n, guard: eo.max_order }.into());
    }
    let mut b = Builder::new("e3", json!({"n": n}));
    let sched = chain_schedule(3)?;
    let p = sched.prefix(n, 9)?;
    let fixed = count_constrained(&ConstraintSpec::containing(&p), eo)?;
    let total = count_latin_squares(n, eo)?;
    b.count("containing_block", &fixed);
    b.count("latin_squares", &total);
    let mut by_corner = BigCount::zero();
    for s in 0..n {
        let mut spec = ConstraintSpec::new(n)?;
        spec.fix(0, 0, s)?;
        by_corner = by_corner + count_constrained(&spec, eo)?;
    }
    b.check(Check::new("sum over the corner symbol", int(by_corner), Relation::Eq, int(total.clone())));
    let c = binomial(n as u64, 3);
    let c3 = &(&c * &c) * &c;
    let e3 = Ratio::new(&(&c3 * &fixed) * 12, total.clone());
    let chain = Ratio::new(&c3 * 144, BigCount::from((n as u64 - 3).pow(9)));
    let closed = &int(c3.clone()) * &subsqbound_closed(n, 3);
    b.check(Check::new("fixed block probability <= 12/(n-3)^9", frac(&fixed, &total), Relation::Le, sched.chain_bound(n)));
    b.check(Check::new("E_3 <= closed-form expectation bound", e3.clone(), Relation::Le, closed.clone()));
    let delta = count_delta(n, 3, 9, eo)?;
    b.check(Check::new("12 |L_P| = |Delta_9|", int(&fixed * 12), Relation::Eq, int(delta)));
    let best = if closed < chain { ("closed form", closed) } else { ("chain", chain.clone()) };
    b.note(format!("smaller bound: {} = {}", best.0, best.1));
    b.note(format!("E_3 = {e3} ~ {:.6}", e3.to_f64()));
    Ok(b.finish(e3, Relation::Le, chain))
}

/// The two exact computations of `E_m(n)` agree.
pub fn verify_em_paths(n: usize, m: usize, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    let eo = &opts.enumerate;
    let mut b = Builder::new("em-paths", json!({"n": n, "m": m}));
    let enumerated = stats::exact_em_by_enumeration(n, m, eo)?;
    let symmetric = stats::exact_em_by_symmetry(n, m, eo)?;
    b.note(format!("E_{m}({n}) ~ {:.9}", enumerated.to_f64()));
    Ok(b.finish(enumerated, Relation::Eq, symmetric))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Fast,
    /// The fast tier plus the order-6 instances.
    Slow,
}

/// Order-`n` partial square with symbol bound `m` and 0-based entries.
fn corner(n: usize, m: usize, entries: &[(usize, usize, usize)]) -> PartialSquare {
    let mut p = PartialSquare::with_bound(n, m).expect("valid bound");
    for &(r, c, s) in entries {
        p.set(r, c, s).expect("consistent entries");
    }
    p
}

fn block_order_instance(n: usize, m: usize, opts: &VerifyOptions, out: &mut Vec<Report>) -> Result<(), VerifyError> {
    for alpha in 1..=m {
        for v in [Variant::Row, Variant::Column] {
            out.push(verify_setnrc(n, m, alpha, v, opts)?);
        }
    }
    for j in 1..=m {
        for v in [Variant::Row, Variant::Column] {
            out.push(verify_boundary(n, m, j, v, opts)?);
        }
    }
    out.push(verify_theorem(n, m, opts)?);
    Ok(())
}

/// The verification matrix.
///
/// Fast: block instances `(4,2)` and `(5,2)`, the single-cell and `2 x 2`
/// block cases of the cycle-avoidance fraction, the order-2 chain embedded
/// at orders 4 and 5, schedule structure for `m <= 8`, the bound identity and
/// the two `E_2(5)` computations. Slow adds `(6,2)`, `(6,3)`, the order-3
/// block at order 6, the order-3 chain at order 6 and `E_3(6)`.
pub fn verify_all(tier: Tier, opts: &VerifyOptions) -> Result<Vec<Report>, VerifyError> {
    let mut out = Vec::new();
    for (n, m) in [(4, 2), (5, 2)] {
        block_order_instance(n, m, opts, &mut out)?;
    }
    out.push(verify_bound_identity(32));
    out.push(verify_prelim(&corner(5, 2, &[(0, 0, 0)]), 0, 0, 2, opts)?);
    let block2 = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)];
    for n in [4, 5] {
        for rp in 2..n {
            out.push(verify_prelim(&corner(n, 2, &block2), 0, 0, rp, opts)?);
        }
    }
    for m in 2..=8 {
        out.push(verify_chain_schedule(m)?);
    }
    for n in [4, 5] {
        out.extend(verify_chain_steps(n, 2, opts)?);
    }
    out.push(verify_em_paths(4, 2, opts)?);
    out.push(verify_em_paths(5, 2, opts)?);
    if tier == Tier::Slow {
        for (n, m) in [(6, 2), (6, 3)] {
            block_order_instance(n, m, opts, &mut out)?;
        }
        let m3 = chain_schedule(3)?.prefix(6, 9)?;
        for rp in 3..6 {
            out.push(verify_prelim(&m3, 2, 2, rp, opts)?);
        }
        out.extend(verify_chain_steps(6, 2, opts)?);
        out.extend(verify_chain_steps(6, 3, opts)?);
        out.push(verify_e3(6, opts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn setnrc_values() {
        let r = verify_setnrc(5, 2, 1, Variant::Column, &opts()).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.lhs.to_string(), "1/4");
        let r = verify_setnrc(5, 2, 2, Variant::Row, &opts()).unwrap();
        assert_eq!(r.params["i"], 1);
        assert_eq!(r.lhs.to_string(), "2/5");
        assert!(r.pass, "{r}");
        let r = verify_setnrc(4, 2, 1, Variant::Row, &opts()).unwrap();
        assert_eq!(r.lhs.to_string(), "1/3");
        assert!(r.pass, "{r}");
        assert_eq!(r.counts["census_sources"], r.counts["delta_i"]);
    }

    #[test]
    fn setnrc_rejects_bad_parameters() {
        assert!(matches!(verify_setnrc(5, 3, 1, Variant::Row, &opts()), Err(VerifyError::Params(_))));
        assert!(matches!(verify_setnrc(5, 2, 3, Variant::Row, &opts()), Err(VerifyError::Params(_))));
        let err = verify_setnrc(8, 2, 1, Variant::Row, &opts()).unwrap_err();
        assert!(matches!(err, VerifyError::Enumerate(EnumerateError::Guard { n: 8, .. })));
    }

    #[test]
    fn boundary_values() {
        for j in 1..=2 {
            for v in [Variant::Row, Variant::Column] {
                let r = verify_boundary(5, 2, j, v, &opts()).unwrap();
                assert!(r.pass, "{r}");
            }
        }
        let r = verify_boundary(5, 2, 1, Variant::Row, &opts()).unwrap();
        assert_eq!(r.params["i"], 3);
        let r = verify_boundary(5, 2, 2, Variant::Row, &opts()).unwrap();
        assert_eq!(r.params["i"], 4);
    }

    fn broken_switch(l: &LatinSquare, _: &Cycle) -> Result<LatinSquare, CycleError> {
        Ok(l.clone())
    }

    #[test]
    fn corrupted_kernel_is_caught() {
        let o = VerifyOptions {
            switch: broken_switch,
            ..opts()
        };
        assert!(!verify_setnrc(4, 2, 1, Variant::Row, &o).unwrap().pass);
        assert!(!verify_boundary(4, 2, 2, Variant::Column, &o).unwrap().pass);
    }

    #[test]
    fn prelim_cases() {
        let r = verify_prelim(&corner(5, 2, &[(0, 0, 0)]), 0, 0, 2, &opts()).unwrap();
        assert_eq!(r.lhs, Ratio::one());
        assert!(r.pass);
        let block = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)];
        for rp in 2..5 {
            let r = verify_prelim(&corner(5, 2, &block), 0, 0, rp, &opts()).unwrap();
            assert_eq!(r.lhs.to_string(), "1/2");
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn prelim_precondition() {
        // columns 1 and 2 occupy different rows
        let p = corner(5, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1)]);
        assert!(matches!(verify_prelim(&p, 0, 0, 2, &opts()), Err(VerifyError::Precondition(_))));
        assert!(matches!(verify_prelim(&p, 1, 1, 2, &opts()), Err(VerifyError::Precondition(_))));
        assert!(matches!(verify_prelim(&p, 0, 0, 1, &opts()), Err(VerifyError::Params(_))));
    }

    #[test]
    fn step_cases() {
        let r = verify_step(&corner(5, 2, &[]), (0, 0, 0), StepMode::NewLine, &opts()).unwrap();
        assert_eq!(r.counts["X"], BigCount::from(32256u64));
        assert_eq!(r.counts["Y"], BigCount::from(161280u64));
        assert!(r.pass, "{r}");
        let p = corner(5, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1)]);
        let r = verify_step(&p, (1, 1, 0), StepMode::RowCycles, &opts()).unwrap();
        assert_eq!(r.params["factor"], 2);
        assert!(r.pass, "{r}");
        assert!(matches!(
            verify_step(&p, (1, 1, 0), StepMode::NewLine, &opts()),
            Err(VerifyError::Precondition(_))
        ));
        assert!(matches!(
            verify_step(&p, (1, 1, 1), StepMode::RowCycles, &opts()),
            Err(VerifyError::Precondition(_))
        ));
    }

    #[test]
    fn schedule_small_orders() {
        let s = chain_schedule(3).unwrap();
        let cells: Vec<_> = s.steps.iter().map(|x| x.cell).collect();
        assert_eq!(cells, chain_cells(3));
        assert_eq!(s.factor_product(), BigCount::from(12u64));
        let s = chain_schedule(4).unwrap();
        let counts: Vec<_> = s.factor_counts().into_iter().collect();
        assert_eq!(counts, vec![(1, 8), (2, 3), (4, 3)]);
        let s = chain_schedule(2).unwrap();
        assert_eq!(s.factors(), vec![1, 1, 1, 2]);
        assert!(chain_schedule(1).is_err());
        for m in 2..=8 {
            let r = verify_chain_schedule(m).unwrap();
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn chain_steps_order_two() {
        for n in [4, 5] {
            for r in verify_chain_steps(n, 2, &opts()).unwrap() {
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn bound_values() {
        let t = theorem_bounds(5, 2).unwrap();
        assert_eq!(t.closed_form.to_string(), "1/100");
        assert_eq!(t.product_form.to_string(), "1/100");
        let t = theorem_bounds(6, 3).unwrap();
        assert_eq!(t.closed_form, Ratio::new(36u64 * 16, 9u64 * 20u64.pow(4)));
        assert_eq!(t.chain, Ratio::new(12u64, 3u64.pow(9)));
        assert_eq!(subsqbound_product(9, 2), {
            let a = Ratio::new(1u64, 8u64) * Ratio::new(2u64, 9u64);
            &a * &a
        });
        assert!(verify_bound_identity(32).pass);
        assert!(verify_theorem(5, 2, &opts()).unwrap().pass);
    }

    #[test]
    fn e3_guard() {
        assert!(matches!(verify_e3(7, &opts()), Err(VerifyError::Enumerate(EnumerateError::Guard { .. }))));
        assert!(matches!(verify_e3(5, &opts()), Err(VerifyError::Params(_))));
    }

    #[test]
    fn report_json_shape() {
        let r = verify_setnrc(4, 2, 1, Variant::Column, &opts()).unwrap();
        let v = r.to_json_untimed();
        assert!(v.get("seconds").is_none());
        assert_eq!(v["relation"], "=");
        assert_eq!(v["lhs"], "1/3");
        assert!(v["counts"]["delta_i"].is_string());
        let full = serde_json::to_value(&r).unwrap();
        assert!(full["seconds"].is_number());
    }
}
