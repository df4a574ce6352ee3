//! Exact counting and enumeration of Latin squares under cell constraints.
//!
//! The kernel fills cells in row-major order, keeping one used-symbol mask
//! per row and per column. A cell's candidates are its allowed mask minus
//! both masks. Once every remaining row is unconstrained, the number of
//! completions depends only on the multiset of column masks, so counting
//! switches to a memoised row-at-a-time recursion keyed by the sorted masks.
//!
//! Parallel counting splits the search at a prefix of cells and adds the
//! subtree counts, so results do not depend on the worker count.

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::BigCount;
use crate::square::{low_mask, LatinSquare, PartialSquare, SquareError, MAX_ORDER};

/// Default largest order for exhaustive work.
pub const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("order {n} exceeds the exhaustive guard of {guard}; raise the guard to proceed")]
    Guard { n: usize, guard: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Square(#[from] SquareError),
    #[error("bordered square of order {0} has no completion")]
    NoCompletion(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub workers: usize,
    pub max_order: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl EnumerateOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
            ..Self::default()
        }
    }
}

/// The first `i` cells, in row-major order, of the top-left `m x m` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixCellSet {
    pub m: usize,
    pub i: usize,
}

impl PrefixCellSet {
    pub fn new(m: usize, i: usize) -> Result<Self, EnumerateError> {
        if m == 0 || i > m * m {
            return Err(EnumerateError::Params(format!(
                "prefix index {i} outside 0..={} for block order {m}",
                m * m
            )));
        }
        Ok(Self { m, i })
    }

    /// Cells `(r, c)`, 0-based, with `r * m + c < i`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.i).map(|k| (k / self.m, k % self.m))
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        r < self.m && c < self.m && r * self.m + c < self.i
    }

    /// The cell added by this prefix over the previous one.
    pub fn last_cell(&self) -> Option<(usize, usize)> {
        (self.i > 0).then(|| ((self.i - 1) / self.m, (self.i - 1) % self.m))
    }
}

/// Fixed cells plus a set of cells whose symbols must lie in `0..bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSpec {
    n: usize,
    fixed: Vec<Option<u8>>,
    restricted: Vec<bool>,
    bound: usize,
}

impl ConstraintSpec {
    pub fn new(n: usize) -> Result<Self, EnumerateError> {
        if n == 0 || n > MAX_ORDER {
            return Err(SquareError::Order(n).into());
        }
        Ok(Self {
            n,
            fixed: vec![None; n * n],
            restricted: vec![false; n * n],
            bound: n,
        })
    }

    /// Squares containing `p`.
    pub fn containing(p: &PartialSquare) -> Self {
        let n = p.order();
        Self {
            n,
            fixed: p.cells().to_vec(),
            restricted: vec![false; n * n],
            bound: n,
        }
    }

    /// Squares whose symbols on `T_i` of the `m x m` corner all lie in `0..m`.
    pub fn delta(n: usize, prefix: PrefixCellSet) -> Result<Self, EnumerateError> {
        let mut spec = Self::new(n)?;
        if prefix.m > n {
            return Err(EnumerateError::Params(format!(
                "block order {} exceeds square order {n}",
                prefix.m
            )));
        }
        spec.restrict(prefix.cells(), prefix.m)?;
        Ok(spec)
    }

    /// Fix one cell. Conflicting fixes are accepted and make the spec vacuous.
    pub fn fix(&mut self, r: usize, c: usize, s: usize) -> Result<&mut Self, EnumerateError> {
        if r >= self.n || c >= self.n || s >= self.n {
            return Err(EnumerateError::Params(format!(
                "fixed entry ({},{},{}) out of range",
                r + 1,
                c + 1,
                s + 1
            )));
        }
        self.fixed[r * self.n + c] = Some(s as u8);
        Ok(self)
    }

    /// Restrict `cells` to symbols `0..bound`; replaces any previous bound.
    pub fn restrict(
        &mut self,
        cells: impl IntoIterator<Item = (usize, usize)>,
        bound: usize,
    ) -> Result<&mut Self, EnumerateError> {
        if bound == 0 || bound > self.n {
            return Err(EnumerateError::Params(format!(
                "restriction bound {bound} outside 1..={}",
                self.n
            )));
        }
        self.bound = bound;
        for (r, c) in cells {
            if r >= self.n || c >= self.n {
                return Err(EnumerateError::Params(format!(
                    "restricted cell ({},{}) out of range",
                    r + 1,
                    c + 1
                )));
            }
            self.restricted[r * self.n + c] = true;
        }
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn fixed(&self) -> &[Option<u8>] {
        &self.fixed
    }

    /// Per-cell allowed symbol masks.
    fn allowed(&self) -> Vec<u64> {
        let full = low_mask(self.n);
        let low = low_mask(self.bound);
        (0..self.n * self.n)
            .map(|k| {
                let mut mask = full;
                if let Some(s) = self.fixed[k] {
                    mask &= 1 << s;
                }
                if self.restricted[k] {
                    mask &= low;
                }
                mask
            })
            .collect()
    }

    /// True when no square can satisfy the spec for a reason visible
    /// without search: repeated fixed symbols or an empty allowed set.
    pub fn is_vacuous(&self) -> bool {
        let n = self.n;
        if self.allowed().contains(&0) {
            return true;
        }
        let mut rows = vec![0u64; n];
        let mut cols = vec![0u64; n];
        for (k, s) in self.fixed.iter().enumerate() {
            if let Some(s) = s {
                let bit = 1u64 << s;
                if rows[k / n] & bit != 0 || cols[k % n] & bit != 0 {
                    return true;
                }
                rows[k / n] |= bit;
                cols[k % n] |= bit;
            }
        }
        false
    }

    /// First row from which every later cell is unconstrained.
    fn free_from(&self) -> usize {
        let n = self.n;
        (0..=n)
            .rev()
            .take_while(|&r| {
                r == n || (r * n..(r + 1) * n).all(|k| self.fixed[k].is_none() && !self.restricted[k])
            })
            .last()
            .unwrap_or(n)
    }

    fn check_guard(&self, opts: &EnumerateOptions) -> Result<(), EnumerateError> {
        if self.n > opts.max_order {
            Err(EnumerateError::Guard {
                n: self.n,
                guard: opts.max_order,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone)]
struct Node {
    pos: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

struct Counter<'a> {
    n: usize,
    allowed: &'a [u64],
    free_from: usize,
    memo: &'a DashMap<Vec<u64>, u128>,
}

impl Counter<'_> {
    fn count(&self, node: &mut Node) -> u128 {
        let n = self.n;
        if node.pos == n * n {
            return 1;
        }
        let (r, c) = (node.pos / n, node.pos % n);
        if c == 0 && r >= self.free_from {
            return self.tail(r, &node.cols);
        }
        let mut cand = self.allowed[node.pos] & !node.rows[r] & !node.cols[c];
        let mut total = 0u128;
        node.pos += 1;
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            node.rows[r] |= bit;
            node.cols[c] |= bit;
            total += self.count(node);
            node.rows[r] ^= bit;
            node.cols[c] ^= bit;
        }
        node.pos -= 1;
        total
    }

    /// Completions of a Latin rectangle with `r` full rows and unconstrained
    /// remaining rows, given its column masks.
    fn tail(&self, r: usize, cols: &[u64]) -> u128 {
        // n - 1 full rows force the last one
        if r + 1 >= self.n {
            return 1;
        }
        let mut key = cols.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let mut work = key.clone();
        let total = self.fill_row(r, 0, 0, &mut work);
        self.memo.insert(key, total);
        total
    }

    fn fill_row(&self, r: usize, c: usize, used: u64, cols: &mut [u64]) -> u128 {
        if c == self.n {
            return self.tail(r + 1, cols);
        }
        let mut cand = low_mask(self.n) & !used & !cols[c];
        let mut total = 0;
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            cols[c] |= bit;
            total += self.fill_row(r, c + 1, used | bit, cols);
            cols[c] ^= bit;
        }
        total
    }

    /// Expand the search breadth-first until there are enough subtrees.
    fn split(&self, root: Node, target: usize) -> Vec<Node> {
        let n = self.n;
        let mut frontier = vec![root];
        loop {
            let pos = frontier[0].pos;
            let (r, c) = (pos / n, pos % n);
            if frontier.len() >= target || pos == n * n || (c == 0 && r >= self.free_from) {
                return frontier;
            }
            let mut next = Vec::new();
            for node in frontier {
                let mut cand = self.allowed[pos] & !node.rows[r] & !node.cols[c];
                while cand != 0 {
                    let bit = cand & cand.wrapping_neg();
                    cand ^= bit;
                    let mut child = node.clone();
                    child.pos += 1;
                    child.rows[r] |= bit;
                    child.cols[c] |= bit;
                    next.push(child);
                }
            }
            if next.is_empty() {
                return next;
            }
            frontier = next;
        }
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Exact number of order-`n` Latin squares satisfying `spec`.
pub fn count_constrained(
    spec: &ConstraintSpec,
    opts: &EnumerateOptions,
) -> Result<BigCount, EnumerateError> {
    spec.check_guard(opts)?;
    if spec.is_vacuous() {
        return Ok(BigCount::zero());
    }
    let n = spec.n;
    let allowed = spec.allowed();
    let memo = DashMap::new();
    let counter = Counter {
        n,
        allowed: &allowed,
        free_from: spec.free_from(),
        memo: &memo,
    };
    let root = Node {
        pos: 0,
        rows: vec![0; n],
        cols: vec![0; n],
    };
    let total = if opts.workers <= 1 {
        let mut root = root;
        counter.count(&mut root)
    } else {
        let tasks = counter.split(root, 16 * opts.workers);
        with_pool(opts.workers, || {
            tasks
                .into_par_iter()
                .map(|mut node| counter.count(&mut node))
                .sum::<u128>()
        })
    };
    Ok(BigCount::from(total))
}

/// Squares of order `n` whose first `i` corner cells hold symbols in `0..m`.
pub fn count_delta(
    n: usize,
    m: usize,
    i: usize,
    opts: &EnumerateOptions,
) -> Result<BigCount, EnumerateError> {
    if m < 2 || 2 * m > n {
        return Err(EnumerateError::Params(format!(
            "need 2 <= m <= n/2, got n = {n}, m = {m}"
        )));
    }
    let spec = ConstraintSpec::delta(n, PrefixCellSet::new(m, i)?)?;
    count_constrained(&spec, opts)
}

/// Number of Latin squares of order `n`.
pub fn count_latin_squares(n: usize, opts: &EnumerateOptions) -> Result<BigCount, EnumerateError> {
    count_constrained(&ConstraintSpec::new(n)?, opts)
}

struct Walker<'a> {
    n: usize,
    allowed: &'a [u64],
}

impl Walker<'_> {
    fn walk(&self, node: &mut Node, grid: &mut LatinSquare, visit: &mut dyn FnMut(&LatinSquare)) -> u64 {
        let n = self.n;
        if node.pos == n * n {
            visit(grid);
            return 1;
        }
        let (r, c) = (node.pos / n, node.pos % n);
        let mut cand = self.allowed[node.pos] & !node.rows[r] & !node.cols[c];
        let mut visited = 0;
        node.pos += 1;
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            grid.cells_mut()[r * n + c] = bit.trailing_zeros() as u8;
            node.rows[r] |= bit;
            node.cols[c] |= bit;
            visited += self.walk(node, grid, visit);
            node.rows[r] ^= bit;
            node.cols[c] ^= bit;
        }
        node.pos -= 1;
        visited
    }
}

fn walker_setup(spec: &ConstraintSpec) -> (Vec<u64>, Node, LatinSquare) {
    let n = spec.n;
    (
        spec.allowed(),
        Node {
            pos: 0,
            rows: vec![0; n],
            cols: vec![0; n],
        },
        LatinSquare::from_cells_unchecked(n, vec![0; n * n]),
    )
}

/// Visit every square satisfying `spec` once, in lexicographic order of
/// row-major cells. Returns the number of visits.
pub fn enumerate_constrained(
    spec: &ConstraintSpec,
    opts: &EnumerateOptions,
    mut visit: impl FnMut(&LatinSquare),
) -> Result<u64, EnumerateError> {
    spec.check_guard(opts)?;
    if spec.is_vacuous() {
        return Ok(0);
    }
    let (allowed, mut root, mut grid) = walker_setup(spec);
    let walker = Walker {
        n: spec.n,
        allowed: &allowed,
    };
    Ok(walker.walk(&mut root, &mut grid, &mut visit))
}

/// Order-insensitive parallel fold over the squares satisfying `spec`.
///
/// Each subtree folds into its own accumulator from `init`; accumulators
/// are combined with `merge`, which must be associative and commutative.
pub fn fold_constrained<T, I, F, M>(
    spec: &ConstraintSpec,
    opts: &EnumerateOptions,
    init: I,
    fold: F,
    merge: M,
) -> Result<T, EnumerateError>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &LatinSquare) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    spec.check_guard(opts)?;
    if spec.is_vacuous() {
        return Ok(init());
    }
    let (allowed, mut root, mut grid) = walker_setup(spec);
    let n = spec.n;
    let walker = Walker {
        n,
        allowed: &allowed,
    };
    if opts.workers <= 1 {
        let mut acc = init();
        walker.walk(&mut root, &mut grid, &mut |sq| fold(&mut acc, sq));
        return Ok(acc);
    }
    let tasks = split_with_grid(n, &allowed, root, 16 * opts.workers);
    Ok(with_pool(opts.workers, || {
        tasks
            .into_par_iter()
            .map(|(mut node, cells)| {
                let mut acc = init();
                let mut grid = LatinSquare::from_cells_unchecked(n, cells);
                walker.walk(&mut node, &mut grid, &mut |sq| fold(&mut acc, sq));
                acc
            })
            .reduce(&init, &merge)
    }))
}

/// Breadth-first split that also records the symbols chosen so far.
fn split_with_grid(n: usize, allowed: &[u64], root: Node, target: usize) -> Vec<(Node, Vec<u8>)> {
    let mut frontier = vec![(root, vec![0u8; n * n])];
    loop {
        let pos = frontier[0].0.pos;
        if frontier.len() >= target || pos == n * n {
            return frontier;
        }
        let (r, c) = (pos / n, pos % n);
        let mut next = Vec::new();
        for (node, cells) in frontier {
            let mut cand = allowed[pos] & !node.rows[r] & !node.cols[c];
            while cand != 0 {
                let bit = cand & cand.wrapping_neg();
                cand ^= bit;
                let mut child = node.clone();
                let mut cells = cells.clone();
                cells[pos] = bit.trailing_zeros() as u8;
                child.pos += 1;
                child.rows[r] |= bit;
                child.cols[c] |= bit;
                next.push((child, cells));
            }
        }
        if next.is_empty() {
            return next;
        }
        frontier = next;
    }
}

/// A completion of `p`, or `None` when none exists.
///
/// Search order: the empty cell with the fewest candidates first (ties
/// broken row-major), symbols tried in increasing order.
pub fn complete(p: &PartialSquare) -> Option<LatinSquare> {
    let n = p.order();
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    let mut cells = vec![u8::MAX; n * n];
    for (r, c, s) in p.entries() {
        let bit = 1u64 << s;
        if rows[r] & bit != 0 || cols[c] & bit != 0 {
            return None;
        }
        rows[r] |= bit;
        cols[c] |= bit;
        cells[r * n + c] = s as u8;
    }
    fn search(n: usize, cells: &mut [u8], rows: &mut [u64], cols: &mut [u64]) -> bool {
        let full = low_mask(n);
        let mut best: Option<(usize, u64)> = None;
        for (k, &v) in cells.iter().enumerate() {
            if v != u8::MAX {
                continue;
            }
            let cand = full & !rows[k / n] & !cols[k % n];
            if cand == 0 {
                return false;
            }
            if best.is_none_or(|(_, b)| cand.count_ones() < b.count_ones()) {
                best = Some((k, cand));
            }
        }
        let Some((k, mut cand)) = best else {
            return true;
        };
        let (r, c) = (k / n, k % n);
        while cand != 0 {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            cells[k] = bit.trailing_zeros() as u8;
            rows[r] |= bit;
            cols[c] |= bit;
            if search(n, cells, rows, cols) {
                return true;
            }
            rows[r] ^= bit;
            cols[c] ^= bit;
        }
        cells[k] = u8::MAX;
        false
    }
    search(n, &mut cells, &mut rows, &mut cols)
        .then(|| LatinSquare::from_cells(n, cells).expect("search keeps rows and columns Latin"))
}

/// The bordered partial square whose completion is the block used by the
/// small-subsquare chain: first row and column `1..m`, second row and
/// column swapping adjacent pairs, with the last three entries of the
/// second line cycled when `m` is odd.
pub fn bordered_border(m: usize) -> Result<PartialSquare, EnumerateError> {
    if m < 2 {
        return Err(EnumerateError::Params(format!("bordered square needs m >= 2, got {m}")));
    }
    // 1-based values of the second row and column
    let mut second = vec![0usize; m + 1];
    let paired = if m % 2 == 0 { m } else { m - 3 };
    for i in 1..=paired {
        second[i] = if i % 2 == 1 { i + 1 } else { i - 1 };
    }
    if m % 2 == 1 {
        second[m - 2] = m - 1;
        second[m - 1] = m;
        second[m] = m - 2;
    }
    let mut p = PartialSquare::empty(m);
    for i in 1..=m {
        p.set(0, i - 1, i - 1)?;
        if i > 1 {
            p.set(i - 1, 0, i - 1)?;
        }
        if p.get(1, i - 1).is_none() {
            p.set(1, i - 1, second[i] - 1)?;
        }
        if i > 2 && p.get(i - 1, 1).is_none() {
            p.set(i - 1, 1, second[i] - 1)?;
        }
    }
    Ok(p)
}

/// The order-`m` square with the prescribed first two rows and columns,
/// found by completing [`bordered_border`].
pub fn build_m(m: usize) -> Result<LatinSquare, EnumerateError> {
    let border = bordered_border(m)?;
    complete(&border).ok_or(EnumerateError::NoCompletion(m))
}
