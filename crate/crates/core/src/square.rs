//! Latin squares, partial Latin squares and conjugation.
//!
//! Symbols are stored 0-based. Every textual form (files, `Display`) is
//! 1-based, with `0` marking an empty cell of a partial square.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported order; a symbol set must fit in one `u64` mask.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("order {0} is outside 1..={MAX_ORDER}")]
    Order(usize),
    #[error("symbol {symbol} at cell ({row},{col}) is not in 1..={bound}")]
    SymbolRange {
        row: usize,
        col: usize,
        symbol: usize,
        bound: usize,
    },
    #[error("cell ({row},{col}) repeats symbol {symbol} already used in its {line}")]
    Repeat {
        row: usize,
        col: usize,
        symbol: usize,
        line: &'static str,
    },
    #[error("cell ({row},{col}) is empty")]
    Empty { row: usize, col: usize },
}

fn check_order(n: usize) -> Result<(), SquareError> {
    if n == 0 || n > MAX_ORDER {
        Err(SquareError::Order(n))
    } else {
        Ok(())
    }
}

/// Scan a row-major grid of optional 0-based symbols; the first conflicting
/// cell in row-major order is reported (1-based).
fn scan_grid(n: usize, bound: usize, cells: &[Option<u8>]) -> Result<(), SquareError> {
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    for r in 0..n {
        for c in 0..n {
            let Some(s) = cells[r * n + c] else { continue };
            let s = s as usize;
            if s >= bound {
                return Err(SquareError::SymbolRange {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    bound,
                });
            }
            let bit = 1u64 << s;
            if rows[r] & bit != 0 {
                return Err(SquareError::Repeat {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    line: "row",
                });
            }
            if cols[c] & bit != 0 {
                return Err(SquareError::Repeat {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    line: "column",
                });
            }
            rows[r] |= bit;
            cols[c] |= bit;
        }
    }
    Ok(())
}

/// A Latin square of order `n`; every row and column is a permutation of
/// the symbols `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Build from 0-based rows, validating every invariant.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, SquareError> {
        let n = rows.len();
        check_order(n)?;
        let mut cells = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SquareError::Malformed {
                    line: r + 2,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
            cells.extend_from_slice(row);
        }
        Self::from_cells(n, cells)
    }

    /// Build from a row-major vector of 0-based symbols.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<Self, SquareError> {
        check_order(n)?;
        assert_eq!(cells.len(), n * n, "cell vector has wrong length");
        let opt: Vec<Option<u8>> = cells.iter().map(|&s| Some(s)).collect();
        scan_grid(n, n, &opt)?;
        Ok(Self { n, cells })
    }

    /// Caller guarantees the Latin property.
    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Self { n, cells }
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u8] {
        &mut self.cells
    }

    /// `L[r][c] = (r + c) mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n));
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u8))
            .collect();
        Self { n, cells }
    }

    /// Cayley table of the elementary abelian group of order `n = 2^k`,
    /// `L[r][c] = r xor c`.
    pub fn elementary_abelian(n: usize) -> Self {
        assert!(n.is_power_of_two() && n <= MAX_ORDER);
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r ^ c) as u8))
            .collect();
        Self { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// `(row, column, symbol)` triples, all 0-based.
    pub fn entries(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let n = self.n;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, &s)| [k / n, k % n, s as usize])
    }

    /// Rebuild from an entry list, checking it describes a Latin square.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self, SquareError> {
        check_order(n)?;
        let mut cells: Vec<Option<u8>> = vec![None; n * n];
        for [r, c, s] in entries {
            if r >= n || c >= n || s >= n {
                return Err(SquareError::SymbolRange {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    bound: n,
                });
            }
            if cells[r * n + c].replace(s as u8).is_some() {
                return Err(SquareError::Repeat {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    line: "cell",
                });
            }
        }
        scan_grid(n, n, &cells)?;
        let mut out = Vec::with_capacity(n * n);
        for (k, cell) in cells.into_iter().enumerate() {
            match cell {
                Some(s) => out.push(s),
                None => {
                    return Err(SquareError::Empty {
                        row: k / n + 1,
                        col: k % n + 1,
                    })
                }
            }
        }
        Ok(Self { n, cells: out })
    }

    /// Re-check the row and column invariants.
    pub fn is_latin(&self) -> bool {
        let opt: Vec<Option<u8>> = self.cells.iter().map(|&s| Some(s)).collect();
        scan_grid(self.n, self.n, &opt).is_ok()
    }

    pub fn transpose(&self) -> Self {
        self.conjugate(RoleMap::TRANSPOSE)
    }

    /// The conjugate whose entry set is `{(x[map[0]], x[map[1]], x[map[2]])}`.
    pub fn conjugate(&self, map: RoleMap) -> Self {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for e in self.entries() {
            let [r, c, s] = map.apply(e);
            cells[r * n + c] = s as u8;
        }
        Self { n, cells }
    }

    /// Apply independent relabellings of rows, columns and symbols:
    /// entry `(r, c, s)` becomes `(rows[r], cols[c], syms[s])`.
    pub fn relabel(&self, rows: &[usize], cols: &[usize], syms: &[usize]) -> Self {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for [r, c, s] in self.entries() {
            cells[rows[r] * n + cols[c]] = syms[s] as u8;
        }
        Self { n, cells }
    }

    pub fn to_partial(&self) -> PartialSquare {
        PartialSquare {
            n: self.n,
            bound: self.n,
            cells: self.cells.iter().map(|&s| Some(s)).collect(),
        }
    }

    /// Canonical text form: order line, then one line of 1-based symbols per row.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for r in 0..self.n {
            let line: Vec<String> = self.row(r).iter().map(|s| (s + 1).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LatinSquare {
    type Err = SquareError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parsed = parse_grid(text)?;
        if let Some((line, _)) = parsed.headers.first() {
            return Err(SquareError::Malformed {
                line: *line,
                msg: "headers are only allowed in partial square files".into(),
            });
        }
        let n = parsed.n;
        let mut cells = Vec::with_capacity(n * n);
        for (k, v) in parsed.values.iter().enumerate() {
            if *v == 0 {
                return Err(SquareError::Empty {
                    row: k / n + 1,
                    col: k % n + 1,
                });
            }
            if *v > n {
                return Err(SquareError::SymbolRange {
                    row: k / n + 1,
                    col: k % n + 1,
                    symbol: *v,
                    bound: n,
                });
            }
            cells.push((*v - 1) as u8);
        }
        LatinSquare::from_cells(n, cells)
    }
}

/// Parse a stream of squares separated by blank lines.
pub fn parse_squares(text: &str) -> Result<Vec<LatinSquare>, SquareError> {
    let mut out = Vec::new();
    let mut block = String::new();
    for line in text.lines().chain(std::iter::once("")) {
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(block.parse()?);
                block.clear();
            }
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    Ok(out)
}

/// Optional-cell square whose stored symbols all lie below `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialSquare {
    n: usize,
    bound: usize,
    cells: Vec<Option<u8>>,
}

impl PartialSquare {
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n));
        Self {
            n,
            bound: n,
            cells: vec![None; n * n],
        }
    }

    pub fn with_bound(n: usize, bound: usize) -> Result<Self, SquareError> {
        check_order(n)?;
        if bound == 0 || bound > n {
            return Err(SquareError::Malformed {
                line: 0,
                msg: format!("symbol bound {bound} must lie in 1..={n}"),
            });
        }
        Ok(Self {
            n,
            bound,
            cells: vec![None; n * n],
        })
    }

    pub fn from_cells(n: usize, bound: usize, cells: Vec<Option<u8>>) -> Result<Self, SquareError> {
        let mut p = Self::with_bound(n, bound)?;
        assert_eq!(cells.len(), n * n, "cell vector has wrong length");
        scan_grid(n, bound, &cells)?;
        p.cells = cells;
        Ok(p)
    }

    /// Build from 0-based `(row, column, symbol)` entries.
    pub fn from_entries(
        n: usize,
        bound: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, SquareError> {
        let mut p = Self::with_bound(n, bound)?;
        for (r, c, s) in entries {
            p.set(r, c, s)?;
        }
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Option<u8> {
        self.cells[r * self.n + c]
    }

    pub fn cells(&self) -> &[Option<u8>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// Fill cell `(r, c)` with symbol `s` (0-based), rejecting conflicts.
    pub fn set(&mut self, r: usize, c: usize, s: usize) -> Result<(), SquareError> {
        let n = self.n;
        if r >= n || c >= n || s >= self.bound {
            return Err(SquareError::SymbolRange {
                row: r + 1,
                col: c + 1,
                symbol: s + 1,
                bound: self.bound,
            });
        }
        for k in 0..n {
            if k != c && self.get(r, k) == Some(s as u8) {
                return Err(SquareError::Repeat {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    line: "row",
                });
            }
            if k != r && self.get(k, c) == Some(s as u8) {
                return Err(SquareError::Repeat {
                    row: r + 1,
                    col: c + 1,
                    symbol: s + 1,
                    line: "column",
                });
            }
        }
        self.cells[r * n + c] = Some(s as u8);
        Ok(())
    }

    pub fn clear(&mut self, r: usize, c: usize) {
        self.cells[r * self.n + c] = None;
    }

    /// Occupied entries as 0-based `(row, column, symbol)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(k, s)| s.map(|s| (k / n, k % n, s as usize)))
    }

    /// True when `square` agrees with every filled cell.
    pub fn is_contained_in(&self, square: &LatinSquare) -> bool {
        square.order() == self.n
            && self
                .cells
                .iter()
                .zip(square.cells())
                .all(|(p, &s)| p.is_none_or(|p| p == s))
    }

    pub fn to_latin(&self) -> Option<LatinSquare> {
        let cells: Option<Vec<u8>> = self.cells.iter().copied().collect();
        LatinSquare::from_cells(self.n, cells?).ok()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut cells = vec![None; n * n];
        for (r, c, s) in self.entries() {
            cells[c * n + r] = Some(s as u8);
        }
        Self {
            n,
            bound: self.bound,
            cells,
        }
    }

    /// Move row `r` to `rows[r]` for every row.
    pub fn permute_rows(&self, rows: &[usize]) -> Self {
        let n = self.n;
        let mut cells = vec![None; n * n];
        for (r, c, s) in self.entries() {
            cells[rows[r] * n + c] = Some(s as u8);
        }
        Self {
            n,
            bound: self.bound,
            cells,
        }
    }

    /// Rows occupied in column `c`, as a bitmask.
    pub fn column_rows(&self, c: usize) -> u64 {
        (0..self.n)
            .filter(|&r| self.get(r, c).is_some())
            .fold(0, |m, r| m | 1 << r)
    }

    /// Columns occupied in row `r`, as a bitmask.
    pub fn row_columns(&self, r: usize) -> u64 {
        (0..self.n)
            .filter(|&c| self.get(r, c).is_some())
            .fold(0, |m, c| m | 1 << c)
    }

    pub fn column_symbols(&self, c: usize) -> u64 {
        (0..self.n)
            .filter_map(|r| self.get(r, c))
            .fold(0, |m, s| m | 1 << s)
    }

    pub fn row_symbols(&self, r: usize) -> u64 {
        (0..self.n)
            .filter_map(|c| self.get(r, c))
            .fold(0, |m, s| m | 1 << s)
    }

    pub fn has_symbol(&self, s: usize) -> bool {
        self.cells.iter().any(|&x| x == Some(s as u8))
    }

    /// The entries in columns `a` and `b` form a union of column cycles:
    /// both columns occupy the same rows and carry the same symbols.
    pub fn columns_form_cycles(&self, a: usize, b: usize) -> bool {
        self.column_rows(a) == self.column_rows(b)
            && self.column_symbols(a) == self.column_symbols(b)
    }

    /// Row analogue of [`PartialSquare::columns_form_cycles`].
    pub fn rows_form_cycles(&self, a: usize, b: usize) -> bool {
        self.row_columns(a) == self.row_columns(b) && self.row_symbols(a) == self.row_symbols(b)
    }

    /// Canonical text. A `bound m` header follows the order line when the
    /// bound differs from the order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PartialSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        if self.bound != self.n {
            writeln!(f, "bound {}", self.bound)?;
        }
        for r in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|c| self.get(r, c).map_or(0, |s| s as usize + 1).to_string())
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PartialSquare {
    type Err = SquareError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Ok(PartialSquareFile::parse(text)?.square)
    }
}

/// A parsed partial square file, including the `restrict i` header used by
/// constraint files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSquareFile {
    pub square: PartialSquare,
    pub restrict: Option<usize>,
}

impl PartialSquareFile {
    pub fn parse(text: &str) -> Result<Self, SquareError> {
        let parsed = parse_grid(text)?;
        let n = parsed.n;
        let mut bound = n;
        let mut restrict = None;
        for (line, words) in &parsed.headers {
            let bad = |msg: &str| SquareError::Malformed {
                line: *line,
                msg: msg.to_string(),
            };
            let value = |w: &[String]| -> Result<usize, SquareError> {
                match w {
                    [_, v] => v.parse().map_err(|_| bad("expected an integer argument")),
                    _ => Err(bad("expected exactly one argument")),
                }
            };
            match words[0].as_str() {
                "bound" => bound = value(words)?,
                "restrict" => restrict = Some(value(words)?),
                other => return Err(bad(&format!("unknown header `{other}`"))),
            }
        }
        let mut square = PartialSquare::with_bound(n, bound)?;
        let cells = parsed
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                if v > n {
                    Err(SquareError::SymbolRange {
                        row: k / n + 1,
                        col: k % n + 1,
                        symbol: v,
                        bound: n,
                    })
                } else {
                    Ok((v > 0).then(|| (v - 1) as u8))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        scan_grid(n, bound, &cells)?;
        square.cells = cells;
        Ok(Self { square, restrict })
    }

    pub fn to_text(&self) -> String {
        let Some(i) = self.restrict else {
            return self.square.to_text();
        };
        let body = self.square.to_text();
        let mut lines = body.lines();
        let mut out = format!("{}\n", lines.next().unwrap_or_default());
        if self.square.bound() != self.square.order() {
            lines.next();
        }
        out.push_str(&format!("bound {}\nrestrict {i}\n", self.square.bound()));
        for line in lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

struct ParsedGrid {
    n: usize,
    headers: Vec<(usize, Vec<String>)>,
    values: Vec<usize>,
}

fn parse_grid(text: &str) -> Result<ParsedGrid, SquareError> {
    let mut n = None;
    let mut headers = Vec::new();
    let mut values = Vec::new();
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            if n.is_some() && rows > 0 && rows < n.unwrap_or(0) {
                return Err(SquareError::Malformed {
                    line: line_no,
                    msg: "blank line inside the grid".into(),
                });
            }
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0].chars().next().is_some_and(|ch| ch.is_ascii_alphabetic()) {
            if rows > 0 {
                return Err(SquareError::Malformed {
                    line: line_no,
                    msg: "header after grid rows".into(),
                });
            }
            headers.push((line_no, words.iter().map(|w| w.to_string()).collect()));
            continue;
        }
        let nums = words
            .iter()
            .map(|w| w.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SquareError::Malformed {
                line: line_no,
                msg: "expected non-negative integers".into(),
            })?;
        match n {
            None => {
                if nums.len() != 1 {
                    return Err(SquareError::Malformed {
                        line: line_no,
                        msg: "first line must hold the order".into(),
                    });
                }
                check_order(nums[0])?;
                n = Some(nums[0]);
            }
            Some(order) => {
                if rows == order {
                    return Err(SquareError::Malformed {
                        line: line_no,
                        msg: format!("more than {order} grid rows"),
                    });
                }
                if nums.len() != order {
                    return Err(SquareError::Malformed {
                        line: line_no,
                        msg: format!("expected {order} entries, found {}", nums.len()),
                    });
                }
                values.extend(nums);
                rows += 1;
            }
        }
    }
    let Some(n) = n else {
        return Err(SquareError::Malformed {
            line: 1,
            msg: "missing order line".into(),
        });
    };
    if rows != n {
        return Err(SquareError::Malformed {
            line: text.lines().count(),
            msg: format!("expected {n} grid rows, found {rows}"),
        });
    }
    Ok(ParsedGrid { n, headers, values })
}

/// One of the three coordinates of an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Row = 0,
    Column = 1,
    Symbol = 2,
}

/// A permutation of the entry coordinates. Position `k` names which input
/// coordinate becomes output coordinate `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoleMap([Role; 3]);

impl RoleMap {
    pub const IDENTITY: RoleMap = RoleMap([Role::Row, Role::Column, Role::Symbol]);
    pub const TRANSPOSE: RoleMap = RoleMap([Role::Column, Role::Row, Role::Symbol]);
    /// Rows become symbols and symbols become rows.
    pub const ROW_SYMBOL: RoleMap = RoleMap([Role::Symbol, Role::Column, Role::Row]);

    /// `None` unless `roles` is a permutation.
    pub fn new(roles: [Role; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for r in roles {
            seen[r as usize] = true;
        }
        seen.iter().all(|&s| s).then_some(Self(roles))
    }

    pub fn all() -> [RoleMap; 6] {
        use Role::*;
        [
            RoleMap([Row, Column, Symbol]),
            RoleMap([Row, Symbol, Column]),
            RoleMap([Column, Row, Symbol]),
            RoleMap([Column, Symbol, Row]),
            RoleMap([Symbol, Row, Column]),
            RoleMap([Symbol, Column, Row]),
        ]
    }

    #[inline]
    pub fn apply(self, x: [usize; 3]) -> [usize; 3] {
        [x[self.0[0] as usize], x[self.0[1] as usize], x[self.0[2] as usize]]
    }

    pub fn inverse(self) -> Self {
        let mut inv = [Role::Row; 3];
        let roles = [Role::Row, Role::Column, Role::Symbol];
        for (k, r) in self.0.iter().enumerate() {
            inv[*r as usize] = roles[k];
        }
        Self(inv)
    }

    pub fn roles(self) -> [Role; 3] {
        self.0
    }
}

/// Rows `R`, columns `C` and symbols `S` of a subsquare, all 0-based bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsquareLocation {
    pub rows: u64,
    pub cols: u64,
    pub symbols: u64,
}

impl SubsquareLocation {
    pub fn order(&self) -> usize {
        self.rows.count_ones() as usize
    }

    /// Proper subsquares have order strictly between 1 and `n`.
    pub fn is_proper(&self, n: usize) -> bool {
        let m = self.order();
        m >= 2 && m < n
    }
}

/// Iterate the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Mask of the first `k` indices.
#[inline]
pub fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::LatinSquare;

    /// The order-6 member of the corner-restricted family shown in the
    /// worked example for `n = 6, m = 3, i = 5`.
    pub const WORKED_SQUARE: &str = "6
1 2 3 4 5 6
2 3 6 5 4 1
6 4 2 1 3 5
4 6 5 2 1 3
5 1 4 3 6 2
3 5 1 6 2 4
";

    pub fn worked_square() -> LatinSquare {
        WORKED_SQUARE.parse().unwrap()
    }
}
