//! Row permutations, row/column/symbol cycles and cycle switching.
//!
//! Column and symbol cycles are found by conjugating the square so that the
//! requested axis plays the row role, extracting a row cycle there, and
//! mapping the entries back.

use thiserror::Error;

use crate::square::{bits, LatinSquare, RoleMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("the two lines of a cycle must differ (got {0} twice)")]
    SameLine(usize),
    #[error("index {index} is out of range for order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("cycle entry ({0},{1},{2}) is not present in the square")]
    NotPresent(usize, usize, usize),
}

/// The line family a cycle lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Row,
    Column,
    Symbol,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Row, Axis::Column, Axis::Symbol];

    /// Conjugation that moves this axis into the row role. Every map used
    /// here is an involution. The cross lines are columns for the row and
    /// symbol axes and rows for the column axis.
    fn to_rows(self) -> RoleMap {
        match self {
            Axis::Row => RoleMap::IDENTITY,
            Axis::Column => RoleMap::TRANSPOSE,
            Axis::Symbol => RoleMap::ROW_SYMBOL,
        }
    }

    fn coordinate(self) -> usize {
        self as usize
    }
}

/// The permutation `tau` with `tau(L[i][k]) = L[j][k]` for every column `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPermutation {
    pub from: usize,
    pub to: usize,
    map: Vec<u8>,
}

impl RowPermutation {
    pub fn image(&self, s: usize) -> usize {
        self.map[s] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.map
    }

    /// Disjoint cycles, each starting at its smallest symbol, ordered by
    /// that symbol.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cyc.push(s);
                s = self.map[s] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.map.iter().enumerate().filter(|(s, &t)| *s == t as usize).count()
    }
}

pub fn row_permutation(l: &LatinSquare, i: usize, j: usize) -> Result<RowPermutation, CycleError> {
    let n = l.order();
    check_index(i, n)?;
    check_index(j, n)?;
    if i == j {
        return Err(CycleError::SameLine(i + 1));
    }
    let mut map = vec![0u8; n];
    for k in 0..n {
        map[l.get(i, k) as usize] = l.get(j, k);
    }
    Ok(RowPermutation { from: i, to: j, map })
}

fn check_index(index: usize, order: usize) -> Result<(), CycleError> {
    if index >= order {
        Err(CycleError::OutOfRange { index, order })
    } else {
        Ok(())
    }
}

/// A minimal two-line subrectangle on one axis.
///
/// `lines` is ordered ascending; `hit` is the bitmask of cross lines the
/// cycle covers. `entries` are `(row, column, symbol)` triples of the
/// original square, `2 * |hit|` of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub axis: Axis,
    pub lines: (usize, usize),
    pub hit: u64,
    pub entries: Vec<[usize; 3]>,
}

impl Cycle {
    /// Hit set in ascending order.
    pub fn hit_set(&self) -> Vec<usize> {
        bits(self.hit).collect()
    }

    pub fn len(&self) -> usize {
        self.hit.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hit == 0
    }

    pub fn hits(&self, cross: usize) -> bool {
        self.hit >> cross & 1 == 1
    }
}

/// Row cycle of `l` on rows `i`, `j` through column `c`, as (hit mask, entries).
fn row_cycle_raw(l: &LatinSquare, i: usize, j: usize, c: usize) -> (u64, Vec<[usize; 3]>) {
    let n = l.order();
    let mut col_in_i = vec![0usize; n];
    for k in 0..n {
        col_in_i[l.get(i, k) as usize] = k;
    }
    let mut hit = 0u64;
    let mut col = c;
    loop {
        hit |= 1 << col;
        col = col_in_i[l.get(j, col) as usize];
        if col == c {
            break;
        }
    }
    let entries = bits(hit)
        .flat_map(|k| [[i, k, l.get(i, k) as usize], [j, k, l.get(j, k) as usize]])
        .collect();
    (hit, entries)
}

/// Extract the cycle on lines `i`, `j` of `axis` through cross line `c`.
pub fn extract_cycle(
    l: &LatinSquare,
    axis: Axis,
    i: usize,
    j: usize,
    c: usize,
) -> Result<Cycle, CycleError> {
    let n = l.order();
    for x in [i, j, c] {
        check_index(x, n)?;
    }
    if i == j {
        return Err(CycleError::SameLine(i + 1));
    }
    let (i, j) = (i.min(j), i.max(j));
    let map = axis.to_rows();
    let conj = if axis == Axis::Row {
        None
    } else {
        Some(l.conjugate(map))
    };
    let (hit, entries) = row_cycle_raw(conj.as_ref().unwrap_or(l), i, j, c);
    let back = map.inverse();
    let mut entries: Vec<[usize; 3]> = entries.into_iter().map(|e| back.apply(e)).collect();
    entries.sort_unstable();
    Ok(Cycle {
        axis,
        lines: (i, j),
        hit,
        entries,
    })
}

/// All cycles on a line pair, ordered by their smallest cross line. They
/// partition the entries of the two lines.
pub fn cycles_between(
    l: &LatinSquare,
    axis: Axis,
    i: usize,
    j: usize,
) -> Result<Vec<Cycle>, CycleError> {
    let mut covered = 0u64;
    let mut out = Vec::new();
    for c in 0..l.order() {
        if covered >> c & 1 == 1 {
            continue;
        }
        let cyc = extract_cycle(l, axis, i, j, c)?;
        covered |= cyc.hit;
        out.push(cyc);
    }
    Ok(out)
}

/// Switch on `cycle`: exchange its two lines on the hit set.
pub fn switch_cycle(l: &LatinSquare, cycle: &Cycle) -> Result<LatinSquare, CycleError> {
    let n = l.order();
    for &[r, c, s] in &cycle.entries {
        if r >= n || c >= n || l.get(r, c) as usize != s {
            return Err(CycleError::NotPresent(r + 1, c + 1, s + 1));
        }
    }
    let k = cycle.axis.coordinate();
    let (a, b) = cycle.lines;
    let mut cells = l.cells().to_vec();
    for &e in &cycle.entries {
        let mut e = e;
        e[k] = if e[k] == a {
            b
        } else if e[k] == b {
            a
        } else {
            return Err(CycleError::NotPresent(e[0] + 1, e[1] + 1, e[2] + 1));
        };
        cells[e[0] * n + e[1]] = e[2] as u8;
    }
    Ok(LatinSquare::from_cells_unchecked(n, cells))
}

/// Number of length-2 cycles of every row permutation `tau_{i,j}`, `i < j`.
pub fn count_two_cycles(l: &LatinSquare) -> u64 {
    let n = l.order();
    let mut total = 0;
    let mut map = vec![0u8; n];
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                map[l.get(i, k) as usize] = l.get(j, k);
            }
            total += (0..n)
                .filter(|&s| {
                    let t = map[s] as usize;
                    s < t && map[t] as usize == s
                })
                .count() as u64;
        }
    }
    total
}
