//! Subsquare detection and enumeration.

use thiserror::Error;

use crate::cycles::{count_two_cycles, cycles_between, Axis};
use crate::square::{bits, low_mask, LatinSquare, SubsquareLocation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsquareError {
    #[error("row set has {rows} elements but column set has {cols}")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("subsquare order {m} is outside 1..={n}")]
    Order { m: usize, n: usize },
}

/// Number of intercalates (order-2 subsquares).
pub fn count_intercalates(l: &LatinSquare) -> u64 {
    count_two_cycles(l)
}

/// Symbol set of `L[R, C]` when that submatrix is a Latin square.
pub fn is_subsquare(l: &LatinSquare, rows: u64, cols: u64) -> Result<Option<u64>, SubsquareError> {
    let (nr, nc) = (rows.count_ones() as usize, cols.count_ones() as usize);
    if nr != nc {
        return Err(SubsquareError::ShapeMismatch { rows: nr, cols: nc });
    }
    let mut syms = 0u64;
    for r in bits(rows) {
        for c in bits(cols) {
            syms |= 1 << l.get(r, c);
        }
        if syms.count_ones() as usize > nr {
            return Ok(None);
        }
    }
    Ok(Some(syms))
}

/// All order-`m` subsquares, each reported once, sorted.
///
/// For a seed row `r0` and second row `r1`, the columns of a subsquare
/// through both rows are a union of cycles of `tau_{r0,r1}`. Each such union
/// of size `m` fixes the symbol set, which in turn fixes the candidate rows.
/// A location is kept only when `r0 < r1` are its two smallest rows.
pub fn enumerate_subsquares(
    l: &LatinSquare,
    m: usize,
) -> Result<Vec<SubsquareLocation>, SubsquareError> {
    let n = l.order();
    if m == 0 || m > n {
        return Err(SubsquareError::Order { m, n });
    }
    let mut out = Vec::new();
    if m == 1 {
        for r in 0..n {
            for c in 0..n {
                out.push(SubsquareLocation {
                    rows: 1 << r,
                    cols: 1 << c,
                    symbols: 1 << l.get(r, c),
                });
            }
        }
        return Ok(out);
    }
    if m == n {
        let all = low_mask(n);
        out.push(SubsquareLocation {
            rows: all,
            cols: all,
            symbols: all,
        });
        return Ok(out);
    }
    if 2 * m > n {
        return Ok(out);
    }
    for r0 in 0..n {
        for r1 in r0 + 1..n {
            let hits: Vec<u64> = cycles_between(l, Axis::Row, r0, r1)
                .expect("distinct rows")
                .into_iter()
                .map(|c| c.hit)
                .filter(|h| h.count_ones() as usize <= m)
                .collect();
            let mut stack = vec![(0usize, 0u64)];
            while let Some((next, cols)) = stack.pop() {
                let size = cols.count_ones() as usize;
                if size == m {
                    if let Some(loc) = complete_location(l, r0, r1, cols, m) {
                        out.push(loc);
                    }
                    continue;
                }
                for (k, &h) in hits.iter().enumerate().skip(next) {
                    if size + h.count_ones() as usize <= m {
                        stack.push((k + 1, cols | h));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn complete_location(
    l: &LatinSquare,
    r0: usize,
    r1: usize,
    cols: u64,
    m: usize,
) -> Option<SubsquareLocation> {
    let symbols = bits(cols).fold(0u64, |s, c| s | 1 << l.get(r0, c));
    let mut rows = 0u64;
    for r in 0..l.order() {
        if bits(cols).all(|c| symbols >> l.get(r, c) & 1 == 1) {
            rows |= 1 << r;
        }
    }
    if rows.count_ones() as usize != m {
        return None;
    }
    // the two smallest rows must be the seed pair
    let first = rows.trailing_zeros() as usize;
    let second = (rows & (rows - 1)).trailing_zeros() as usize;
    (first == r0 && second == r1).then_some(SubsquareLocation {
        rows,
        cols,
        symbols,
    })
}

/// Subsquare counts for every order `1..=n`.
pub fn subsquare_profile(l: &LatinSquare) -> Vec<(usize, usize)> {
    (1..=l.order())
        .map(|m| (m, enumerate_subsquares(l, m).expect("order in range").len()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::fixtures::worked_square;

    /// Two disjoint cyclic order-3 blocks on `{0,1,2}` and `{3,4,5}`.
    fn block_square() -> LatinSquare {
        let mut cells = vec![0u8; 36];
        for r in 0..6 {
            for c in 0..6 {
                let (br, bc) = (r / 3, c / 3);
                let base = if br == bc { 0 } else { 3 };
                cells[r * 6 + c] = (base + (r + c) % 3) as u8;
            }
        }
        LatinSquare::from_cells(6, cells).unwrap()
    }

    #[test]
    fn trivial_orders() {
        let l = worked_square();
        assert_eq!(enumerate_subsquares(&l, 1).unwrap().len(), 36);
        assert_eq!(enumerate_subsquares(&l, 6).unwrap().len(), 1);
        assert!(enumerate_subsquares(&l, 4).unwrap().is_empty());
        assert!(enumerate_subsquares(&l, 0).is_err());
        assert_eq!(is_subsquare(&l, 0b111111, 0b111111).unwrap(), Some(0b111111));
        assert_eq!(is_subsquare(&l, 1 << 2, 1 << 4).unwrap(), Some(1 << l.get(2, 4)));
    }

    #[test]
    fn worked_square_corner_is_not_a_subsquare() {
        assert_eq!(is_subsquare(&worked_square(), 0b111, 0b111).unwrap(), None);
        assert!(matches!(
            is_subsquare(&worked_square(), 0b11, 0b111),
            Err(SubsquareError::ShapeMismatch { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn klein_group_intercalates() {
        let l = LatinSquare::elementary_abelian(4);
        assert_eq!(enumerate_subsquares(&l, 2).unwrap().len(), 12);
        assert_eq!(count_intercalates(&l), 12);
    }

    #[test]
    fn block_square_contains_corner_block() {
        let l = block_square();
        let found = enumerate_subsquares(&l, 3).unwrap();
        assert!(found.contains(&SubsquareLocation {
            rows: 0b111,
            cols: 0b111,
            symbols: 0b111
        }));
        for loc in &found {
            assert_eq!(is_subsquare(&l, loc.rows, loc.cols).unwrap(), Some(loc.symbols));
        }
    }
}
