//! Reference implementations used only by the tests.

#![allow(dead_code)]

use rand::Rng;
use subsq::enumerate::{ConstraintSpec, PrefixCellSet};
use subsq::square::LatinSquare;

/// A constraint set described independently of the counting kernel.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub n: usize,
    pub fixed: Vec<(usize, usize, usize)>,
    /// Block order and prefix length of a symbol restriction.
    pub restrict: Option<(usize, usize)>,
}

impl RandomSpec {
    pub fn generate<R: Rng>(rng: &mut R, max_n: usize) -> Self {
        let n = rng.random_range(1..=max_n);
        let k = rng.random_range(0..=n.min(4));
        let fixed = (0..k)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
            .collect();
        let restrict = rng.random_bool(0.5).then(|| {
            let m = rng.random_range(1..=n);
            (m, rng.random_range(0..=m * m))
        });
        Self { n, fixed, restrict }
    }

    pub fn to_spec(&self) -> ConstraintSpec {
        let mut spec = ConstraintSpec::new(self.n).unwrap();
        for &(r, c, s) in &self.fixed {
            spec.fix(r, c, s).unwrap();
        }
        if let Some((m, i)) = self.restrict {
            spec.restrict(PrefixCellSet::new(m, i).unwrap().cells(), m).unwrap();
        }
        spec
    }

    /// Symbol allowed in a cell. A later fix of the same cell wins.
    fn allows(&self, r: usize, c: usize, s: usize) -> bool {
        if let Some(&(_, _, f)) = self.fixed.iter().rev().find(|&&(fr, fc, _)| fr == r && fc == c) {
            if f != s {
                return false;
            }
        }
        match self.restrict {
            Some((m, i)) if r < m && c < m && r * m + c < i => s < m,
            _ => true,
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every square satisfying `spec`, built row by row from whole
/// permutations with a plain column check.
pub fn oracle_squares(spec: &RandomSpec) -> Vec<LatinSquare> {
    let n = spec.n;
    let perms = permutations(n);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    fn go(
        spec: &RandomSpec,
        perms: &[Vec<usize>],
        rows: &mut Vec<Vec<usize>>,
        out: &mut Vec<LatinSquare>,
    ) {
        let n = spec.n;
        let r = rows.len();
        if r == n {
            let cells = rows.iter().flatten().map(|&s| s as u8).collect();
            out.push(LatinSquare::from_cells(n, cells).unwrap());
            return;
        }
        for p in perms {
            let ok = (0..n).all(|c| spec.allows(r, c, p[c]) && rows.iter().all(|row| row[c] != p[c]));
            if ok {
                rows.push(p.clone());
                go(spec, perms, rows, out);
                rows.pop();
            }
        }
    }
    go(spec, &perms, &mut rows, &mut out);
    out
}

pub fn oracle_count(spec: &RandomSpec) -> u64 {
    oracle_squares(spec).len() as u64
}

/// Subsquares of order `m` by checking every pair of `m`-subsets.
pub fn brute_force_subsquares(l: &LatinSquare, m: usize) -> usize {
    let n = l.order();
    let subsets: Vec<u64> = (0u64..1 << n).filter(|s| s.count_ones() as usize == m).collect();
    let mut found = 0;
    for &rows in &subsets {
        for &cols in &subsets {
            let mut syms = 0u64;
            for r in (0..n).filter(|r| rows >> r & 1 == 1) {
                for c in (0..n).filter(|c| cols >> c & 1 == 1) {
                    syms |= 1 << l.get(r, c);
                }
            }
            if syms.count_ones() as usize == m {
                found += 1;
            }
        }
    }
    found
}

/// A random Latin square of order `n`: the cyclic square with rows,
/// columns and symbols permuted, then a number of random row-cycle
/// switches.
pub fn scrambled_square<R: Rng>(rng: &mut R, n: usize) -> LatinSquare {
    use rand::seq::SliceRandom;
    let perm = |rng: &mut R| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    };
    let (a, b, c) = (perm(rng), perm(rng), perm(rng));
    let mut l = LatinSquare::cyclic(n).relabel(&a, &b, &c);
    if n >= 2 {
        for _ in 0..3 * n {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let cyc =
                subsq::cycles::extract_cycle(&l, subsq::cycles::Axis::Row, i, j, rng.random_range(0..n))
                    .unwrap();
            l = subsq::cycles::switch_cycle(&l, &cyc).unwrap();
        }
    }
    l
}
