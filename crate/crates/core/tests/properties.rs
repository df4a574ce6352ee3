mod common;

use common::scrambled_square;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subsq::cycles::{count_two_cycles, cycles_between};
use subsq::enumerate::count_delta;
use subsq::square::parse_squares;
use subsq::verify::verify_bound_identity;
use subsq::{
    count_constrained, count_intercalates, enumerate_subsquares, extract_cycle, switch_cycle, Axis, BigCount,
    ConstraintSpec, EnumerateOptions, LatinSquare, PartialSquare, PrefixCellSet, Ratio, RoleMap,
};

fn square(n: usize, seed: u64) -> LatinSquare {
    scrambled_square(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn axis(k: usize) -> Axis {
    Axis::ALL[k % 3]
}

fn subsquare_total(l: &LatinSquare) -> usize {
    (1..=l.order()).map(|m| enumerate_subsquares(l, m).unwrap().len()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switch_keeps_latin_and_undoes_itself(
        n in 2usize..=16, seed: u64, k in 0usize..3, i in 0usize..16, d in 1usize..16, c in 0usize..16,
    ) {
        let l = square(n, seed);
        let (i, j, c) = (i % n, (i + d % (n - 1).max(1)) % n, c % n);
        prop_assume!(i != j);
        let cyc = extract_cycle(&l, axis(k), i, j, c).unwrap();
        let once = switch_cycle(&l, &cyc).unwrap();
        prop_assert!(once.is_latin());
        let back = extract_cycle(&once, axis(k), i, j, c).unwrap();
        prop_assert_eq!(back.hit, cyc.hit);
        prop_assert_eq!(switch_cycle(&once, &back).unwrap(), l);
    }

    #[test]
    fn other_axes_switch_through_conjugation(n in 2usize..=10, seed: u64, i in 0usize..10, d in 1usize..10, c in 0usize..10) {
        let l = square(n, seed);
        let (i, j, c) = (i % n, (i + d % (n - 1).max(1)) % n, c % n);
        prop_assume!(i != j);
        for (ax, map) in [(Axis::Column, RoleMap::TRANSPOSE), (Axis::Symbol, RoleMap::ROW_SYMBOL)] {
            let direct = switch_cycle(&l, &extract_cycle(&l, ax, i, j, c).unwrap()).unwrap();
            let conj = l.conjugate(map);
            let via = switch_cycle(&conj, &extract_cycle(&conj, Axis::Row, i, j, c).unwrap()).unwrap();
            prop_assert_eq!(via.conjugate(map.inverse()), direct);
        }
    }

    #[test]
    fn row_cycles_partition_two_rows(n in 2usize..=12, seed: u64, i in 0usize..12, d in 1usize..12) {
        let l = square(n, seed);
        let (i, j) = (i % n, (i + d % (n - 1).max(1)) % n);
        prop_assume!(i != j);
        let cycles = cycles_between(&l, Axis::Row, i, j).unwrap();
        let mut entries: Vec<_> = cycles.iter().flat_map(|c| c.entries.iter().copied()).collect();
        entries.sort_unstable();
        let mut want: Vec<_> = l.entries().filter(|e| e[0] == i || e[0] == j).collect();
        want.sort_unstable();
        prop_assert_eq!(entries, want);
        let union = cycles.iter().fold(0u64, |acc, c| {
            assert_eq!(acc & c.hit, 0);
            acc | c.hit
        });
        prop_assert_eq!(union, subsq::square::low_mask(n));
    }

    #[test]
    fn conjugation_round_trips(n in 1usize..=10, seed: u64) {
        let l = square(n, seed);
        for map in RoleMap::all() {
            let c = l.conjugate(map);
            prop_assert!(c.is_latin());
            prop_assert_eq!(c.conjugate(map.inverse()), l.clone());
        }
    }

    #[test]
    fn text_round_trips(n in 1usize..=12, seed: u64) {
        let l = square(n, seed);
        let text = l.to_text();
        let back = parse_squares(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].to_text(), text);
        prop_assert_eq!(&back[0], &l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intercalates_are_two_cycles(n in 2usize..=12, seed: u64) {
        let l = square(n, seed);
        let k = count_intercalates(&l);
        prop_assert_eq!(k, count_two_cycles(&l));
        prop_assert_eq!(k as usize, enumerate_subsquares(&l, 2).unwrap().len());
    }

    #[test]
    fn subsquare_counts_survive_relabelling(n in 1usize..=8, seed: u64, perm_seed: u64) {
        use rand::seq::SliceRandom;
        let l = square(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        let mut p = || {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut rng);
            v
        };
        let (a, b, c) = (p(), p(), p());
        let base = subsquare_total(&l);
        prop_assert_eq!(subsquare_total(&l.relabel(&a, &b, &c)), base);
        for map in RoleMap::all() {
            prop_assert_eq!(subsquare_total(&l.conjugate(map)), base);
        }
    }

    #[test]
    fn no_proper_subsquares_above_half(n in 3usize..=9, seed: u64) {
        let l = square(n, seed);
        for m in n / 2 + 1..n {
            prop_assert!(enumerate_subsquares(&l, m).unwrap().is_empty());
        }
    }

    #[test]
    fn row_permutation_keeps_fibre_size(seed: u64, perm_seed: u64) {
        use rand::{seq::SliceRandom, Rng};
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        let l = square(5, seed);
        let mut p = PartialSquare::empty(5);
        for _ in 0..rng.random_range(1..=6) {
            let (r, c) = (rng.random_range(0..5), rng.random_range(0..5));
            p.set(r, c, l.get(r, c) as usize).unwrap();
        }
        let mut rows: Vec<usize> = (0..5).collect();
        rows.shuffle(&mut rng);
        let opts = EnumerateOptions::default();
        let a = count_constrained(&ConstraintSpec::containing(&p), &opts).unwrap();
        let b = count_constrained(&ConstraintSpec::containing(&p.permute_rows(&rows)), &opts).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn bound_identity_up_to_32() {
    let r = verify_bound_identity(32);
    assert!(r.pass, "{r}");
}

#[test]
fn chain_rule_telescopes() {
    let opts = EnumerateOptions::default();
    for (n, m) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        let counts: Vec<BigCount> = (0..=m * m).map(|i| count_delta(n, m, i, &opts).unwrap()).collect();
        let mut product = Ratio::one();
        for w in counts.windows(2) {
            assert!(!w[1].is_zero());
            let step = w[1].ratio(&w[0]);
            assert!(step > Ratio::zero() && step <= Ratio::one(), "({n},{m}) step {step}");
            product = product * step;
        }
        assert_eq!(product, counts[m * m].ratio(&counts[0]));
    }
}

#[test]
fn first_cell_symbols_partition_the_count() {
    let opts = EnumerateOptions::default();
    for n in 1..=5 {
        let total: BigCount = (0..n)
            .map(|s| {
                let mut spec = ConstraintSpec::new(n).unwrap();
                spec.fix(0, 0, s).unwrap();
                count_constrained(&spec, &opts).unwrap()
            })
            .sum();
        assert_eq!(total, count_constrained(&ConstraintSpec::new(n).unwrap(), &opts).unwrap());
    }
}

/// Every partial filling of the first `i` corner cells with symbols below `m`.
fn prefix_fillings(n: usize, m: usize, i: usize) -> Vec<PartialSquare> {
    let cells: Vec<_> = PrefixCellSet::new(m, i).unwrap().cells().collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, PartialSquare::with_bound(n, m).unwrap())];
    while let Some((k, p)) = stack.pop() {
        if k == cells.len() {
            out.push(p);
            continue;
        }
        let (r, c) = cells[k];
        for s in 0..m {
            let mut q = p.clone();
            if q.set(r, c, s).is_ok() {
                stack.push((k + 1, q));
            }
        }
    }
    out
}

#[test]
fn last_block_row_fibres_are_divisible() {
    let opts = EnumerateOptions::default();
    for (n, m) in [(4, 2), (5, 2), (6, 3)] {
        let mut total = BigCount::zero();
        for j in 1..=m {
            let i = m * m - m + j;
            let sum: BigCount = prefix_fillings(n, m, i)
                .iter()
                .map(|p| {
                    let size = count_constrained(&ConstraintSpec::containing(p), &opts).unwrap();
                    assert!(BigCount::from(j as u64).divides(&size), "({n},{m}) i = {i}: {size}");
                    size
                })
                .sum();
            assert_eq!(sum, count_delta(n, m, i, &opts).unwrap());
            total = sum;
        }
        let blocks = prefix_fillings(n, m, m * m);
        let sizes: Vec<_> =
            blocks.iter().map(|p| count_constrained(&ConstraintSpec::containing(p), &opts).unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] == w[1]), "({n},{m}) corner fibres differ");
        assert_eq!(&sizes[0] * blocks.len() as u64, total);
    }
}
