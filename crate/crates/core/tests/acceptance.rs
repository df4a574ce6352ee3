//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p subsq-core --test acceptance`.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{oracle_count, RandomSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use subsq::enumerate::{count_delta, count_latin_squares};
use subsq::sampler::{fold_samples, sample_many, SamplerConfig};
use subsq::stats::{estimate_em, exact_em, exact_em_by_enumeration, exact_em_by_symmetry};
use subsq::verify::{
    chain_schedule, theorem_bounds, verify_bound_identity, verify_boundary, verify_chain_steps, verify_e3,
    verify_em_paths, verify_prelim, verify_setnrc, verify_theorem, Report, Variant, VerifyOptions,
};
use subsq::{
    count_constrained, enumerate_constrained, extract_cycle, switch_cycle, Axis, BigCount, ConstraintSpec,
    EnumerateOptions, LatinSquare, PartialSquare, Ratio,
};

type Outcome = Result<String, String>;

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn opts() -> VerifyOptions {
    VerifyOptions::with_workers(workers())
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[Report]) -> Result<(), String> {
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(r.to_string()),
        None => Ok(()),
    }
}

fn setnrc() -> Outcome {
    let mut reports = Vec::new();
    for (n, m) in [(5, 2), (6, 2), (6, 3)] {
        for alpha in 1..=m {
            for v in [Variant::Row, Variant::Column] {
                let r = verify_setnrc(n, m, alpha, v, &opts()).map_err(|e| e.to_string())?;
                let want = Ratio::new(alpha, n + alpha - m);
                require(r.lhs == want, || format!("({n},{m}) alpha {alpha} {}: {} != {want}", v.name(), r.lhs))?;
                reports.push(r);
            }
        }
    }
    all_pass(&reports)?;
    Ok(format!("{} instances equal alpha/(n+alpha-m)", reports.len()))
}

fn prelim() -> Outcome {
    let block = |n: usize, entries: &[(usize, usize, usize)]| {
        let mut p = PartialSquare::with_bound(n, 2).unwrap();
        for &(r, c, s) in entries {
            p.set(r, c, s).unwrap();
        }
        p
    };
    let mut cases = vec![(block(5, &[(0, 0, 0)]), 0, 0, 2, Ratio::one())];
    let b2 = block(5, &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]);
    for rp in 2..5 {
        cases.push((b2.clone(), 0, 0, rp, Ratio::new(1u64, 2u64)));
    }
    let m3 = chain_schedule(3).map_err(|e| e.to_string())?.prefix(6, 9).map_err(|e| e.to_string())?;
    for rp in 3..6 {
        cases.push((m3.clone(), 2, 2, rp, Ratio::new(1u64, 3u64)));
    }
    let mut reports = Vec::new();
    for (p, r, c, rp, want) in cases {
        let rep = verify_prelim(&p, r, c, rp, &opts()).map_err(|e| e.to_string())?;
        require(rep.lhs == want, || format!("{rep}: expected {want}"))?;
        reports.push(rep);
    }
    all_pass(&reports)?;
    Ok(format!("{} cases: 1, 1/2 (x3), 1/3 (x3); (k+1) divides |A|", reports.len()))
}

fn boundary() -> Outcome {
    let mut reports = Vec::new();
    for (n, m) in [(5, 2), (6, 2), (6, 3)] {
        for j in 1..=m {
            for v in [Variant::Row, Variant::Column] {
                reports.push(verify_boundary(n, m, j, v, &opts()).map_err(|e| e.to_string())?);
            }
        }
    }
    all_pass(&reports)?;
    Ok(format!("{} instances of (n-m)|D_i|/j <= |D_(i-1) \\ D_i|", reports.len()))
}

fn chain_steps() -> Outcome {
    let mut reports = verify_chain_steps(5, 2, &opts()).map_err(|e| e.to_string())?;
    reports.extend(verify_chain_steps(6, 3, &opts()).map_err(|e| e.to_string())?);
    all_pass(&reports)?;
    Ok(format!("{} step reports over the order-2 chain at n = 5 and order-3 chain at n = 6", reports.len()))
}

fn theorem() -> Outcome {
    let id = verify_bound_identity(32);
    all_pass(std::slice::from_ref(&id))?;
    let b = theorem_bounds(5, 2).map_err(|e| e.to_string())?;
    require(b.closed_form == Ratio::new(1u64, 100u64), || format!("bound at (5,2) is {}", b.closed_form))?;
    let eo = EnumerateOptions::with_workers(workers());
    let mut details = Vec::new();
    for (n, m) in [(5, 2), (6, 2), (6, 3)] {
        let rep = verify_theorem(n, m, &opts()).map_err(|e| e.to_string())?;
        all_pass(std::slice::from_ref(&rep))?;
        let pr = count_delta(n, m, m * m, &eo)
            .map_err(|e| e.to_string())?
            .ratio(&count_delta(n, m, 0, &eo).map_err(|e| e.to_string())?);
        let bound = theorem_bounds(n, m).map_err(|e| e.to_string())?.closed_form;
        require(pr <= bound, || format!("({n},{m}): {pr} > {bound}"))?;
        details.push(format!("({n},{m}) {pr} <= {bound}"));
    }
    Ok(format!("identity for n <= 32; {}", details.join(", ")))
}

fn e3_chain() -> Outcome {
    let rep = verify_e3(6, &opts()).map_err(|e| e.to_string())?;
    all_pass(std::slice::from_ref(&rep))?;
    let eo = EnumerateOptions::with_workers(workers());
    let e3 = exact_em(6, 3, &eo).map_err(|e| e.to_string())?;
    let bound = Ratio::new(8000u64 * 144, 19683u64);
    require(e3 <= bound, || format!("E_3(6) = {e3} > {bound}"))?;
    let a = exact_em_by_enumeration(5, 2, &eo).map_err(|e| e.to_string())?;
    let b = exact_em_by_symmetry(5, 2, &eo).map_err(|e| e.to_string())?;
    require(a == b, || format!("E_2(5) paths differ: {a} vs {b}"))?;
    let paths = verify_em_paths(5, 2, &opts()).map_err(|e| e.to_string())?;
    all_pass(std::slice::from_ref(&paths))?;
    Ok(format!("E_3(6) = {e3} <= {bound}; E_2(5) = {a} on both paths"))
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..200 {
        let rs = RandomSpec::generate(&mut rng, 5);
        let spec = rs.to_spec();
        let want = BigCount::from(oracle_count(&rs));
        for w in [1, 2, 8] {
            let got = count_constrained(&spec, &EnumerateOptions::with_workers(w)).map_err(|e| e.to_string())?;
            require(got == want, || format!("spec {k} ({rs:?}) with {w} workers: {got} != {want}"))?;
        }
    }
    for (n, want) in [(4, 576u64), (5, 161_280)] {
        for w in [1, 2, 8] {
            let got = count_latin_squares(n, &EnumerateOptions::with_workers(w)).map_err(|e| e.to_string())?;
            require(got == BigCount::from(want), || format!("order {n} with {w} workers: {got}"))?;
        }
    }
    Ok("200 random specs agree at 1, 2 and 8 workers; 576 and 161280".into())
}

fn switching() -> Outcome {
    const TRIALS: usize = 100_000;
    let orders: Vec<usize> = (4..=16).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    let mut failures = 0;
    for (idx, &n) in orders.iter().enumerate() {
        let count = (TRIALS - done) / (orders.len() - idx);
        done += count;
        let config = SamplerConfig::new(n, rng.random()).with_thin((n * n) as u64);
        for l in sample_many(&config, count, workers()) {
            let axis = Axis::ALL[rng.random_range(0..3)];
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let c = rng.random_range(0..n);
            let ok = l.is_latin()
                && extract_cycle(&l, axis, i, j, c).ok().and_then(|cyc| {
                    let once = switch_cycle(&l, &cyc).ok()?;
                    let back = extract_cycle(&once, axis, i, j, c).ok()?;
                    let twice = switch_cycle(&once, &back).ok()?;
                    Some(once.is_latin() && twice == l)
                }) == Some(true);
            failures += usize::from(!ok);
        }
    }
    require(done == TRIALS, || format!("ran {done} trials"))?;
    require(failures == 0, || format!("{failures} failures in {TRIALS} trials"))?;
    Ok(format!("{TRIALS} sampled squares and switches at orders 4..=16, zero failures"))
}

fn order4_key(l: &LatinSquare) -> u32 {
    l.cells().iter().fold(0u32, |k, &s| k << 2 | s as u32)
}

fn uniformity() -> Outcome {
    const PER_SQUARE: usize = 10_000;
    let mut index = HashMap::new();
    enumerate_constrained(&ConstraintSpec::new(4).unwrap(), &EnumerateOptions::default(), |l| {
        let next = index.len();
        index.insert(order4_key(l), next);
    })
    .map_err(|e| e.to_string())?;
    require(index.len() == 576, || format!("{} distinct order-4 squares", index.len()))?;
    let samples = 576 * PER_SQUARE;
    let (hist, invalid) = fold_samples(
        &SamplerConfig::new(4, 0xc0ffee),
        samples,
        workers(),
        || (vec![0u64; 576], 0u64),
        |acc, l| match index.get(&order4_key(l)) {
            Some(&k) if l.is_latin() => acc.0[k] += 1,
            _ => acc.1 += 1,
        },
        |mut a, b| {
            a.0.iter_mut().zip(&b.0).for_each(|(x, y)| *x += y);
            (a.0, a.1 + b.1)
        },
    );
    require(invalid == 0, || format!("{invalid} invalid samples"))?;
    let expected = PER_SQUARE as f64;
    let chi2: f64 = hist.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let p = ChiSquared::new(575.0).unwrap().sf(chi2);
    require((0.001..=0.999).contains(&p), || format!("chi-square {chi2:.2}, p = {p:.4}"))?;
    Ok(format!("{samples} samples, chi-square {chi2:.2} on 575 df, p = {p:.4}"))
}

fn statistics() -> Outcome {
    let eo = EnumerateOptions::with_workers(workers());
    let exact = exact_em(4, 2, &eo).map_err(|e| e.to_string())?.to_f64();
    let est = estimate_em(4, 2, 100_000, 99, workers()).map_err(|e| e.to_string())?;
    let dev = (est.mean - exact).abs();
    require(dev <= 3.0 * est.stderr, || {
        format!("E_2(4): {} vs exact {exact}, stderr {}", est.mean, est.stderr)
    })?;
    let big = estimate_em(16, 2, 10_000, 1616, workers()).map_err(|e| e.to_string())?;
    let ratio = big.mean / 64.0;
    require((0.75..=1.25).contains(&ratio), || format!("E_2(16)/64 = {ratio:.4}"))?;
    Ok(format!(
        "E_2(4) ~ {:.4} +- {:.4} (exact {exact}); E_2(16)/64 = {ratio:.4}",
        est.mean, est.stderr
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("new-line fraction equals alpha/(n+alpha-m)", setnrc),
        ("cycle-avoidance fraction equals 1/(k+1)", prelim),
        ("boundary-line switch inequality", boundary),
        ("chain step switch inequalities", chain_steps),
        ("corner probability bound", theorem),
        ("E_3(6) bound and E_2(5) paths", e3_chain),
        ("enumeration oracle agreement", oracle),
        ("switching preserves Latinness and is an involution", switching),
        ("order-4 sampler uniformity", uniformity),
        ("subsquare statistics", statistics),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {title} [{secs:.1}s]: {detail}", k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
