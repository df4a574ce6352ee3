//! Approximately uniform Latin squares from the +/-1 incidence-cube chain.
//!
//! A Latin square of order `n` is a 0/1 cube with every axis-aligned line
//! summing to one. Each move adds one to four cells and subtracts one from
//! four others across a 2x2x2 subcube, which keeps every line sum intact and
//! may leave a single cell at -1 (an improper cube). Improper cubes are
//! stepped through but never emitted.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`). A run with
//! master seed `s` draws its samples in fixed-size chunks; chunk `k` is an
//! independent chain seeded with `s` and stream number `k`, so the output
//! does not depend on how many workers process the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::square::LatinSquare;

/// Samples drawn from one chain before the next chunk starts a fresh one.
pub const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub order: usize,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
}

impl SamplerConfig {
    /// Burn-in `10 n^3` and thinning `n^3` steps.
    pub fn new(order: usize, seed: u64) -> Self {
        let cube = (order as u64).pow(3);
        Self {
            order,
            burn_in: 10 * cube,
            thin: cube.max(1),
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_thin(mut self, thin: u64) -> Self {
        self.thin = thin.max(1);
        self
    }
}

/// A 0/1 cube with line sums one and at most one cell equal to -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceCube {
    n: usize,
    values: Vec<i8>,
    /// For each axis, the positions holding one on every line along it.
    ones: [Vec<u64>; 3],
    improper: Option<[usize; 3]>,
}

impl IncidenceCube {
    pub fn from_square(l: &LatinSquare) -> Self {
        let n = l.order();
        let mut cube = Self {
            n,
            values: vec![0i8; n * n * n],
            ones: std::array::from_fn(|_| vec![0u64; n * n]),
            improper: None,
        };
        for [r, c, s] in l.entries() {
            cube.add([r, c, s], 1);
        }
        cube
    }

    /// Index of the line through `x` along `axis` in `self.ones[axis]`.
    #[inline]
    fn line(&self, axis: usize, x: [usize; 3]) -> usize {
        let (a, b) = match axis {
            0 => (x[1], x[2]),
            1 => (x[0], x[2]),
            _ => (x[0], x[1]),
        };
        a * self.n + b
    }

    #[inline]
    fn add(&mut self, x: [usize; 3], delta: i8) {
        let k = self.idx(x[0], x[1], x[2]);
        let old = self.values[k];
        let new = old + delta;
        self.values[k] = new;
        if old == 1 || new == 1 {
            for axis in 0..3 {
                let line = self.line(axis, x);
                self.ones[axis][line] ^= 1 << x[axis];
            }
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize, s: usize) -> i8 {
        self.values[self.idx(r, c, s)]
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    pub fn improper_cell(&self) -> Option<[usize; 3]> {
        self.improper
    }

    /// Positions `k` along the line through `x` on `axis` whose value is
    /// one; there are one or two of them.
    fn ones(&self, axis: usize, x: [usize; 3]) -> ([usize; 2], usize) {
        let mask = self.ones[axis][self.line(axis, x)];
        let first = mask.trailing_zeros() as usize;
        let rest = mask & mask.wrapping_sub(1);
        ([first, rest.trailing_zeros() as usize], mask.count_ones() as usize)
    }

    /// Every axis-aligned line sums to one.
    pub fn line_sums_ok(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let mut sums = [0i32; 3];
                for k in 0..n {
                    sums[0] += self.get(k, a, b) as i32;
                    sums[1] += self.get(a, k, b) as i32;
                    sums[2] += self.get(a, b, k) as i32;
                }
                if sums != [1, 1, 1] {
                    return false;
                }
            }
        }
        for r in 0..n {
            for c in 0..n {
                for s in 0..n {
                    let one = self.get(r, c, s) == 1;
                    for axis in 0..3 {
                        let x = [r, c, s];
                        if (self.ones[axis][self.line(axis, x)] >> x[axis] & 1 == 1) != one {
                            return false;
                        }
                    }
                }
            }
        }
        let negatives = self.values.iter().filter(|&&v| v == -1).count();
        let in_range = self.values.iter().all(|&v| (-1..=1).contains(&v));
        in_range && negatives == usize::from(self.improper.is_some())
    }

    /// The Latin square of a proper cube.
    pub fn to_square(&self) -> Option<LatinSquare> {
        if !self.is_proper() {
            return None;
        }
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[r * n + c] = self.ones[2][r * n + c].trailing_zeros() as u8;
            }
        }
        LatinSquare::from_cells(n, cells).ok()
    }

    /// One chain move.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.n;
        if n < 2 {
            return;
        }
        // without improper states the order-2 chain alternates, so hold half the time
        if n == 2 && rng.random_bool(0.5) {
            return;
        }
        let (r0, c0, s0, r1, c1, s1);
        match self.improper {
            None => {
                r0 = rng.random_range(0..n);
                c0 = rng.random_range(0..n);
                let (cur, _) = self.ones(2, [r0, c0, 0]);
                let cur = cur[0];
                // uniform over the n - 1 symbols other than the current one
                let mut s = rng.random_range(0..n - 1);
                if s >= cur {
                    s += 1;
                }
                s0 = s;
                r1 = self.ones(0, [0, c0, s0]).0[0];
                c1 = self.ones(1, [r0, 0, s0]).0[0];
                s1 = cur;
            }
            Some([r, c, s]) => {
                r0 = r;
                c0 = c;
                s0 = s;
                let coins: u32 = rng.random();
                r1 = self.ones(0, [r, c, s]).0[(coins & 1) as usize];
                c1 = self.ones(1, [r, c, s]).0[(coins >> 1 & 1) as usize];
                s1 = self.ones(2, [r, c, s]).0[(coins >> 2 & 1) as usize];
            }
        }
        for x in [[r0, c0, s0], [r0, c1, s1], [r1, c0, s1], [r1, c1, s0]] {
            self.add(x, 1);
        }
        for x in [[r0, c1, s0], [r1, c0, s0], [r0, c0, s1], [r1, c1, s1]] {
            self.add(x, -1);
        }
        self.improper = (self.get(r1, c1, s1) == -1).then_some([r1, c1, s1]);
    }
}

/// One chain emitting proper squares.
pub struct Sampler {
    cube: IncidenceCube,
    rng: ChaCha8Rng,
    thin: u64,
    burn_in: u64,
    burned: bool,
}

impl Sampler {
    /// Chain for stream `stream` of the configured seed, started at the
    /// cyclic square.
    pub fn new(config: &SamplerConfig, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        Self {
            cube: IncidenceCube::from_square(&LatinSquare::cyclic(config.order)),
            rng,
            thin: config.thin.max(1),
            burn_in: config.burn_in,
            burned: false,
        }
    }

    pub fn cube(&self) -> &IncidenceCube {
        &self.cube
    }

    /// Next proper square. The thinning countdown only advances on steps
    /// that end in a proper cube.
    pub fn next_square(&mut self) -> LatinSquare {
        if !self.burned {
            for _ in 0..self.burn_in {
                self.cube.step(&mut self.rng);
            }
            self.burned = true;
            if self.cube.is_proper() {
                return self.cube.to_square().expect("proper cube");
            }
        }
        let mut left = self.thin;
        loop {
            self.cube.step(&mut self.rng);
            if self.cube.is_proper() {
                left -= 1;
                if left == 0 {
                    return self.cube.to_square().expect("proper cube");
                }
            }
        }
    }
}

/// A single square: the first emission of stream 0.
pub fn sample_uniform(config: &SamplerConfig) -> LatinSquare {
    Sampler::new(config, 0).next_square()
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

fn chunk_sizes(count: usize) -> Vec<(u64, usize)> {
    (0..count.div_ceil(CHUNK))
        .map(|k| (k as u64, CHUNK.min(count - k * CHUNK)))
        .collect()
}

/// `count` squares in a worker-independent order.
pub fn sample_many(config: &SamplerConfig, count: usize, workers: usize) -> Vec<LatinSquare> {
    let chunks = chunk_sizes(count);
    let run = |&(stream, len): &(u64, usize)| {
        let mut s = Sampler::new(config, stream);
        (0..len).map(|_| s.next_square()).collect::<Vec<_>>()
    };
    let parts: Vec<Vec<LatinSquare>> = if workers <= 1 {
        chunks.iter().map(run).collect()
    } else {
        with_pool(workers, || chunks.par_iter().map(run).collect())
    };
    parts.into_iter().flatten().collect()
}

/// Fold `count` samples without storing them. `merge` must be associative
/// and commutative.
pub fn fold_samples<T, I, F, M>(
    config: &SamplerConfig,
    count: usize,
    workers: usize,
    init: I,
    fold: F,
    merge: M,
) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &LatinSquare) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunks = chunk_sizes(count);
    let run = |&(stream, len): &(u64, usize)| {
        let mut s = Sampler::new(config, stream);
        let mut acc = init();
        for _ in 0..len {
            fold(&mut acc, &s.next_square());
        }
        acc
    };
    if workers <= 1 {
        chunks.iter().map(run).fold(init(), &merge)
    } else {
        with_pool(workers, || chunks.par_iter().map(run).reduce(&init, &merge))
    }
}
