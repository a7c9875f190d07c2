//! Hill climbing on single arc flips, minimising the number of transitive
//! k-subsets.
//!
//! Each restart starts from a random tournament and repeatedly scans all pairs
//! in a freshly shuffled order, taking every flip that strictly lowers the
//! count (first improvement). A flip only changes k-subsets through the
//! flipped pair, so a move is scored by recounting the transitive k-subsets
//! containing both endpoints before and after. A restart stops at a local
//! minimum or when its evaluation budget is spent.
//!
//! Restart `r` is seeded with `splitmix64(seed + r·φ)` (φ the 64-bit golden
//! ratio constant), so restarts are independent of scheduling and the best
//! restart is the minimum count, ties going to the lower index.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::{count_transitive, count_transitive_through};
use crate::error::{Error, Result};
use crate::rational::{binomial_u128, ratio};
use crate::tournament::Tournament;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Move evaluations allowed per restart.
    pub step_budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub restart: usize,
    /// Number of move evaluations made so far in this restart.
    pub step: u64,
    pub density: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub best: Tournament,
    pub best_count: u128,
    pub best_density: BigRational,
    pub best_restart: usize,
    /// Starting point and every accepted move of every restart.
    pub trace: Vec<TracePoint>,
    /// Final density of each restart.
    pub restart_densities: Vec<BigRational>,
    pub params: SearchParams,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Restart {
    best: Tournament,
    count: u128,
    trace: Vec<(u64, u128)>,
}

fn climb(k: usize, n: usize, seed: u64, budget: u64) -> Restart {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tournament::from_fn(n, |_, _| rng.gen::<bool>());
    let mut count: u128 = count_transitive(&t, k).try_into().expect("fits in u128");
    let mut trace = vec![(0, count)];
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut evals = 0u64;
    'outer: loop {
        pairs.shuffle(&mut rng);
        let mut improved = false;
        for &(a, b) in &pairs {
            if evals >= budget {
                break 'outer;
            }
            evals += 1;
            let (u, v) = if t.beats(a, b) { (a, b) } else { (b, a) };
            let before = count_transitive_through(&t, k, u, v).expect("valid pair");
            t.flip_in_place(u, v).expect("arc exists");
            let after = count_transitive_through(&t, k, u, v).expect("valid pair");
            if after < before {
                count = count - before + after;
                trace.push((evals, count));
                improved = true;
            } else {
                t.flip_in_place(v, u).expect("arc was just flipped");
            }
        }
        if !improved {
            break;
        }
    }
    Restart { best: t, count, trace }
}

/// Searches for a tournament on `n` vertices with few transitive k-subsets.
pub fn minimize_density(
    k: usize,
    n: usize,
    seed: u64,
    restarts: usize,
    step_budget: u64,
) -> Result<SearchResult> {
    let params = SearchParams { k, n, seed, restarts, step_budget };
    if !(3..=5).contains(&k) {
        return Err(Error::BadParameter(format!("k must lie in 3..=5, got {k}")));
    }
    if n < k {
        return Err(Error::BadParameter(format!("n = {n} is smaller than k = {k}")));
    }
    if restarts == 0 || step_budget == 0 {
        return Err(Error::BadParameter("restarts and step budget must be positive".into()));
    }
    let runs: Vec<Restart> = (0..restarts)
        .into_par_iter()
        .map(|r| climb(k, n, splitmix64(seed.wrapping_add((r as u64).wrapping_mul(GOLDEN))), step_budget))
        .collect();
    let total = binomial_u128(n, k);
    let (best_restart, best_run) = runs
        .iter()
        .enumerate()
        .min_by_key(|(i, run)| (run.count, *i))
        .expect("at least one restart");
    let trace = runs
        .iter()
        .enumerate()
        .flat_map(|(r, run)| {
            run.trace.iter().map(move |&(step, c)| TracePoint { restart: r, step, density: ratio(c, total) })
        })
        .collect();
    Ok(SearchResult {
        best: best_run.best.clone(),
        best_count: best_run.count,
        best_density: ratio(best_run.count, total),
        best_restart,
        trace,
        restart_densities: runs.iter().map(|run| ratio(run.count, total)).collect(),
        params,
    })
}
