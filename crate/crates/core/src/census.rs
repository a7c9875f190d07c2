//! Induced sub-tournament census and per-arc flag statistics.
//!
//! Exact counts use three routes:
//!
//! * size 3: the score formula `#C3 = C(n,3) - Σ_v C(d+(v), 2)`;
//! * size 4: `W4` and `L4` copies are counted through the 3-cycles inside each
//!   out- and in-neighbourhood, `Tr4` by winner recursion and `R4` as the rest;
//! * transitive patterns of any size: winner recursion over out-neighbourhood
//!   bitsets;
//! * everything else: enumeration of all k-subsets in increasing order with an
//!   incrementally built encoding looked up in a class table.
//!
//! [`census_by_enumeration`] is kept public so the fast routes can be checked
//! against it.
//!
//! Runtime bounds for full exact density vectors are given by [`exact_bound`];
//! beyond them callers should switch to sampling.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{
    automorphism_count, class_table, flag_classes, key_of_order, pair_shift, tournament_code,
    CanonicalCode, MAX_CLASS_SIZE,
};
use crate::error::{Error, Result};
use crate::flag::FlagType;
use crate::rational::{binomial, binomial_u128, factorial, ratio, ratio_u};
use crate::tournament::{and_popcount, popcount, Bits, Tournament};

/// Largest host size for a full exact density vector of size `k`.
pub fn exact_bound(k: usize) -> usize {
    match k {
        0..=4 => 4096,
        5 => 100,
        6 => 40,
        _ => 30,
    }
}

/// A density, either exact over all subsets or estimated from `samples`
/// uniformly drawn subsets (then `value` is hits / samples).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub value: BigRational,
    pub samples: Option<u64>,
}

impl Density {
    pub fn exact(value: BigRational) -> Self {
        Density { value, samples: None }
    }

    pub fn is_exact(&self) -> bool {
        self.samples.is_none()
    }
}

fn check_pattern(k: usize, n: usize) -> Result<()> {
    if k > MAX_CLASS_SIZE {
        return Err(Error::TooLarge { size: k, bound: MAX_CLASS_SIZE });
    }
    if k > n {
        return Err(Error::PatternLargerThanHost { pattern: k, host: n });
    }
    Ok(())
}

/// Number of transitive `k`-subsets of `set`.
fn transitive_in(t: &Tournament, set: &[u64], k: usize) -> u128 {
    match k {
        0 => 1,
        1 => popcount(set) as u128,
        2 => binomial_u128(popcount(set) as usize, 2),
        3 => Bits::new(set)
            .map(|u| binomial_u128(and_popcount(set, t.out_row(u)) as usize, 2))
            .sum(),
        _ => {
            let mut sub = vec![0u64; set.len()];
            Bits::new(set)
                .map(|v| {
                    for ((s, a), b) in sub.iter_mut().zip(set).zip(t.out_row(v)) {
                        *s = a & b;
                    }
                    transitive_in(t, &sub, k - 1)
                })
                .sum()
        }
    }
}

/// Number of transitive `k`-subsets of `set` containing every vertex of `req`
/// (which must lie in `set`).
fn transitive_through(t: &Tournament, set: &[u64], k: usize, req: &[usize]) -> u128 {
    if req.len() > k {
        return 0;
    }
    if req.is_empty() {
        return transitive_in(t, set, k);
    }
    if req.len() == k {
        // At most two required vertices, always transitive.
        return 1;
    }
    let mut cand = set.to_vec();
    for &r in req {
        for (c, x) in cand.iter_mut().zip(t.in_row(r)) {
            *c &= x;
        }
    }
    let mut sub = vec![0u64; set.len()];
    let mut total = 0;
    for w in Bits::new(&cand) {
        for ((s, a), b) in sub.iter_mut().zip(set).zip(t.out_row(w)) {
            *s = a & b;
        }
        total += transitive_through(t, &sub, k - 1, req);
    }
    for (i, &r) in req.iter().enumerate() {
        if req.iter().all(|&o| o == r || t.beats(r, o)) {
            for ((s, a), b) in sub.iter_mut().zip(set).zip(t.out_row(r)) {
                *s = a & b;
            }
            let rest: Vec<usize> =
                req.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            total += transitive_through(t, &sub, k - 1, &rest);
        }
    }
    total
}

/// Number of transitive `k`-subsets of the whole tournament.
pub fn count_transitive(t: &Tournament, k: usize) -> BigUint {
    let full = t.full_set();
    if k <= 3 {
        return BigUint::from(transitive_in(t, &full, k));
    }
    let total: u128 = (0..t.n())
        .into_par_iter()
        .map(|v| {
            let sub: Vec<u64> = full.iter().zip(t.out_row(v)).map(|(a, b)| a & b).collect();
            transitive_in(t, &sub, k - 1)
        })
        .sum();
    BigUint::from(total)
}

/// Number of transitive `k`-subsets containing both `a` and `b`.
pub fn count_transitive_through(t: &Tournament, k: usize, a: usize, b: usize) -> Result<u128> {
    for x in [a, b] {
        if x >= t.n() {
            return Err(Error::OutOfRange { vertex: x, n: t.n() });
        }
    }
    if a == b {
        return Err(Error::BadParameter("need two distinct vertices".into()));
    }
    Ok(transitive_through(t, &t.full_set(), k, &[a, b]))
}

/// Cyclic triples inside `set`.
fn c3_in(t: &Tournament, set: &[u64]) -> u128 {
    let size = popcount(set) as usize;
    binomial_u128(size, 3) - transitive_in(t, set, 3)
}

/// `C(n,3) - Σ_v C(outdeg(v), 2)`.
pub fn count_c3_fast(t: &Tournament) -> BigUint {
    let tr: u128 = t.out_degrees().iter().map(|&d| binomial_u128(d, 2)).sum();
    BigUint::from(binomial_u128(t.n(), 3) - tr)
}

/// Counts per class of [`flag_classes`]`(Zero, k)` by enumerating every k-subset.
pub fn census_by_enumeration(t: &Tournament, k: usize) -> Result<Vec<u128>> {
    check_pattern(k, t.n())?;
    let table = class_table(FlagType::Zero, k)?;
    let classes = table.classes.len();
    if k == 0 {
        return Ok(vec![1]);
    }
    let n = t.n();
    fn walk(
        t: &Tournament,
        k: usize,
        chosen: &mut Vec<usize>,
        acc: u32,
        table: &crate::canon::ClassTable,
        counts: &mut [u128],
    ) {
        let depth = chosen.len();
        if depth == k {
            counts[table.class_of(acc).expect("complete table")] += 1;
            return;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        // Leave room for the remaining positions.
        for v in start..=t.n() - (k - depth) {
            let mut next = acc;
            for (i, &u) in chosen.iter().enumerate() {
                if t.beats(v, u) {
                    next |= 1 << pair_shift(k, i, depth);
                }
            }
            chosen.push(v);
            walk(t, k, chosen, next, table, counts);
            chosen.pop();
        }
    }
    let counts = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u128; classes];
            let mut chosen = vec![first];
            walk(t, k, &mut chosen, 0, &table, &mut counts);
            counts
        })
        .reduce(
            || vec![0u128; classes],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// Exact counts of every class of size `k`, using the fastest available route.
pub fn census(t: &Tournament, k: usize) -> Result<Vec<(CanonicalCode, BigUint)>> {
    check_pattern(k, t.n())?;
    let classes = flag_classes(FlagType::Zero, k)?;
    let counts: Vec<u128> = match k {
        0..=2 => vec![binomial_u128(t.n(), k)],
        3 => {
            let c3 = binomial_u128(t.n(), 3) - transitive_in(t, &t.full_set(), 3);
            classes.iter().map(|c| if c.key() == 0 { binomial_u128(t.n(), 3) - c3 } else { c3 }).collect()
        }
        4 => {
            let (w4, l4): (u128, u128) = (0..t.n())
                .into_par_iter()
                .map(|v| (c3_in(t, t.out_row(v)), c3_in(t, t.in_row(v))))
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            let tr4: u128 = count_transitive(t, 4).try_into().expect("fits in u128");
            let r4 = binomial_u128(t.n(), 4) - tr4 - w4 - l4;
            classes
                .iter()
                .map(|c| match c.name().as_str() {
                    "Tr4" => tr4,
                    "W4" => w4,
                    "L4" => l4,
                    _ => r4,
                })
                .collect()
        }
        _ => census_by_enumeration(t, k)?,
    };
    Ok(classes.iter().copied().zip(counts.into_iter().map(BigUint::from)).collect())
}

/// Number of k-subsets of `host` inducing a copy of `pattern`.
pub fn count_induced(pattern: &Tournament, host: &Tournament) -> Result<BigUint> {
    let k = pattern.n();
    check_pattern(k, host.n())?;
    if pattern.is_transitive() {
        return Ok(count_transitive(host, k));
    }
    let code = tournament_code(pattern)?;
    Ok(census(host, k)?
        .into_iter()
        .find(|(c, _)| *c == code)
        .map(|(_, count)| count)
        .unwrap_or_default())
}

/// Exact density `count_induced / C(n, k)`.
pub fn density(pattern: &Tournament, host: &Tournament) -> Result<Density> {
    let count = count_induced(pattern, host)?;
    Ok(Density::exact(ratio_u(count, binomial(host.n(), pattern.n()))))
}

/// Expected density in a uniformly random tournament: `k! / (|Aut| 2^C(k,2))`.
pub fn random_baseline(pattern: &Tournament) -> Result<BigRational> {
    let k = pattern.n();
    if k > MAX_CLASS_SIZE {
        return Err(Error::TooLarge { size: k, bound: MAX_CLASS_SIZE });
    }
    let aut = automorphism_count(pattern)?;
    let den = BigUint::from(aut) << (k * k.saturating_sub(1) / 2);
    Ok(ratio_u(factorial(k), den))
}

fn sample_keys(
    host: &Tournament,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<impl Iterator<Item = u32> + '_> {
    if samples == 0 {
        return Err(Error::BadParameter("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = host.n();
    Ok((0..samples).map(move |_| {
        let mut subset = rand::seq::index::sample(&mut rng, n, k).into_vec();
        subset.sort_unstable();
        key_of_order(host, &subset)
    }))
}

/// Fraction of `samples` uniform k-subsets inducing `pattern`. Each sample is
/// drawn without replacement; samples are independent.
pub fn sampled_density(
    pattern: &Tournament,
    host: &Tournament,
    samples: u64,
    seed: u64,
) -> Result<Density> {
    let k = pattern.n();
    check_pattern(k, host.n())?;
    let table = class_table(FlagType::Zero, k)?;
    let code = tournament_code(pattern)?;
    let target = table.classes.iter().position(|c| *c == code).expect("complete basis");
    let hits = sample_keys(host, k, samples, seed)?
        .filter(|&key| table.class_of(key) == Some(target))
        .count();
    Ok(Density { value: ratio(hits as u64, samples), samples: Some(samples) })
}

/// Densities of every isomorphism class of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityVector {
    pub size: usize,
    pub entries: BTreeMap<CanonicalCode, Density>,
}

impl DensityVector {
    /// Looks a class up by [`CanonicalCode::name`].
    pub fn get(&self, name: &str) -> Option<&Density> {
        self.entries.iter().find(|(c, _)| c.name() == name).map(|(_, d)| d)
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().map(|d| d.value.clone()).sum()
    }

    /// Largest `|density - random baseline|` over the classes.
    pub fn max_baseline_deviation(&self) -> Result<BigRational> {
        let mut worst = BigRational::zero();
        for (code, d) in &self.entries {
            let dev = (&d.value - random_baseline(&code.model())?).abs();
            if dev > worst {
                worst = dev;
            }
        }
        Ok(worst)
    }
}

/// Exact density of every class of size `k`; bounded by [`exact_bound`].
pub fn density_vector(host: &Tournament, k: usize) -> Result<DensityVector> {
    check_pattern(k, host.n())?;
    if host.n() > exact_bound(k) {
        return Err(Error::ExactBound { k, n: host.n(), bound: exact_bound(k) });
    }
    let total = binomial(host.n(), k);
    let entries = census(host, k)?
        .into_iter()
        .map(|(c, count)| (c, Density::exact(ratio_u(count, total.clone()))))
        .collect();
    Ok(DensityVector { size: k, entries })
}

/// Density vector estimated from `samples` uniform k-subsets.
pub fn sampled_density_vector(
    host: &Tournament,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<DensityVector> {
    check_pattern(k, host.n())?;
    let table = class_table(FlagType::Zero, k)?;
    let mut hits = vec![0u64; table.classes.len()];
    for key in sample_keys(host, k, samples, seed)? {
        hits[table.class_of(key).expect("complete table")] += 1;
    }
    let entries = table
        .classes
        .iter()
        .zip(hits)
        .map(|(c, h)| (*c, Density { value: ratio(h, samples), samples: Some(samples) }))
        .collect();
    Ok(DensityVector { size: k, entries })
}

/// The four positions of a third vertex `w` relative to an arc `u -> v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcClass {
    /// `u -> w` and `v -> w`.
    O,
    /// `w -> u` and `w -> v`.
    I,
    /// `u -> w -> v`.
    Tr3,
    /// `v -> w -> u`.
    C3,
}

impl ArcClass {
    pub const ALL: [ArcClass; 4] = [ArcClass::O, ArcClass::I, ArcClass::Tr3, ArcClass::C3];

    pub fn name(self) -> &'static str {
        match self {
            ArcClass::O => "O",
            ArcClass::I => "I",
            ArcClass::Tr3 => "Tr3",
            ArcClass::C3 => "C3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArcFlagProfile {
    pub o: usize,
    pub i: usize,
    pub tr3: usize,
    pub c3: usize,
    pub n_minus_2: usize,
}

impl ArcFlagProfile {
    pub fn count(&self, class: ArcClass) -> usize {
        match class {
            ArcClass::O => self.o,
            ArcClass::I => self.i,
            ArcClass::Tr3 => self.tr3,
            ArcClass::C3 => self.c3,
        }
    }

    /// `count / (n - 2)`.
    pub fn fraction(&self, class: ArcClass) -> BigRational {
        ratio(self.count(class) as u64, self.n_minus_2 as u64)
    }
}

fn profile_unchecked(t: &Tournament, u: usize, v: usize) -> ArcFlagProfile {
    ArcFlagProfile {
        o: and_popcount(t.out_row(u), t.out_row(v)) as usize,
        i: and_popcount(t.in_row(u), t.in_row(v)) as usize,
        tr3: and_popcount(t.out_row(u), t.in_row(v)) as usize,
        c3: and_popcount(t.out_row(v), t.in_row(u)) as usize,
        n_minus_2: t.n() - 2,
    }
}

pub fn arc_flag_profile(t: &Tournament, u: usize, v: usize) -> Result<ArcFlagProfile> {
    if t.n() < 2 {
        return Err(Error::TooSmall { needed: 2, got: t.n() });
    }
    for x in [u, v] {
        if x >= t.n() {
            return Err(Error::OutOfRange { vertex: x, n: t.n() });
        }
    }
    if !t.beats(u, v) {
        return Err(Error::NotAnArc(u, v));
    }
    Ok(profile_unchecked(t, u, v))
}

/// Profiles of every arc, in the order of [`Tournament::arcs`].
pub fn arc_profiles(t: &Tournament) -> Vec<((usize, usize), ArcFlagProfile)> {
    t.arcs().map(|(u, v)| ((u, v), profile_unchecked(t, u, v))).collect()
}

/// `(1 / C(n,2)) Σ_{arcs} |count / (n-2) - 1/4|` for each of the four classes,
/// in [`ArcClass::ALL`] order.
pub fn concentration_deviations(t: &Tournament) -> Result<[BigRational; 4]> {
    let n = t.n();
    if n < 3 {
        return Err(Error::TooSmall { needed: 3, got: n });
    }
    let arcs: Vec<(usize, usize)> = t.arcs().collect();
    // Σ |4c - (n-2)| per class; the deviation is that over 4 (n-2) C(n,2).
    let sums = arcs
        .par_iter()
        .map(|&(u, v)| {
            let p = profile_unchecked(t, u, v);
            ArcClass::ALL.map(|c| (4 * p.count(c)).abs_diff(n - 2) as u128)
        })
        .reduce(|| [0u128; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
    let den = 4 * (n as u128 - 2) * binomial_u128(n, 2);
    Ok(sums.map(|s| ratio(s, den)))
}

pub fn concentration_deviation(t: &Tournament, class: ArcClass) -> Result<BigRational> {
    let all = concentration_deviations(t)?;
    Ok(all[class as usize].clone())
}
