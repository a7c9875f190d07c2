//! Quasi-randomness diagnostics and the extremal local search.
//!
//! A report gathers, for one tournament, the densities of every class up to a
//! size bound, the statistic `d(Tr4) + d(R4)`, the largest deviation of a
//! density from its random baseline, the four arc-flag concentration
//! deviations and the gaps `d(Tr_k) - k!/2^C(k,2)`. The verdict compares those
//! against [`Thresholds`].

mod search;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::census::{
    concentration_deviations, count_transitive, density_vector, exact_bound,
    sampled_density_vector, ArcClass, Density, DensityVector,
};
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, ratio, ratio_u, rational_from_f64};
use crate::tournament::Tournament;

pub use search::{minimize_density, SearchParams, SearchResult, TracePoint};

/// `k! / 2^C(k,2)`, the density of `Tr_k` in a random tournament.
pub fn transitive_baseline(k: usize) -> BigRational {
    let den = num_bigint::BigUint::from(1u8) << (k * k.saturating_sub(1) / 2);
    ratio_u(factorial(k), den)
}

/// `d(Tr4) + d(R4)`.
pub fn p2_statistic(t: &Tournament) -> Result<BigRational> {
    if t.n() < 4 {
        return Err(Error::TooSmall { needed: 4, got: t.n() });
    }
    let v = density_vector(t, 4)?;
    Ok(p2_from(&v))
}

fn p2_from(v: &DensityVector) -> BigRational {
    ["Tr4", "R4"].iter().map(|name| v.get(name).expect("size-4 classes").value.clone()).sum()
}

/// Largest `|d(T) - baseline(T)|` over the classes of size `s`.
pub fn p1_maxdev(t: &Tournament, s: usize) -> Result<BigRational> {
    if !(3..=5).contains(&s) {
        return Err(Error::BadParameter(format!("size {s} outside 3..=5")));
    }
    if t.n() < s {
        return Err(Error::TooSmall { needed: s, got: t.n() });
    }
    density_vector(t, s)?.max_baseline_deviation()
}

/// Concentration deviations for the four arc classes.
pub fn flag_deviations(t: &Tournament) -> Result<BTreeMap<ArcClass, BigRational>> {
    let devs = concentration_deviations(t)?;
    Ok(ArcClass::ALL.into_iter().zip(devs).collect())
}

/// Verdict thresholds. All three are upper bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub deviation: f64,
    pub p2: f64,
    pub p1_maxdev: f64,
}

impl Thresholds {
    /// Reference values at 200 vertices.
    pub const AT_200: Thresholds = Thresholds { deviation: 0.05, p2: 0.02, p1_maxdev: 0.02 };

    /// The reference values scaled by `sqrt(200 / n)`.
    pub fn default_for(n: usize) -> Self {
        let scale = (200.0 / n.max(1) as f64).sqrt();
        Thresholds {
            deviation: Self::AT_200.deviation * scale,
            p2: Self::AT_200.p2 * scale,
            p1_maxdev: Self::AT_200.p1_maxdev * scale,
        }
    }
}

/// How densities are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    QuasiRandomLike,
    NotQuasiRandomLike,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::QuasiRandomLike => "quasi-random-like",
            Verdict::NotQuasiRandomLike => "not-quasi-random-like",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QrReport {
    pub n: usize,
    pub mode: CensusMode,
    /// Density vectors for sizes `3..=s_max`.
    pub densities: BTreeMap<usize, DensityVector>,
    /// `d(Tr4) + d(R4)`, when the host has at least 4 vertices.
    pub p2: Option<Density>,
    pub p1_maxdev: BTreeMap<usize, Density>,
    pub deviations: BTreeMap<ArcClass, BigRational>,
    /// `d(Tr_k) - k!/2^C(k,2)` for `3 <= k <= s_max`.
    pub gaps: BTreeMap<usize, Density>,
    pub thresholds: Thresholds,
    pub verdict: Verdict,
}

impl QrReport {
    pub fn deviation(&self, class: ArcClass) -> &BigRational {
        &self.deviations[&class]
    }
}

/// Largest `s_max` for each mode.
pub const MAX_EXACT_SMAX: usize = 5;
pub const MAX_SAMPLED_SMAX: usize = 7;

/// Verdict from the statistics and thresholds.
pub fn verdict_for(
    deviations: &BTreeMap<ArcClass, BigRational>,
    p2: Option<&BigRational>,
    p1: &BTreeMap<usize, Density>,
    th: &Thresholds,
) -> Verdict {
    let dev_ok = {
        let bound = rational_from_f64(th.deviation);
        deviations.values().all(|d| *d <= bound)
    };
    let p2_ok = p2.is_none_or(|p| (p - ratio(3, 4)).abs() <= rational_from_f64(th.p2));
    let p1_ok = {
        let bound = rational_from_f64(th.p1_maxdev);
        p1.values().all(|d| d.value <= bound)
    };
    if dev_ok && p2_ok && p1_ok {
        Verdict::QuasiRandomLike
    } else {
        Verdict::NotQuasiRandomLike
    }
}

/// Collects every statistic for `t` and applies the thresholds.
pub fn qr_report(
    t: &Tournament,
    s_max: usize,
    mode: CensusMode,
    thresholds: Thresholds,
) -> Result<QrReport> {
    let n = t.n();
    if s_max < 3 {
        return Err(Error::BadParameter(format!("s_max must be at least 3, got {s_max}")));
    }
    if n < s_max {
        return Err(Error::TooSmall { needed: s_max, got: n });
    }
    let bound = match mode {
        CensusMode::Exact => MAX_EXACT_SMAX,
        CensusMode::Sampled { .. } => MAX_SAMPLED_SMAX,
    };
    if s_max > bound {
        return Err(Error::TooLarge { size: s_max, bound });
    }
    if mode == CensusMode::Exact && n > exact_bound(s_max) {
        return Err(Error::ExactBound { k: s_max, n, bound: exact_bound(s_max) });
    }

    let mut densities = BTreeMap::new();
    for s in 3..=s_max {
        let v = match mode {
            CensusMode::Exact => density_vector(t, s)?,
            // Each size gets its own stream so adding sizes leaves the others unchanged.
            CensusMode::Sampled { samples, seed } => {
                sampled_density_vector(t, s, samples, seed.wrapping_add(s as u64))?
            }
        };
        densities.insert(s, v);
    }
    let samples = match mode {
        CensusMode::Exact => None,
        CensusMode::Sampled { samples, .. } => Some(samples),
    };
    let tag = |value: BigRational| Density { value, samples };

    let p2 = if n >= 4 {
        let v = match densities.get(&4) {
            Some(v) => p2_from(v),
            None => match mode {
                CensusMode::Exact => p2_statistic(t)?,
                CensusMode::Sampled { samples, seed } => {
                    p2_from(&sampled_density_vector(t, 4, samples, seed.wrapping_add(4))?)
                }
            },
        };
        Some(tag(v))
    } else {
        None
    };

    let mut p1 = BTreeMap::new();
    for (s, v) in &densities {
        p1.insert(*s, tag(v.max_baseline_deviation()?));
    }

    let mut gaps = BTreeMap::new();
    for k in 3..=s_max {
        let d_tr = match mode {
            // Winner recursion is cheap even where the full vector is not.
            CensusMode::Exact => ratio_u(count_transitive(t, k), binomial(n, k)),
            CensusMode::Sampled { .. } => densities[&k]
                .entries
                .iter()
                .find(|(c, _)| c.key() == 0)
                .map(|(_, d)| d.value.clone())
                .unwrap_or_else(BigRational::zero),
        };
        gaps.insert(k, tag(d_tr - transitive_baseline(k)));
    }

    let deviations = flag_deviations(t)?;
    let verdict = verdict_for(&deviations, p2.as_ref().map(|d| &d.value), &p1, &thresholds);
    Ok(QrReport { n, mode, densities, p2, p1_maxdev: p1, deviations, gaps, thresholds, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::density;
    use crate::generators::{paley, random_tournament, rotational, transitive};
    use num_traits::One;

    #[test]
    fn baselines() {
        assert_eq!(transitive_baseline(3), ratio(3, 4));
        assert_eq!(transitive_baseline(4), ratio(3, 8));
        assert!(transitive_baseline(2).is_one());
    }

    #[test]
    fn p2_examples() {
        assert!(p2_statistic(&transitive(30)).unwrap().is_one());
        let r = random_tournament(40, 3);
        let v = density_vector(&r, 4).unwrap();
        let rest = &v.get("W4").unwrap().value + &v.get("L4").unwrap().value;
        assert!((p2_statistic(&r).unwrap() + rest).is_one());
        assert!(matches!(p2_statistic(&transitive(3)), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn p1_examples() {
        assert_eq!(p1_maxdev(&transitive(100), 3).unwrap(), ratio(1, 4));
        let r = random_tournament(30, 8);
        let tr3 = density(&transitive(3), &r).unwrap().value;
        assert_eq!(p1_maxdev(&r, 3).unwrap(), (tr3 - ratio(3, 4)).abs());
        assert!(p1_maxdev(&r, 6).is_err());
    }

    #[test]
    fn deviation_duality() {
        for seed in 0..5 {
            let r = random_tournament(25, seed);
            let a = flag_deviations(&r).unwrap();
            let b = flag_deviations(&r.reverse()).unwrap();
            assert_eq!(a[&ArcClass::O], b[&ArcClass::I]);
            assert_eq!(a[&ArcClass::Tr3], b[&ArcClass::Tr3]);
            assert_eq!(a[&ArcClass::C3], b[&ArcClass::C3]);
        }
    }

    #[test]
    fn report_examples() {
        let p = paley(103).unwrap();
        let r = qr_report(&p, 4, CensusMode::Exact, Thresholds::default_for(103)).unwrap();
        assert_eq!(r.verdict, Verdict::QuasiRandomLike);

        let t = transitive(100);
        let r = qr_report(&t, 4, CensusMode::Exact, Thresholds::default_for(100)).unwrap();
        assert_eq!(r.verdict, Verdict::NotQuasiRandomLike);
        assert_eq!(r.gaps[&4].value, ratio(5, 8));

        let rot = rotational(101).unwrap();
        let r = qr_report(&rot, 4, CensusMode::Exact, Thresholds::default_for(101)).unwrap();
        assert!(r.gaps[&3].value.abs() <= ratio(1, 100));
        assert!(*r.deviation(ArcClass::O) >= ratio(8, 100));
        assert_eq!(r.verdict, Verdict::NotQuasiRandomLike);
    }

    #[test]
    fn report_errors() {
        let t = transitive(10);
        let th = Thresholds::default_for(10);
        assert!(qr_report(&t, 2, CensusMode::Exact, th).is_err());
        assert!(matches!(qr_report(&t, 6, CensusMode::Exact, th), Err(Error::TooLarge { .. })));
        assert!(matches!(qr_report(&transitive(4), 5, CensusMode::Exact, th), Err(Error::TooSmall { .. })));
        assert!(matches!(
            qr_report(&transitive(150), 5, CensusMode::Exact, th),
            Err(Error::ExactBound { .. })
        ));
    }

    #[test]
    fn sampled_report_is_reproducible() {
        let r = random_tournament(60, 2);
        let mode = CensusMode::Sampled { samples: 2000, seed: 11 };
        let a = qr_report(&r, 6, mode, Thresholds::default_for(60)).unwrap();
        let b = qr_report(&r, 6, mode, Thresholds::default_for(60)).unwrap();
        assert_eq!(a, b);
        assert!(a.densities.values().all(|v| v.total().is_one()));
        assert_eq!(a.p2.as_ref().unwrap().samples, Some(2000));
    }

    #[test]
    fn verdict_is_monotone_in_thresholds() {
        let hosts = [random_tournament(60, 1), rotational(61).unwrap(), paley(59).unwrap(), transitive(60)];
        for t in &hosts {
            let mut last = Verdict::NotQuasiRandomLike;
            for step in 0..40 {
                let x = step as f64 * 0.01;
                let th = Thresholds { deviation: x, p2: x, p1_maxdev: x };
                let v = qr_report(t, 4, CensusMode::Exact, th).unwrap().verdict;
                // Loosening thresholds can only turn a rejection into acceptance.
                if last == Verdict::QuasiRandomLike {
                    assert_eq!(v, Verdict::QuasiRandomLike);
                }
                last = v;
            }
        }
    }
}
