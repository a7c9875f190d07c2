//! Exact invariants of the census and the flag calculus on seeded random hosts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use quasitour::canon::flag_classes;
use quasitour::census::{
    arc_flag_profile, arc_profiles, census, count_c3_fast, count_induced, count_transitive, ArcClass,
};
use quasitour::flagcalc::{
    arc_average, downward, evaluate, evaluate_at_arc, expand, multiply_vectors, power, FlagVector,
};
use quasitour::generators::{random_tournament, transitive};
use quasitour::qrlab::{minimize_density, transitive_baseline};
use quasitour::{BuiltinFlag, FlagType, Tournament};

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn ru(p: &BigUint, q: &BigUint) -> BigRational {
    BigRational::new(p.clone().into(), q.clone().into())
}

/// The 50 hosts used throughout, with 5 to 20 vertices.
fn hosts() -> Vec<Tournament> {
    (0..50u64).map(|i| random_tournament(5 + (i as usize % 16), 1000 + i)).collect()
}

fn binom(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn census_density(host: &Tournament, k: usize) -> Vec<BigRational> {
    let total = binom(host.n(), k);
    census(host, k).unwrap().iter().map(|(_, c)| ru(c, &total)).collect()
}

fn delete_vertex(t: &Tournament, x: usize) -> Tournament {
    let keep: Vec<usize> = (0..t.n()).filter(|&v| v != x).collect();
    t.induced(&keep).unwrap()
}

fn a_flags(size: usize) -> Vec<FlagVector> {
    flag_classes(FlagType::A, size).unwrap().iter().map(|c| FlagVector::from_code(*c)).collect()
}

#[test]
fn subset_averaging_chain_rule() {
    for host in hosts() {
        let n = host.n();
        for k in 3..=4.min(n - 1) {
            let whole = census_density(&host, k);
            let mut sum = vec![BigRational::zero(); whole.len()];
            for x in 0..n {
                for (s, d) in sum.iter_mut().zip(census_density(&delete_vertex(&host, x), k)) {
                    *s += d;
                }
            }
            let avg: Vec<BigRational> = sum.into_iter().map(|s| s / r(n as i64, 1)).collect();
            assert_eq!(avg, whole, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn arc_averaging_matches_downward() {
    let flags: Vec<FlagVector> = a_flags(3).into_iter().chain(a_flags(4)).collect();
    for host in hosts() {
        for f in &flags {
            if f.size() > host.n() {
                continue;
            }
            let lhs = arc_average(f, &host).unwrap();
            let down = evaluate(&downward(f).unwrap(), &host).unwrap();
            let one_a = evaluate(&downward(&FlagVector::builtin(BuiltinFlag::OneA).unwrap()).unwrap(), &host).unwrap();
            assert_eq!(one_a, r(1, 2));
            assert_eq!(lhs, &down / &one_a);
            assert_eq!(lhs, down * r(2, 1));
        }
    }
}

#[test]
fn expansion_exactness() {
    for host in hosts() {
        let n = host.n();
        for k in 3..=4 {
            for code in flag_classes(FlagType::Zero, k).unwrap().iter() {
                let v = FlagVector::from_code(*code);
                let value = evaluate(&v, &host).unwrap();
                for l in k..=5.min(n) {
                    assert_eq!(evaluate(&expand(&v, l).unwrap(), &host).unwrap(), value);
                }
            }
        }
        let (u, w) = host.arcs().next().unwrap();
        for f in a_flags(3) {
            let value = evaluate_at_arc(&f, &host, u, w).unwrap();
            for l in 3..=5.min(n) {
                assert_eq!(evaluate_at_arc(&expand(&f, l).unwrap(), &host, u, w).unwrap(), value);
            }
        }
    }
}

#[test]
fn four_class_partition() {
    for host in hosts() {
        for (_, p) in arc_profiles(&host) {
            assert_eq!(p.o + p.i + p.tr3 + p.c3, host.n() - 2);
            assert_eq!(p.n_minus_2, host.n() - 2);
        }
    }
}

#[test]
fn duality_invariants() {
    for host in hosts() {
        let rev = host.reverse();
        assert_eq!(rev.reverse(), host);
        for ((u, v), p) in arc_profiles(&host) {
            let q = arc_flag_profile(&rev, v, u).unwrap();
            assert_eq!((p.o, p.i, p.tr3, p.c3), (q.i, q.o, q.tr3, q.c3));
        }
        for k in 3..=4.min(host.n()) {
            let mut a = census_density(&host, k);
            let mut b = census_density(&rev, k);
            a.sort();
            b.sort();
            assert_eq!(a, b, "reversal permutes classes");
        }
    }
}

#[test]
fn census_closure() {
    for host in hosts() {
        for k in 1..=5.min(host.n()) {
            let total: BigRational = census_density(&host, k).into_iter().sum();
            assert!(total.is_one());
        }
    }
}

#[test]
fn arc_sums_match_global_counts() {
    let c3 = Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    for host in hosts() {
        let tr3 = count_induced(&transitive(3), &host).unwrap();
        let cyc = count_induced(&c3, &host).unwrap();
        let sum = |class: ArcClass| -> BigUint { arc_profiles(&host).iter().map(|(_, p)| BigUint::from(p.count(class))).sum() };
        assert_eq!(sum(ArcClass::O), tr3);
        assert_eq!(sum(ArcClass::I), tr3);
        assert_eq!(sum(ArcClass::Tr3), tr3);
        assert_eq!(sum(ArcClass::C3), cyc * 3u32);
    }
}

#[test]
fn power_mean_on_arcs() {
    for host in hosts() {
        let g: Vec<BigRational> =
            arc_profiles(&host).iter().map(|(_, p)| p.fraction(ArcClass::O)).collect();
        let len = r(g.len() as i64, 1);
        let mean: BigRational = g.iter().cloned().sum::<BigRational>() / &len;
        for m in 1..=5i32 {
            let mean_pow: BigRational = g.iter().map(|x| x.pow(m)).sum::<BigRational>() / &len;
            assert!(mean_pow >= mean.pow(m));
        }
    }
}

#[test]
fn degree_formula_matches_brute_force() {
    for i in 0..100u64 {
        let n = 3 + (i as usize % 10);
        let t = random_tournament(n, 5000 + i);
        let mut brute = 0u32;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let cyclic = (t.beats(a, b) && t.beats(b, c) && t.beats(c, a))
                        || (t.beats(b, a) && t.beats(c, b) && t.beats(a, c));
                    brute += cyclic as u32;
                }
            }
        }
        assert_eq!(count_c3_fast(&t), BigUint::from(brute), "n = {n}");
    }
}

#[test]
fn linearity() {
    let classes3 = flag_classes(FlagType::Zero, 3).unwrap();
    let classes4 = flag_classes(FlagType::Zero, 4).unwrap();
    let coeffs = [r(3, 7), r(-5, 2), r(11, 13)];
    for (idx, host) in hosts().into_iter().enumerate().filter(|(_, h)| h.n() >= 4) {
        let a = &coeffs[idx % 3];
        let b = &coeffs[(idx + 1) % 3];
        let u = FlagVector::from_code(classes3[idx % classes3.len()]);
        let v = FlagVector::from_code(classes4[idx % classes4.len()]);
        let combo = u.scaled(a).plus(&v.scaled(b)).unwrap();
        let lhs = evaluate(&combo, &host).unwrap();
        let rhs = a * evaluate(&u, &host).unwrap() + b * evaluate(&v, &host).unwrap();
        assert_eq!(lhs, rhs);
    }
    let f3 = a_flags(3);
    let f4 = a_flags(4);
    for (i, f) in f3.iter().enumerate() {
        let g = &f4[(5 * i) % f4.len()];
        let a = &coeffs[i % 3];
        let b = &coeffs[(i + 2) % 3];
        let lhs = downward(&f.scaled(a).plus(&g.scaled(b)).unwrap()).unwrap();
        let rhs = downward(f).unwrap().scaled(a).plus(&downward(g).unwrap().scaled(b)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn product_error_bound() {
    let t = 2i64;
    let small = a_flags(3);
    let big = a_flags(4);
    let pairs: Vec<(&FlagVector, &FlagVector)> = vec![
        (&small[0], &small[0]),
        (&small[1], &small[3]),
        (&small[2], &small[2]),
        (&small[3], &small[3]),
        (&small[0], &big[7]),
    ];
    for seed in 0..3u64 {
        let host = random_tournament(30 + seed as usize, 77 + seed);
        let n = host.n() as i64;
        for (f1, f2) in &pairs {
            let (k1, k2) = (f1.size() as i64, f2.size() as i64);
            let bound = r((k1 - t) * (k2 - t), n - k1 - k2);
            let prod = multiply_vectors(f1, f2).unwrap();
            for (u, w) in host.arcs() {
                let lhs = evaluate_at_arc(f1, &host, u, w).unwrap() * evaluate_at_arc(f2, &host, u, w).unwrap();
                let err = (lhs - evaluate_at_arc(&prod, &host, u, w).unwrap()).abs();
                assert!(err <= bound, "arc {u}->{w}: {err} > {bound}");
            }
        }
    }
}

#[test]
fn power_inequality_with_tolerance() {
    let o = FlagVector::builtin(BuiltinFlag::OA).unwrap();
    let base_down = downward(&o).unwrap();
    for seed in 0..2u64 {
        let host = random_tournament(50 + 3 * seed as usize, 31 + seed);
        let n = host.n() as i64;
        let base = evaluate(&base_down, &host).unwrap();
        for m in 2..=3i32 {
            let lhs = evaluate(&downward(&power(&o, m as usize).unwrap()).unwrap(), &host).unwrap()
                * r(1, 2).pow(m - 1);
            let rhs = base.pow(m) - r((m * m) as i64, n - 3);
            assert!(lhs >= rhs, "m = {m}");
        }
    }
}

#[test]
fn search_floor_and_soundness() {
    for (k, n, seed) in [(3usize, 12usize, 1u64), (3, 16, 2), (4, 16, 3)] {
        let res = minimize_density(k, n, seed, 3, 5000).unwrap();
        let floor = transitive_baseline(k) - r(4 * (k * k) as i64, n as i64);
        assert!(res.trace.iter().all(|p| p.density >= floor));
        let total = binom(n, k);
        assert_eq!(res.best_density, ru(&count_transitive(&res.best, k), &total));
        assert!(res.best.arcs().count() == n * (n - 1) / 2);
    }
}
