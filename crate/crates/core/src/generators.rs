//! Deterministic tournament families.
//!
//! Random tournaments draw one fair bit per unordered pair, pairs taken in
//! upper-triangular row-major order, from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. This choice is part of the stable
//! output: the same `(n, seed)` always yields the same tournament.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Seed for the random generators.
pub type Seed = u64;

/// Largest order accepted by [`paley`].
pub const MAX_PALEY: u64 = 4096;

pub fn random_tournament(n: usize, seed: Seed) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tournament::from_fn(n, |_, _| rng.gen::<bool>())
}

/// `i` beats `j` iff `i < j`.
pub fn transitive(n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| true)
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Paley tournament on the residues mod `q`: `i` beats `j` iff `j - i` is a
/// nonzero square mod `q`.
pub fn paley(q: u64) -> Result<Tournament> {
    if q > MAX_PALEY {
        return Err(Error::TooLarge { size: q as usize, bound: MAX_PALEY as usize });
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(Error::BadResidueClass(q));
    }
    let mut square = vec![false; q as usize];
    for x in 1..q {
        square[(x * x % q) as usize] = true;
    }
    let q = q as usize;
    Ok(Tournament::from_fn(q, |i, j| square[(j + q - i) % q]))
}

/// Circulant tournament: `i` beats `j` iff `(j - i) mod n` lies in `1..=(n-1)/2`.
pub fn rotational(n: usize) -> Result<Tournament> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    let half = (n - 1) / 2;
    Ok(Tournament::from_fn(n, |i, j| (j - i) <= half))
}

/// Reverses each listed arc in turn; a later pair sees the earlier flips.
pub fn flip_arcs(t: &Tournament, pairs: &[(usize, usize)]) -> Result<Tournament> {
    let mut out = t.clone();
    for &(u, v) in pairs {
        out.flip_in_place(u, v)?;
    }
    Ok(out)
}

/// Replaces every vertex by `m` vertices ordered transitively; arcs between
/// blobs follow `t`. Vertex `a * m + x` is copy `x` of vertex `a`.
pub fn blowup(t: &Tournament, m: usize) -> Result<Tournament> {
    if m == 0 {
        return Err(Error::BadParameter("blow-up factor must be at least 1".into()));
    }
    Ok(Tournament::from_fn(t.n() * m, |i, j| {
        let (a, b) = (i / m, j / m);
        if a == b {
            true
        } else {
            t.beats(a, b)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::census::count_induced;

    fn c3() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_tournament(50, 9);
        assert_eq!(a, random_tournament(50, 9));
        assert_ne!(a, random_tournament(50, 10));
        assert_eq!(a.arcs().count(), 50 * 49 / 2);
    }

    #[test]
    fn transitive_shape() {
        let t = transitive(3);
        assert_eq!(t.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(transitive(6).out_degrees(), vec![5, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn paley_seven() {
        let p = paley(7).unwrap();
        let beaten: Vec<usize> = p.out_neighbors(0).collect();
        assert_eq!(beaten, vec![1, 2, 4]);
        assert!(p.out_degrees().iter().all(|&d| d == 3));
        assert!(is_isomorphic(&p.reverse(), &p).unwrap());
        // x -> -x maps the tournament onto its reversal.
        let neg: Vec<usize> = (0..7).map(|x| (7 - x) % 7).collect();
        assert_eq!(p.permuted(&neg).unwrap(), p.reverse());
    }

    #[test]
    fn paley_errors() {
        assert_eq!(paley(8), Err(Error::NotPrime(8)));
        assert_eq!(paley(13), Err(Error::BadResidueClass(13)));
        assert!(matches!(paley(4099), Err(Error::TooLarge { .. })));
        for q in [3u64, 11, 19, 43, 103, 227, 499] {
            let p = paley(q).unwrap();
            assert!(p.out_degrees().iter().all(|&d| d as u64 == (q - 1) / 2));
        }
    }

    #[test]
    fn rotational_shape() {
        let r = rotational(5).unwrap();
        assert_eq!(r.out_neighbors(0).collect::<Vec<_>>(), vec![1, 2]);
        assert!(r.beats(4, 0) && r.beats(3, 0));
        assert!(rotational(31).unwrap().out_degrees().iter().all(|&d| d == 15));
        assert_eq!(rotational(4), Err(Error::EvenOrder(4)));
        assert_eq!(rotational(1).unwrap().n(), 1);
    }

    #[test]
    fn flips() {
        let t = transitive(6);
        let f = flip_arcs(&t, &[(0, 1)]).unwrap();
        let diff = t.upper_bits().zip(f.upper_bits()).filter(|(a, b)| a != b).count();
        assert_eq!(diff, 1);
        assert_eq!(flip_arcs(&f, &[(1, 0)]).unwrap(), t);
        // Sequential semantics: a pair flipped twice is restored.
        assert_eq!(flip_arcs(&t, &[(2, 4), (4, 2)]).unwrap(), t);
        assert_eq!(flip_arcs(&t, &[(1, 0)]), Err(Error::NotAnArc(1, 0)));
        let g = flip_arcs(&transitive(5), &[(0, 4)]).unwrap();
        assert!(count_induced(&c3(), &g).unwrap() >= 1u32.into());
    }

    #[test]
    fn blowups() {
        let c = c3();
        assert_eq!(blowup(&c, 1).unwrap(), c);
        assert_eq!(blowup(&c, 4).unwrap().n(), 12);
        assert!(blowup(&c, 0).is_err());
        // Only the m^3 transversal triples are cyclic.
        for m in 1..6usize {
            let b = blowup(&c, m).unwrap();
            assert_eq!(count_induced(&c, &b).unwrap(), (m * m * m).into());
        }
    }
}
