//! Exact flag-algebra calculus over the types `0`, `1` and `A`.
//!
//! A [`FlagVector`] is a finite rational combination of flags sharing one type
//! and one size. Sums of vectors of different sizes are first expanded to the
//! larger size, so every vector is kept in a single basis. Products are
//! expanded eagerly into the basis of size `k1 + k2 - t`. The downward
//! operator always lands in the 0-algebra.
//!
//! Expansion and product coefficients are computed once per
//! `(type, sizes)` and cached.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canon::{
    canonical_code, canonical_key, class_table, flag_classes, key_of_order, tournament_code,
    CanonicalCode, MAX_CLASS_SIZE,
};
use crate::census::census;
use crate::error::{Error, Result};
use crate::flag::{builtin_flag, BuiltinFlag, Flag, FlagType};
use crate::rational::{binomial, binomial_u128, ratio, ratio_u};
use crate::tournament::Tournament;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FlagVector {
    ty: FlagType,
    size: usize,
    coeffs: BTreeMap<CanonicalCode, BigRational>,
}

impl FlagVector {
    pub fn zero(ty: FlagType, size: usize) -> Self {
        FlagVector { ty, size, coeffs: BTreeMap::new() }
    }

    pub fn from_flag(flag: &Flag) -> Result<Self> {
        Ok(Self::from_code(canonical_code(flag)?))
    }

    pub fn from_code(code: CanonicalCode) -> Self {
        let mut v = Self::zero(code.flag_type(), code.size());
        v.coeffs.insert(code, BigRational::one());
        v
    }

    pub fn builtin(which: BuiltinFlag) -> Result<Self> {
        Self::from_flag(&builtin_flag(which)?)
    }

    /// The unlabelled tournament `t` as a 0-flag.
    pub fn tournament(t: &Tournament) -> Result<Self> {
        Ok(Self::from_code(tournament_code(t)?))
    }

    pub fn flag_type(&self) -> FlagType {
        self.ty
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeff(&self, code: &CanonicalCode) -> BigRational {
        self.coeffs.get(code).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalCode, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, code: CanonicalCode, c: BigRational) {
        let entry = self.coeffs.entry(code).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&code);
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        let mut out = Self::zero(self.ty, self.size);
        if !factor.is_zero() {
            for (code, c) in &self.coeffs {
                out.coeffs.insert(*code, c * factor);
            }
        }
        out
    }

    pub fn scaled_int(&self, factor: i64) -> Self {
        self.scaled(&BigRational::from_integer(BigInt::from(factor)))
    }

    /// Sum; the smaller operand is expanded to the larger size first.
    pub fn plus(&self, other: &FlagVector) -> Result<Self> {
        if self.ty != other.ty {
            return Err(Error::TypeMismatch);
        }
        let size = self.size.max(other.size);
        let mut out = expand(self, size)?;
        for (code, c) in expand(other, size)?.coeffs {
            out.add_term(code, c);
        }
        Ok(out)
    }

    pub fn minus(&self, other: &FlagVector) -> Result<Self> {
        self.plus(&other.scaled_int(-1))
    }
}

impl fmt::Debug for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FlagVector[{}; {}]({})", self.ty, self.size, self)
    }
}

impl fmt::Display for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (code, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{}", c, code.name())?;
        }
        Ok(())
    }
}

/// All `r`-subsets of `items`, in lexicographic order.
fn subsets(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, r, 0, &mut Vec::new(), &mut out);
    out
}

type Row = Vec<(CanonicalCode, BigRational)>;
type ExpansionCache = Mutex<HashMap<(FlagType, usize, usize), Arc<HashMap<CanonicalCode, Row>>>>;
type ProductCache =
    Mutex<HashMap<(FlagType, usize, usize), Arc<HashMap<(CanonicalCode, CanonicalCode), Row>>>>;

fn expansion_cache() -> &'static ExpansionCache {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn check_size(size: usize) -> Result<()> {
    if size > MAX_CLASS_SIZE {
        Err(Error::TooLarge { size, bound: MAX_CLASS_SIZE })
    } else {
        Ok(())
    }
}

/// `p(F, F')` for every flag `F` of size `k` and `F'` of size `target`.
fn expansion_rows(ty: FlagType, k: usize, target: usize) -> Result<Arc<HashMap<CanonicalCode, Row>>> {
    if let Some(hit) = expansion_cache().lock().unwrap().get(&(ty, k, target)) {
        return Ok(hit.clone());
    }
    let t = ty.label_count();
    let small = class_table(ty, k)?;
    let large = flag_classes(ty, target)?;
    let labels: Vec<usize> = (0..t).collect();
    let free: Vec<usize> = (t..target).collect();
    let choices = subsets(&free, k - t);
    let den = BigInt::from(binomial_u128(target - t, k - t));
    let mut rows: HashMap<CanonicalCode, Row> = HashMap::new();
    for big in large.iter() {
        let model = big.model();
        let mut counts = vec![0u64; small.classes.len()];
        for choice in &choices {
            let order: Vec<usize> = labels.iter().chain(choice).copied().collect();
            let class = small.class_of(key_of_order(&model, &order)).expect("flag of same type");
            counts[class] += 1;
        }
        for (class, count) in counts.into_iter().enumerate() {
            if count > 0 {
                rows.entry(small.classes[class])
                    .or_default()
                    .push((*big, BigRational::new(BigInt::from(count), den.clone())));
            }
        }
    }
    let rows = Arc::new(rows);
    expansion_cache().lock().unwrap().insert((ty, k, target), rows.clone());
    Ok(rows)
}

/// Rewrites `v` in the basis of size `target`, preserving its value on every
/// tournament with at least `target` vertices.
pub fn expand(v: &FlagVector, target: usize) -> Result<FlagVector> {
    check_size(target)?;
    if target < v.size {
        return Err(Error::ShrinkNotAllowed { from: v.size, to: target });
    }
    if target == v.size {
        return Ok(v.clone());
    }
    let rows = expansion_rows(v.ty, v.size, target)?;
    let mut out = FlagVector::zero(v.ty, target);
    for (code, c) in &v.coeffs {
        for (big, p) in rows.get(code).map(Vec::as_slice).unwrap_or_default() {
            out.add_term(*big, c * p);
        }
    }
    Ok(out)
}

/// Flag basis of a type and size, one canonical representative per class.
pub fn flag_basis(ty: FlagType, size: usize) -> Result<Vec<Flag>> {
    Ok(flag_classes(ty, size)?.iter().map(CanonicalCode::to_flag).collect())
}

fn product_rows(
    ty: FlagType,
    k1: usize,
    k2: usize,
) -> Result<Arc<HashMap<(CanonicalCode, CanonicalCode), Row>>> {
    if let Some(hit) = product_cache().lock().unwrap().get(&(ty, k1, k2)) {
        return Ok(hit.clone());
    }
    let t = ty.label_count();
    let m = k1 + k2 - t;
    check_size(m)?;
    let left = class_table(ty, k1)?;
    let right = class_table(ty, k2)?;
    let labels: Vec<usize> = (0..t).collect();
    let free: Vec<usize> = (t..m).collect();
    let den = BigInt::from(binomial_u128(m - t, k1 - t));
    let mut rows: HashMap<(CanonicalCode, CanonicalCode), Row> = HashMap::new();
    for big in flag_classes(ty, m)?.iter() {
        let model = big.model();
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for part in subsets(&free, k1 - t) {
            let rest = free.iter().filter(|x| !part.contains(x));
            let a: Vec<usize> = labels.iter().chain(&part).copied().collect();
            let b: Vec<usize> = labels.iter().chain(rest).copied().collect();
            let ca = left.class_of(key_of_order(&model, &a)).expect("same type");
            let cb = right.class_of(key_of_order(&model, &b)).expect("same type");
            *counts.entry((ca, cb)).or_default() += 1;
        }
        for ((ca, cb), count) in counts {
            rows.entry((left.classes[ca], right.classes[cb]))
                .or_default()
                .push((*big, BigRational::new(BigInt::from(count), den.clone())));
        }
    }
    let rows = Arc::new(rows);
    product_cache().lock().unwrap().insert((ty, k1, k2), rows.clone());
    Ok(rows)
}

/// Product of two flags of the same type.
pub fn multiply(a: &Flag, b: &Flag) -> Result<FlagVector> {
    multiply_vectors(&FlagVector::from_flag(a)?, &FlagVector::from_flag(b)?)
}

/// Bilinear extension of [`multiply`].
pub fn multiply_vectors(a: &FlagVector, b: &FlagVector) -> Result<FlagVector> {
    if a.ty != b.ty {
        return Err(Error::TypeMismatch);
    }
    let t = a.ty.label_count();
    let m = a.size + b.size - t;
    check_size(m)?;
    let rows = product_rows(a.ty, a.size, b.size)?;
    let mut out = FlagVector::zero(a.ty, m);
    for (ca, xa) in &a.coeffs {
        for (cb, xb) in &b.coeffs {
            let weight = xa * xb;
            for (big, p) in rows.get(&(*ca, *cb)).map(Vec::as_slice).unwrap_or_default() {
                out.add_term(*big, &weight * p);
            }
        }
    }
    Ok(out)
}

/// `f^m` for `m >= 1`.
pub fn power(f: &FlagVector, m: usize) -> Result<FlagVector> {
    if m == 0 {
        return Err(Error::BadParameter("power must be at least 1".into()));
    }
    let mut acc = f.clone();
    for _ in 1..m {
        acc = multiply_vectors(&acc, f)?;
    }
    Ok(acc)
}

/// Averaging over label placements: a flag `F` with model `M` of size `k`
/// becomes `q_F · M`, where `q_F` is the share of injective label tuples of
/// `M` that reproduce `F`.
pub fn downward(v: &FlagVector) -> Result<FlagVector> {
    if v.ty == FlagType::Zero {
        return Err(Error::AlreadyUnlabelled);
    }
    let k = v.size;
    let t = v.ty.label_count();
    let mut out = FlagVector::zero(FlagType::Zero, k);
    for (code, c) in &v.coeffs {
        let model = code.model();
        let tuples: Vec<Vec<usize>> = if t == 1 {
            (0..k).map(|a| vec![a]).collect()
        } else {
            (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| vec![a, b])).collect()
        };
        let hits = tuples.iter().filter(|tuple| canonical_key(&model, tuple).0 == code.key()).count();
        let q = ratio(hits as u64, tuples.len() as u64);
        out.add_term(tournament_code(&model)?, c * q);
    }
    Ok(out)
}

/// `Σ coeff(F) · density(F, host)` for a 0-type vector.
pub fn evaluate(v: &FlagVector, host: &Tournament) -> Result<BigRational> {
    if v.ty != FlagType::Zero {
        return Err(Error::TypeMismatch);
    }
    if v.size > host.n() {
        return Err(Error::TooSmall { needed: v.size, got: host.n() });
    }
    if v.is_zero() {
        return Ok(BigRational::zero());
    }
    let total = binomial(host.n(), v.size);
    let counts: HashMap<CanonicalCode, _> = census(host, v.size)?.into_iter().collect();
    Ok(v.coeffs
        .iter()
        .map(|(code, c)| c * ratio_u(counts[code].clone(), total.clone()))
        .sum())
}

/// Class counts of the A-flags of size `s` rooted at the arc `u -> w`.
fn arc_class_counts(host: &Tournament, s: usize, u: usize, w: usize) -> Result<Vec<u64>> {
    let table = class_table(FlagType::A, s)?;
    let others: Vec<usize> = (0..host.n()).filter(|&x| x != u && x != w).collect();
    let mut counts = vec![0u64; table.classes.len()];
    for choice in subsets(&others, s - 2) {
        let order: Vec<usize> = [u, w].iter().chain(&choice).copied().collect();
        counts[table.class_of(key_of_order(host, &order)).expect("arc respects type A")] += 1;
    }
    Ok(counts)
}

/// Value of an A-type vector at one arc: each flag weighted by the share of
/// `(s-2)`-subsets of the remaining vertices inducing it with `u, w` labelled.
pub fn evaluate_at_arc(v: &FlagVector, host: &Tournament, u: usize, w: usize) -> Result<BigRational> {
    if v.ty != FlagType::A {
        return Err(Error::TypeMismatch);
    }
    for x in [u, w] {
        if x >= host.n() {
            return Err(Error::OutOfRange { vertex: x, n: host.n() });
        }
    }
    if !host.beats(u, w) {
        return Err(Error::NotAnArc(u, w));
    }
    let s = v.size;
    if s > host.n() {
        return Err(Error::TooSmall { needed: s, got: host.n() });
    }
    let table = class_table(FlagType::A, s)?;
    let counts = arc_class_counts(host, s, u, w)?;
    let den = BigInt::from(binomial_u128(host.n() - 2, s - 2));
    Ok(v.coeffs
        .iter()
        .map(|(code, c)| {
            let class = table.classes.binary_search(code).expect("basis is sorted");
            c * BigRational::new(BigInt::from(counts[class]), den.clone())
        })
        .sum())
}

/// Mean of [`evaluate_at_arc`] over all arcs of `host`.
pub fn arc_average(v: &FlagVector, host: &Tournament) -> Result<BigRational> {
    let arcs: Vec<(usize, usize)> = host.arcs().collect();
    if arcs.is_empty() {
        return Err(Error::TooSmall { needed: 2, got: host.n() });
    }
    let mut sum = BigRational::zero();
    for (u, w) in &arcs {
        sum += evaluate_at_arc(v, host, *u, *w)?;
    }
    Ok(sum / BigRational::from_integer(BigInt::from(arcs.len())))
}

/// Outcome of comparing two vectors in a common basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: FlagVector,
    pub rhs: FlagVector,
    /// Size of the common basis.
    pub size: usize,
    pub equal: bool,
    /// Nonzero entries of `lhs - rhs`.
    pub discrepancy: BTreeMap<CanonicalCode, BigRational>,
}

/// Expands both sides to `size` and compares coefficients exactly.
pub fn verify_identity(lhs: &FlagVector, rhs: &FlagVector, size: usize) -> Result<IdentityReport> {
    verify_named("", lhs, rhs, size)
}

fn verify_named(name: &str, lhs: &FlagVector, rhs: &FlagVector, size: usize) -> Result<IdentityReport> {
    if lhs.ty != rhs.ty {
        return Err(Error::TypeMismatch);
    }
    let l = expand(lhs, size)?;
    let r = expand(rhs, size)?;
    let discrepancy: BTreeMap<_, _> = l.minus(&r)?.coeffs;
    Ok(IdentityReport {
        name: name.to_string(),
        lhs: l,
        rhs: r,
        size,
        equal: discrepancy.is_empty(),
        discrepancy,
    })
}

/// One entry of the identity catalog.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub name: String,
    pub lhs: FlagVector,
    pub rhs: FlagVector,
    pub size: usize,
}

/// The unlabelled class of size `k` with the given [`CanonicalCode::name`].
pub fn named_class(k: usize, name: &str) -> Result<FlagVector> {
    flag_classes(FlagType::Zero, k)?
        .iter()
        .find(|c| c.name() == name)
        .map(|c| FlagVector::from_code(*c))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

type Multiplier<'a> = &'a dyn Fn(&FlagVector, &FlagVector) -> Result<FlagVector>;

/// Identity catalog with products computed by `mul`.
pub fn identity_catalog_with(mul: Multiplier<'_>) -> Result<Vec<IdentityCase>> {
    use BuiltinFlag as B;
    let flag = FlagVector::builtin;
    let half = ratio(1, 2);
    let one = flag(B::One)?;
    let mut cases = Vec::new();
    let mut push = |name: String, lhs: FlagVector, rhs: FlagVector| {
        let size = lhs.size.max(rhs.size);
        cases.push(IdentityCase { name, lhs, rhs, size });
    };

    let alpha = flag(B::Alpha)?;
    push("alpha^2 = Tr3^W".into(), mul(&alpha, &alpha)?, flag(B::TrW(3))?);
    push("[[alpha]]_1 = 1/2".into(), downward(&alpha)?, one.scaled(&half));
    push("[[1_A]]_A = 1/2".into(), downward(&flag(B::OneA)?)?, one.scaled(&half));
    for k in 3..=5 {
        let tr = FlagVector::tournament(&Tournament::from_fn(k, |_, _| true))?;
        push(
            format!("Tr{k} = {k}[[Tr{k}^W]]_1"),
            tr,
            downward(&flag(B::TrW(k))?)?.scaled_int(k as i64),
        );
    }
    for k in 3..=5 {
        let tr = FlagVector::tournament(&Tournament::from_fn(k, |_, _| true))?;
        push(
            format!("Tr{k} = {}[[Tr{k}^W2]]_A", k * (k - 1)),
            tr,
            downward(&flag(B::TrW2(k))?)?.scaled_int((k * (k - 1)) as i64),
        );
    }
    let tr3a = flag(B::Tr3A)?;
    push("(Tr3^A)^2 = Tr4^A".into(), mul(&tr3a, &tr3a)?, flag(B::Tr4A)?);
    push(
        "Tr4 = 12[[Tr4^A]]_A".into(),
        named_class(4, "Tr4")?,
        downward(&flag(B::Tr4A)?)?.scaled_int(12),
    );
    let c3a = flag(B::C3A)?;
    push(
        "R4 = 12[[(C3^A)^2]]_A".into(),
        named_class(4, "R4")?,
        downward(&mul(&c3a, &c3a)?)?.scaled_int(12),
    );
    let quarter = ratio(1, 4);
    push(
        "C3 = 1/2 R4 + 1/4 W4 + 1/4 L4".into(),
        named_class(3, "C3")?,
        named_class(4, "R4")?
            .scaled(&half)
            .plus(&named_class(4, "W4")?.scaled(&quarter))?
            .plus(&named_class(4, "L4")?.scaled(&quarter))?,
    );
    push(
        "Tr4 + R4 + W4 + L4 = 1".into(),
        named_class(4, "Tr4")?
            .plus(&named_class(4, "R4")?)?
            .plus(&named_class(4, "W4")?)?
            .plus(&named_class(4, "L4")?)?,
        one.clone(),
    );
    push(
        "C3^A = 1_A - O^A - I^A - Tr3^A".into(),
        c3a.clone(),
        flag(B::OneA)?.minus(&flag(B::OA)?)?.minus(&flag(B::IA)?)?.minus(&tr3a)?,
    );
    push(
        "[[O^A]]_A = Tr3/6".into(),
        downward(&flag(B::OA)?)?,
        named_class(3, "Tr3")?.scaled(&ratio(1, 6)),
    );
    Ok(cases)
}

/// The identity catalog with the engine's own product.
pub fn identity_catalog() -> Result<Vec<IdentityCase>> {
    identity_catalog_with(&multiply_vectors)
}

pub fn run_identities(cases: &[IdentityCase]) -> Result<Vec<IdentityReport>> {
    cases.iter().map(|c| verify_named(&c.name, &c.lhs, &c.rhs, c.size)).collect()
}

/// Verifies every identity of the catalog.
pub fn builtin_identity_suite() -> Result<Vec<IdentityReport>> {
    run_identities(&identity_catalog()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tournament, rotational, transitive};
    use num_traits::Signed;

    fn b(which: BuiltinFlag) -> FlagVector {
        FlagVector::builtin(which).unwrap()
    }

    #[test]
    fn bases() {
        assert_eq!(flag_basis(FlagType::A, 3).unwrap().len(), 4);
        assert_eq!(flag_basis(FlagType::Zero, 4).unwrap().len(), 4);
        let ones = flag_basis(FlagType::One, 2).unwrap();
        assert_eq!(ones.len(), 2);
        let alpha = canonical_code(&builtin_flag(BuiltinFlag::Alpha).unwrap()).unwrap();
        assert!(ones.iter().any(|f| canonical_code(f).unwrap() == alpha));
        assert!(matches!(flag_basis(FlagType::Zero, 8), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn expansion_examples() {
        let c3 = named_class(3, "C3").unwrap();
        let expected = named_class(4, "R4")
            .unwrap()
            .scaled(&ratio(1, 2))
            .plus(&named_class(4, "W4").unwrap().scaled(&ratio(1, 4)))
            .unwrap()
            .plus(&named_class(4, "L4").unwrap().scaled(&ratio(1, 4)))
            .unwrap();
        assert_eq!(expand(&c3, 4).unwrap(), expected);
        let one = expand(&b(BuiltinFlag::One), 4).unwrap();
        assert_eq!(one.terms().count(), 4);
        assert!(one.terms().all(|(_, c)| c.is_one()));
        assert_eq!(expand(&c3, 3).unwrap(), c3);
        assert!(matches!(expand(&expected, 3), Err(Error::ShrinkNotAllowed { .. })));
    }

    #[test]
    fn product_examples() {
        let alpha = builtin_flag(BuiltinFlag::Alpha).unwrap();
        assert_eq!(multiply(&alpha, &alpha).unwrap(), b(BuiltinFlag::TrW(3)));
        let tr3a = builtin_flag(BuiltinFlag::Tr3A).unwrap();
        assert_eq!(multiply(&tr3a, &tr3a).unwrap(), b(BuiltinFlag::Tr4A));
        let c3a = builtin_flag(BuiltinFlag::C3A).unwrap();
        let sq = multiply(&c3a, &c3a).unwrap();
        let terms: Vec<_> = sq.terms().collect();
        assert_eq!(terms.len(), 1);
        assert!(terms[0].1.is_one());
        assert_eq!(terms[0].0.model().out_degrees().iter().filter(|&&d| d == 1).count(), 2);
        assert!(matches!(multiply(&alpha, &c3a), Err(Error::TypeMismatch)));
    }

    #[test]
    fn downward_examples() {
        let half_one = b(BuiltinFlag::One).scaled(&ratio(1, 2));
        assert!(verify_identity(&downward(&b(BuiltinFlag::Alpha)).unwrap(), &half_one, 2)
            .unwrap()
            .equal);
        for k in 2..=6 {
            let d = downward(&b(BuiltinFlag::TrW2(k))).unwrap();
            let tr = FlagVector::tournament(&transitive(k)).unwrap();
            assert_eq!(d, tr.scaled(&ratio(1, (k * (k - 1)) as i64)));
        }
        assert_eq!(downward(&named_class(3, "C3").unwrap()), Err(Error::AlreadyUnlabelled));
    }

    #[test]
    fn evaluation_examples() {
        let host = rotational(5).unwrap();
        assert!(evaluate(&b(BuiltinFlag::One), &host).unwrap().is_one());
        assert_eq!(evaluate(&named_class(3, "Tr3").unwrap(), &host).unwrap(), ratio(1, 2));
        let c3 = named_class(3, "C3").unwrap();
        let r = random_tournament(9, 4);
        assert_eq!(
            evaluate(&expand(&c3, 4).unwrap(), &r).unwrap(),
            evaluate(&c3, &r).unwrap()
        );
        assert!(matches!(
            evaluate(&named_class(4, "R4").unwrap(), &transitive(3)),
            Err(Error::TooSmall { .. })
        ));
    }

    #[test]
    fn arc_evaluation_examples() {
        let t4 = transitive(4);
        assert!(evaluate_at_arc(&b(BuiltinFlag::OA), &t4, 0, 1).unwrap().is_one());
        let all = b(BuiltinFlag::OA)
            .plus(&b(BuiltinFlag::IA))
            .unwrap()
            .plus(&b(BuiltinFlag::Tr3A))
            .unwrap()
            .plus(&b(BuiltinFlag::C3A))
            .unwrap();
        let r = random_tournament(8, 1);
        for (u, w) in r.arcs() {
            assert!(evaluate_at_arc(&b(BuiltinFlag::OneA), &r, u, w).unwrap().is_one());
            assert!(evaluate_at_arc(&all, &r, u, w).unwrap().is_one());
        }
        assert_eq!(evaluate_at_arc(&all, &t4, 1, 0), Err(Error::NotAnArc(1, 0)));
    }

    #[test]
    fn identity_verdicts() {
        let r4 = named_class(4, "R4").unwrap();
        let rhs = downward(
            &multiply(
                &builtin_flag(BuiltinFlag::C3A).unwrap(),
                &builtin_flag(BuiltinFlag::C3A).unwrap(),
            )
            .unwrap(),
        )
        .unwrap()
        .scaled_int(12);
        assert!(verify_identity(&r4, &rhs, 4).unwrap().equal);
        let tr4 = named_class(4, "Tr4").unwrap();
        assert!(verify_identity(&tr4, &downward(&b(BuiltinFlag::Tr4A)).unwrap().scaled_int(12), 4)
            .unwrap()
            .equal);
        let bad = verify_identity(&named_class(3, "Tr3").unwrap(), &named_class(3, "C3").unwrap(), 3)
            .unwrap();
        assert!(!bad.equal);
        assert_eq!(bad.discrepancy.len(), 2);
        assert!(bad.discrepancy.values().all(|d| d.abs().is_one()));
        assert!(matches!(
            verify_identity(&tr4, &b(BuiltinFlag::OA), 4),
            Err(Error::TypeMismatch)
        ));
    }

    #[test]
    fn suite_passes() {
        let reports = builtin_identity_suite().unwrap();
        assert_eq!(reports.len(), 16);
        for r in &reports {
            assert!(r.equal, "{} failed: {:?}", r.name, r.discrepancy);
            assert!(r.size <= 5);
        }
    }

    #[test]
    fn corrupted_products_break_only_dependent_identities() {
        let tr3a = b(BuiltinFlag::Tr3A);
        let corrupt = |x: &FlagVector, y: &FlagVector| -> Result<FlagVector> {
            let p = multiply_vectors(x, y)?;
            if *x == tr3a && *y == tr3a {
                let code = *p.terms().next().unwrap().0;
                let mut bumped = p.clone();
                bumped.add_term(code, ratio(1, 7));
                return Ok(bumped);
            }
            Ok(p)
        };
        let reports = run_identities(&identity_catalog_with(&corrupt).unwrap()).unwrap();
        let failed: Vec<&str> =
            reports.iter().filter(|r| !r.equal).map(|r| r.name.as_str()).collect();
        assert_eq!(failed, vec!["(Tr3^A)^2 = Tr4^A"]);
    }
}
