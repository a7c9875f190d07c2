//! Canonical codes, automorphisms and enumeration of isomorphism classes.
//!
//! A flag of size `k` is encoded by listing the pairs `(i, j)`, `i < j`, in
//! column order `(0,1), (0,2), (1,2), (0,3), …` and writing bit 1 when the
//! later vertex `j` beats the earlier vertex `i`. The first pair is the most
//! significant bit. The canonical code is the minimum encoding over all
//! orderings that put the labelled vertices first (in label order), so
//! `Tr_k` in its canonical form is `transitive(k)` and has key 0.
//!
//! Canonicalisation is an exhaustive branch-and-bound over orderings of the
//! unlabelled vertices, bounded to [`MAX_CANON_SIZE`] vertices. Enumeration
//! of all classes grows one vertex at a time and is bounded to
//! [`MAX_CLASS_SIZE`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::flag::{Flag, FlagType};
use crate::tournament::Tournament;

/// Largest flag accepted by [`canonical_code`] and [`automorphism_count`].
pub const MAX_CANON_SIZE: usize = 8;
/// Largest size for class enumeration, flag bases and lookup tables.
pub const MAX_CLASS_SIZE: usize = 7;

/// Identifies a flag up to label-preserving isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    size: u8,
    ty: FlagType,
    key: u32,
}

pub(crate) fn pair_count(size: usize) -> u32 {
    (size * size.saturating_sub(1) / 2) as u32
}

/// Shift of the bit for pair `(i, j)`, `i < j`, inside a key of `size` vertices.
#[inline]
pub(crate) fn pair_shift(size: usize, i: usize, j: usize) -> u32 {
    pair_count(size) - 1 - (j * (j - 1) / 2 + i) as u32
}

/// Encoding of `t` under the ordering `order` (new position `p` is vertex `order[p]`).
pub(crate) fn key_of_order(t: &Tournament, order: &[usize]) -> u32 {
    let size = order.len();
    let mut key = 0;
    for j in 1..size {
        for i in 0..j {
            if t.beats(order[j], order[i]) {
                key |= 1 << pair_shift(size, i, j);
            }
        }
    }
    key
}

fn prefix_mask(size: usize, placed: usize) -> u32 {
    let p = pair_count(size);
    let len = pair_count(placed);
    if len == 0 {
        0
    } else {
        (((1u64 << len) - 1) << (p - len)) as u32
    }
}

struct Search<'a> {
    t: &'a Tournament,
    size: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<u32>,
    ties: u64,
}

impl Search<'_> {
    fn run(&mut self, acc: u32) {
        let depth = self.order.len();
        if depth == self.size {
            match self.best {
                Some(b) if acc > b => {}
                Some(b) if acc == b => self.ties += 1,
                _ => {
                    self.best = Some(acc);
                    self.ties = 1;
                }
            }
            return;
        }
        let mask = prefix_mask(self.size, depth + 1);
        for v in 0..self.size {
            if self.used[v] {
                continue;
            }
            let mut next = acc;
            for (i, &u) in self.order.iter().enumerate() {
                if self.t.beats(v, u) {
                    next |= 1 << pair_shift(self.size, i, depth);
                }
            }
            if let Some(b) = self.best {
                if next > b & mask {
                    continue;
                }
            }
            self.used[v] = true;
            self.order.push(v);
            self.run(next);
            self.order.pop();
            self.used[v] = false;
        }
    }
}

/// Minimum key with `labels` held first, and the number of orderings reaching
/// it (the size of the label-preserving automorphism group).
pub(crate) fn canonical_key(t: &Tournament, labels: &[usize]) -> (u32, u64) {
    let size = t.n();
    debug_assert!(size <= MAX_CANON_SIZE);
    let mut used = vec![false; size];
    for &l in labels {
        used[l] = true;
    }
    let acc = key_of_order(
        &t.induced_ordered(labels),
        &(0..labels.len()).collect::<Vec<_>>(),
    );
    // Label bits sit at the same pair indices inside the full-size key.
    let shift = pair_count(size) - pair_count(labels.len());
    let mut search = Search {
        t,
        size,
        order: labels.to_vec(),
        used,
        best: None,
        ties: 0,
    };
    search.run(acc << shift);
    (search.best.unwrap_or(0), search.ties)
}

fn check_size(size: usize, bound: usize) -> Result<()> {
    if size > bound {
        Err(Error::TooLarge { size, bound })
    } else {
        Ok(())
    }
}

/// Canonical code of a flag; unlabelled vertices are permuted, labels stay fixed.
pub fn canonical_code(flag: &Flag) -> Result<CanonicalCode> {
    check_size(flag.size(), MAX_CANON_SIZE)?;
    let (key, _) = canonical_key(flag.model(), flag.labels());
    Ok(CanonicalCode { size: flag.size() as u8, ty: flag.flag_type(), key })
}

/// Canonical code of an unlabelled tournament.
pub fn tournament_code(t: &Tournament) -> Result<CanonicalCode> {
    check_size(t.n(), MAX_CANON_SIZE)?;
    let (key, _) = canonical_key(t, &[]);
    Ok(CanonicalCode { size: t.n() as u8, ty: FlagType::Zero, key })
}

/// Number of vertex permutations preserving every arc.
pub fn automorphism_count(t: &Tournament) -> Result<u64> {
    check_size(t.n(), MAX_CANON_SIZE)?;
    Ok(canonical_key(t, &[]).1)
}

pub fn is_isomorphic(a: &Tournament, b: &Tournament) -> Result<bool> {
    Ok(a.n() == b.n() && tournament_code(a)? == tournament_code(b)?)
}

impl CanonicalCode {
    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn flag_type(&self) -> FlagType {
        self.ty
    }

    pub fn key(&self) -> u32 {
        self.key
    }

    /// Canonical representative of the class: labelled vertices first.
    pub fn model(&self) -> Tournament {
        let size = self.size();
        Tournament::from_fn(size, |i, j| self.key >> pair_shift(size, i, j) & 1 == 0)
    }

    pub fn to_flag(&self) -> Flag {
        let labels = (0..self.ty.label_count()).collect();
        Flag::new(self.model(), labels).expect("canonical codes carry valid labels")
    }

    /// Human-readable name for the small unlabelled classes, else the code.
    pub fn name(&self) -> String {
        if self.ty == FlagType::Zero {
            let known = match (self.size, self.key) {
                (0, _) => Some("Tr0"),
                (1, _) => Some("Tr1"),
                (2, _) => Some("Tr2"),
                (3, 0) => Some("Tr3"),
                (3, _) => Some("C3"),
                (4, _) => Some(small4_name(&self.model())),
                _ => None,
            };
            if let Some(name) = known {
                return name.to_string();
            }
        }
        self.to_string()
    }
}

fn small4_name(t: &Tournament) -> &'static str {
    let mut d = t.out_degrees();
    d.sort_unstable();
    match d.as_slice() {
        [0, 1, 2, 3] => "Tr4",
        [1, 1, 1, 3] => "W4",
        [0, 2, 2, 2] => "L4",
        _ => "R4",
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (pair_count(self.size()) as usize).div_ceil(4).max(1);
        write!(f, "{}{}:{:0width$x}", self.size, self.ty.suffix(), self.key, width = width)
    }
}

type BasisCache = Mutex<HashMap<(FlagType, usize), Arc<Vec<CanonicalCode>>>>;
type TableCache = Mutex<HashMap<(FlagType, usize), Arc<ClassTable>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Canonical codes of all flags of type `ty` on `size` vertices, sorted.
pub fn flag_classes(ty: FlagType, size: usize) -> Result<Arc<Vec<CanonicalCode>>> {
    check_size(size, MAX_CLASS_SIZE)?;
    let t = ty.label_count();
    if size < t {
        return Err(Error::TooSmall { needed: t, got: size });
    }
    if let Some(hit) = basis_cache().lock().unwrap().get(&(ty, size)) {
        return Ok(hit.clone());
    }
    let codes: Vec<CanonicalCode> = if size == t {
        vec![CanonicalCode { size: size as u8, ty, key: 0 }]
    } else {
        let smaller = flag_classes(ty, size - 1)?;
        let labels: Vec<usize> = (0..t).collect();
        let mut found = BTreeSet::new();
        for code in smaller.iter() {
            let base = code.model();
            for mask in 0u32..1 << (size - 1) {
                let grown = Tournament::from_fn(size, |i, j| {
                    if j == size - 1 {
                        mask >> i & 1 == 0
                    } else {
                        base.beats(i, j)
                    }
                });
                found.insert(canonical_key(&grown, &labels).0);
            }
        }
        found.into_iter().map(|key| CanonicalCode { size: size as u8, ty, key }).collect()
    };
    let codes = Arc::new(codes);
    basis_cache().lock().unwrap().insert((ty, size), codes.clone());
    Ok(codes)
}

/// One representative per isomorphism class of tournaments on `k` vertices,
/// in canonical-code order.
pub fn enumerate_classes(k: usize) -> Result<Vec<Tournament>> {
    Ok(flag_classes(FlagType::Zero, k)?.iter().map(CanonicalCode::model).collect())
}

/// Direct lookup from an encoding (any ordering with labels first) to the
/// index of its class in [`flag_classes`].
#[derive(Debug)]
pub(crate) struct ClassTable {
    pub classes: Arc<Vec<CanonicalCode>>,
    index: Vec<u32>,
}

impl ClassTable {
    pub const NONE: u32 = u32::MAX;

    /// Class index of an encoding, or `None` if the encoding violates the type.
    #[inline]
    pub fn class_of(&self, key: u32) -> Option<usize> {
        match self.index[key as usize] {
            Self::NONE => None,
            i => Some(i as usize),
        }
    }
}

fn for_each_permutation(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

pub(crate) fn class_table(ty: FlagType, size: usize) -> Result<Arc<ClassTable>> {
    if let Some(hit) = table_cache().lock().unwrap().get(&(ty, size)) {
        return Ok(hit.clone());
    }
    let classes = flag_classes(ty, size)?;
    let t = ty.label_count();
    let mut index = vec![ClassTable::NONE; 1usize << pair_count(size)];
    for (ci, code) in classes.iter().enumerate() {
        let model = code.model();
        let mut order: Vec<usize> = (0..size).collect();
        for_each_permutation(&mut order, t, &mut |perm| {
            index[key_of_order(&model, perm) as usize] = ci as u32;
        });
    }
    let table = Arc::new(ClassTable { classes, index });
    table_cache().lock().unwrap().insert((ty, size), table.clone());
    Ok(table)
}
