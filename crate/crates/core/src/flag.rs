//! Flags: tournaments with an injective tuple of labelled vertices.
//!
//! Labels are 1-based in names and docs (label 1, label 2) but stored as a
//! plain `Vec<usize>` of model vertices, `labels[0]` carrying label 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// The three types used here: no labels, one label, and type `A` (two labels,
/// label 1 beating label 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlagType {
    Zero,
    One,
    A,
}

impl FlagType {
    pub fn label_count(self) -> usize {
        match self {
            FlagType::Zero => 0,
            FlagType::One => 1,
            FlagType::A => 2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            FlagType::Zero => "",
            FlagType::One => "^1",
            FlagType::A => "^A",
        }
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagType::Zero => "0",
            FlagType::One => "1",
            FlagType::A => "A",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    model: Tournament,
    labels: Vec<usize>,
}

impl Flag {
    /// Checks that the labels are distinct, in range, and span one of the
    /// supported types. Two labels with label 2 beating label 1 are rejected:
    /// that type is only reached through [`Tournament::reverse`].
    pub fn new(model: Tournament, labels: Vec<usize>) -> Result<Self> {
        if labels.len() > 2 {
            return Err(Error::BadLabels(format!("{} labels, at most 2 supported", labels.len())));
        }
        for (i, &l) in labels.iter().enumerate() {
            if l >= model.n() {
                return Err(Error::OutOfRange { vertex: l, n: model.n() });
            }
            if labels[..i].contains(&l) {
                return Err(Error::BadLabels(format!("vertex {l} labelled twice")));
            }
        }
        if labels.len() == 2 && !model.beats(labels[0], labels[1]) {
            return Err(Error::BadLabels("label 2 beats label 1; only type A is supported".into()));
        }
        Ok(Flag { model, labels })
    }

    /// An unlabelled tournament seen as a 0-flag.
    pub fn unlabelled(model: Tournament) -> Self {
        Flag { model, labels: Vec::new() }
    }

    pub fn model(&self) -> &Tournament {
        &self.model
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.model.n()
    }

    pub fn flag_type(&self) -> FlagType {
        match self.labels.len() {
            0 => FlagType::Zero,
            1 => FlagType::One,
            _ => FlagType::A,
        }
    }
}

/// Named flags from the catalog of types and flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinFlag {
    /// The unit of the 0-algebra (the empty tournament).
    One,
    /// The unit of the 1-algebra: a single labelled vertex.
    One1,
    /// The unit of the A-algebra: an arc with both ends labelled.
    OneA,
    /// An arc whose winner is labelled.
    Alpha,
    /// A-flag whose free vertex is beaten by both labelled vertices.
    OA,
    /// A-flag whose free vertex beats both labelled vertices.
    IA,
    /// Transitive triple with the free vertex between label 1 and label 2.
    Tr3A,
    /// Cyclic triple with both labels.
    C3A,
    /// `Tr_k` with its winner labelled.
    TrW(usize),
    /// `Tr_k` with winner as label 1 and runner-up as label 2.
    TrW2(usize),
    /// `Tr_4` with winner as label 1 and loser as label 2.
    Tr4A,
}

impl FromStr for BuiltinFlag {
    type Err = Error;

    /// Accepts `one`, `one_1`, `one_A`, `alpha`, `O_A`, `I_A`, `Tr3_A`, `C3_A`,
    /// `Tr4_A`, `Tr_k_W(k)` and `Tr_k_W2(k)`.
    fn from_str(s: &str) -> Result<Self> {
        let parametrised = |prefix: &str| -> Option<Result<usize>> {
            let inner = s.strip_prefix(prefix)?.strip_suffix(')')?;
            Some(inner.trim().parse().map_err(|_| Error::BadParameter(s.to_string())))
        };
        if let Some(k) = parametrised("Tr_k_W2(") {
            return Ok(BuiltinFlag::TrW2(k?));
        }
        if let Some(k) = parametrised("Tr_k_W(") {
            return Ok(BuiltinFlag::TrW(k?));
        }
        Ok(match s {
            "one" => BuiltinFlag::One,
            "one_1" => BuiltinFlag::One1,
            "one_A" => BuiltinFlag::OneA,
            "alpha" => BuiltinFlag::Alpha,
            "O_A" => BuiltinFlag::OA,
            "I_A" => BuiltinFlag::IA,
            "Tr3_A" => BuiltinFlag::Tr3A,
            "C3_A" => BuiltinFlag::C3A,
            "Tr4_A" => BuiltinFlag::Tr4A,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

fn transitive(k: usize) -> Tournament {
    Tournament::from_fn(k, |_, _| true)
}

/// Builds the named flag.
pub fn builtin_flag(which: BuiltinFlag) -> Result<Flag> {
    let three = |arcs: &[(usize, usize)]| -> Result<Flag> {
        let mut all = vec![(0, 1)];
        all.extend_from_slice(arcs);
        Flag::new(Tournament::from_arcs(3, &all)?, vec![0, 1])
    };
    match which {
        BuiltinFlag::One => Ok(Flag::unlabelled(Tournament::from_fn(0, |_, _| true))),
        BuiltinFlag::One1 => Flag::new(transitive(1), vec![0]),
        BuiltinFlag::OneA => Flag::new(transitive(2), vec![0, 1]),
        BuiltinFlag::Alpha => Flag::new(transitive(2), vec![0]),
        BuiltinFlag::OA => three(&[(0, 2), (1, 2)]),
        BuiltinFlag::IA => three(&[(2, 0), (2, 1)]),
        BuiltinFlag::Tr3A => three(&[(0, 2), (2, 1)]),
        BuiltinFlag::C3A => three(&[(1, 2), (2, 0)]),
        BuiltinFlag::TrW(k) => {
            if k < 2 {
                return Err(Error::BadParameter(format!("Tr_k^W needs k >= 2, got {k}")));
            }
            Flag::new(transitive(k), vec![0])
        }
        BuiltinFlag::TrW2(k) => {
            if k < 2 {
                return Err(Error::BadParameter(format!("Tr_k^W2 needs k >= 2, got {k}")));
            }
            Flag::new(transitive(k), vec![0, 1])
        }
        BuiltinFlag::Tr4A => Flag::new(transitive(4), vec![0, 3]),
    }
}
