//! Tournament combinatorics with exact arithmetic.
//!
//! The crate is organised around a bitset [`Tournament`] and builds up:
//!
//! * [`canon`] and [`flag`]: flags (tournaments with labelled vertices), canonical
//!   codes, automorphism counts and enumeration of isomorphism classes;
//! * [`census`]: exact and sampled induced sub-tournament densities, per-arc flag
//!   profiles and concentration deviations;
//! * [`flagcalc`]: an exact-rational flag-algebra engine (expansion, product,
//!   downward operator, evaluation) with a catalog of verified identities;
//! * [`generators`]: seeded random, transitive, Paley, rotational and blow-up
//!   tournaments;
//! * [`qrlab`]: quasi-randomness reports and a local-search minimiser of the
//!   transitive sub-tournament density;
//! * [`format`]: the `.trn` text format and JSON report rendering.

pub mod canon;
pub mod census;
mod error;
pub mod flag;
pub mod flagcalc;
pub mod format;
pub mod generators;
pub mod qrlab;
mod rational;
pub mod tournament;

pub use crate::canon::{automorphism_count, canonical_code, enumerate_classes, CanonicalCode};
pub use crate::error::{Error, Result};
pub use crate::flag::{builtin_flag, BuiltinFlag, Flag, FlagType};
pub use crate::rational::{binomial, format_rational, rational_to_f64};
pub use crate::tournament::Tournament;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
