//! Special matchings on finite posets, zircons, and the matching induced on
//! the fixed points of a poset automorphism, with finite Coxeter groups as
//! the main source of examples.

pub mod corpus;
pub mod coxeter;
pub mod error;
pub mod matching;
pub mod poset;
pub mod sweep;
pub mod zircon;

pub use error::{CorpusError, CoxeterError, MatchingError, PosetError, ZirconError};
pub use matching::Matching;
pub use poset::{Poset, PosetMap, RelationMode};
