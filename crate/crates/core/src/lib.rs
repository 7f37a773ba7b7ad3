//! Sparse sets, k-anti-Horn formulas, and the learning and recovery
//! procedures built on them.

pub mod clause;
pub mod error;
pub mod experiment;
pub mod field;
pub mod learner;
pub mod poly;
pub mod rng;
pub mod transform;
pub mod word;
pub mod world;

pub use clause::{AntiHornClause, AntiHornFormula};
pub use error::{ClauseError, FieldError, LearnError, ParseError, WorldError};
pub use poly::{Poly, Poly2};
pub use word::Word;
pub use world::SparseWorld;
