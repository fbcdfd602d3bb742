//! Search, classification and verification of Goethals-Seidel difference
//! families with symmetric and skew blocks in cyclic groups.

pub mod blockgen;
pub mod catalog;
pub mod equivalence;
pub mod error;
pub mod family;
pub mod matcher;
pub mod params;
pub mod search;
pub mod verify;
pub mod zv;

pub use blockgen::{CandidateRow, RowFile};
pub use equivalence::{CanonicalKey, EquivalenceClass, Transform};
pub use error::{Error, Result};
pub use family::{FamilyRecord, TypedFamily};
pub use matcher::{MatchCase, MatchOptions, MatchResult};
pub use params::{GsParamSet, SymmetryType, Tag};
pub use verify::{BackCirculant, Certificate, Circulant, GsArrayMatrix, Matrix};
pub use zv::{BinarySeq, CyclicSubset, DifferenceRow, PafVector, PsdVector};
