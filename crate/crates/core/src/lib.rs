//! Ramsey edge-colorings: SAT encodings, degree-matrix abstraction,
//! canonical forms, embeddings and the batch solver harness.

pub mod canonical;
pub mod coloring;
pub mod coloring_set;
pub mod degree;
pub mod embed;
pub mod encoder;
pub mod error;
pub mod partial;
pub mod pipeline;
pub mod solver;

pub use canonical::{
    alpha, canonical_form, canonical_key, degree_matrix, lex_sort, CanonicalKey, DegreeMatrix,
};
pub use coloring::{Color, ColorMatrix, DegreeTuple, Permutation, RamseyCheck, RamseyParams};
pub use coloring_set::{reduce_mod_weak_iso, ColoringSet};
pub use encoder::{CnfFormula, Lit, Model, VarMap};
pub use error::{Error, Result};
pub use partial::{Cell, PartialColoring};
pub use solver::{BackendKind, Limits, SolveResult, SolveStatus};
