//! Mod-p modular forms through truncated q-expansions: finite fields,
//! Dirichlet characters, Hecke and degeneracy operators, Katz Eisenstein
//! series, and old-space decompositions relative to a newform.

pub mod arith;
pub mod characters;
pub mod corpus;
pub mod eisenstein;
pub mod gf;
pub mod linalg;
pub mod newform;
pub mod qseries;
pub mod report;

pub use characters::{DirichletCharacter, LiftedCharacter};
pub use eisenstein::{katz_eisenstein, KatzEisenstein, ReducibleRep};
pub use gf::{FieldElement, FiniteField};
pub use qseries::{FormFlags, ModularForm, QExpansion};
pub use report::Report;
