//! Old spaces, membership, and the procedures built on them: killing
//! coefficients at bad primes, splitting off the theta kernel, recovering a
//! form from its newform, and the coefficient identities that relate a form
//! to its newform or companion.

mod checks;
mod construct;
mod lemma45;
mod oldspace;

use thiserror::Error;

use crate::characters::CharError;
use crate::eisenstein::EisError;
use crate::gf::FieldElement;
use crate::qseries::QError;

pub use checks::{
    check_cor37, check_prop24, companion_check, compare_eigensystems, Comparison, Cor37Case,
    Cor37Report, Cor37Row, Cor47Row, CompanionReport, Prop24Report,
};
pub use construct::{lemma31_kill, oldform_eigenform_at_l, theta_kernel_decompose};
pub use lemma45::{lemma45_construct, Lemma45Case, Lemma45Output};
pub use oldspace::{
    combined_old_generators, level_old_generators, membership, sturm_bound, theorem13_decompose,
    weight_old_generators, MembershipResult, OldLabel, OldSpaceBasis, Theorem13Certificate,
    Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewformError {
    #[error("not a normalized eigenform: T_{l} fails at a_{m}")]
    NotEigenform { l: u64, m: u64 },
    #[error("{l} does not divide the level {level}")]
    SNotDividingLevel { l: u64, level: u64 },
    #[error("bad target level {target} for a form of level {level}")]
    BadLevel { level: u64, target: u64 },
    #[error("a_{0} is nonzero with p not dividing {0}")]
    ThetaNonzero(u64),
    #[error("weight ({k} - {r}(p-1))/p is negative")]
    NegativeWeight { k: u64, r: u64 },
    #[error("{alpha} is not a root of X^2 - a_l X + eps(l) l^(k-1)")]
    NotARoot { alpha: String },
    #[error("{l} must be a prime not dividing N p = {np}")]
    BadAuxiliaryPrime { l: u64, np: u64 },
    #[error("level {newform} does not divide {form}")]
    LevelNotDivisible { newform: u64, form: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("n^k b_n != n a_n at n = {n}")]
    IdentityFail { n: u64 },
    #[error("weight-old stage failed: coefficient a_{witness} is outside the span")]
    Stage1Fail { witness: u64 },
    #[error("level-old stage failed: coefficient a_{witness} is outside the span")]
    Stage2Fail { witness: u64 },
    #[error("weight {target} is unreachable from weight {k}")]
    EmptySpace { k: u64, target: u64 },
    #[error(transparent)]
    Form(#[from] QError),
    #[error(transparent)]
    Eisenstein(#[from] EisError),
    #[error(transparent)]
    Char(#[from] CharError),
}

fn fmt_elem(x: &FieldElement) -> String {
    format!("{x}")
}
