//! Truncated q-expansions over finite fields and the operators acting on them.
//!
//! A [`QExpansion`] of precision `B` knows `a_0, ..., a_B` exactly and nothing
//! beyond. Every operator reports the precision it can certify, always rounding
//! down. A [`ModularForm`] adds level, weight, nebentypus and a few flags.
//! The nebentypus is stored at modulus equal to the level.

mod io;
mod ops;

use std::fmt;

use thiserror::Error;

use crate::characters::{CharError, DirichletCharacter};
use crate::gf::{FieldElement, FiniteField, GfError};

pub use io::{parse_form, serialize_form};
pub use ops::{
    degeneracy_bd, diamond, divide_exponents, frobenius, hasse_mult, hecke_tn, is_eigen_upto,
    theta, EigenCheck,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("output precision would be {0}, below 1")]
    PrecisionUnderflow(i64),
    #[error("{d} is not coprime to the level {level}")]
    NotCoprime { d: u64, level: u64 },
    #[error("level {level} does not divide {target}/{d}")]
    BadLevelDivisibility { level: u64, target: u64, d: u64 },
    #[error("the characteristic {p} divides {n}")]
    CharacteristicDividesLevel { p: u64, n: u64 },
    #[error("coefficient a_{0} is nonzero off the sublattice")]
    NotPure(u64),
    #[error("nonzero form supported on q^{l}-powers but {l} does not divide the level {level}")]
    NonIntegralLevel { l: u64, level: u64 },
    #[error("a_1 vanishes; the form cannot be normalized")]
    NotNormalizable,
    #[error("T_{n} undefined in weight 0: {d}^-1 in characteristic {p}")]
    HeckeUndefined { n: u64, d: u64, p: u64 },
    #[error("expected {expected}, got {got}")]
    MixedMetadata { expected: String, got: String },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("form file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// `a_0 + a_1 q + ... + a_B q^B + O(q^{B+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct QExpansion {
    field: FiniteField,
    coeffs: Vec<FieldElement>,
}

impl QExpansion {
    pub fn zero(field: &FiniteField, prec: u64) -> Self {
        QExpansion {
            field: field.clone(),
            coeffs: vec![field.zero(); prec as usize + 1],
        }
    }

    /// From coefficients `a_0..=a_B`; `B = coeffs.len() - 1`.
    pub fn new(field: &FiniteField, coeffs: Vec<FieldElement>) -> Result<Self, QError> {
        if coeffs.is_empty() {
            return Err(QError::PrecisionUnderflow(-1));
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(GfError::FieldMismatch.into());
        }
        Ok(QExpansion {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn from_ints(field: &FiniteField, coeffs: &[i64]) -> Self {
        QExpansion {
            field: field.clone(),
            coeffs: coeffs.iter().map(|&c| field.from_int(c)).collect(),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn prec(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `a_n`; panics past the precision.
    pub fn coeff(&self, n: u64) -> &FieldElement {
        &self.coeffs[n as usize]
    }

    pub fn get(&self, n: u64) -> Option<&FieldElement> {
        self.coeffs.get(n as usize)
    }

    pub fn set(&mut self, n: u64, v: FieldElement) {
        assert!(v.field() == &self.field, "field mismatch");
        self.coeffs[n as usize] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn truncate(&self, prec: u64) -> Self {
        let n = (prec.min(self.prec()) + 1) as usize;
        QExpansion {
            field: self.field.clone(),
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> Result<Self, QError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch.into());
        }
        Ok(QExpansion {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    /// Sum at the common precision.
    pub fn add(&self, other: &Self) -> Result<Self, QError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        QExpansion {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `f(q^d)`, known up to `d * prec`.
    pub fn stretch(&self, d: u64) -> Self {
        assert!(d >= 1);
        let mut out = Self::zero(&self.field, d * self.prec());
        for (m, a) in self.coeffs.iter().enumerate() {
            out.coeffs[m * d as usize] = a.clone();
        }
        out
    }

    /// Equality of `a_0..=a_B` with `B` the common precision.
    pub fn eq_upto_common(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }

    /// First index where the two expansions differ, over the common range.
    pub fn first_difference(&self, other: &Self) -> Option<u64> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
            .map(|i| i as u64)
    }
}

impl fmt::Debug for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{a:?}q^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec() + 1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormFlags {
    pub cuspidal: bool,
    pub asserted_newform: bool,
    pub asserted_minimal_weight: bool,
}

/// A mod-p modular form known through its truncated q-expansion.
#[derive(Clone, PartialEq, Eq)]
pub struct ModularForm {
    qexp: QExpansion,
    level: u64,
    weight: u64,
    character: DirichletCharacter,
    pub flags: FormFlags,
}

impl ModularForm {
    /// Checks `p ∤ N`, that the character's modulus divides `N` and that the
    /// character lives over the coefficient field. The character is stored
    /// at modulus `N`.
    pub fn new(
        qexp: QExpansion,
        level: u64,
        weight: u64,
        character: &DirichletCharacter,
        flags: FormFlags,
    ) -> Result<Self, QError> {
        let p = qexp.field().characteristic();
        if level == 0 || level % p == 0 {
            return Err(QError::CharacteristicDividesLevel { p, n: level });
        }
        if character.target() != qexp.field() {
            return Err(GfError::FieldMismatch.into());
        }
        let character = character.at_modulus(level)?;
        Ok(ModularForm {
            qexp,
            level,
            weight,
            character,
            flags,
        })
    }

    /// Level 1, trivial character.
    pub fn level_one(qexp: QExpansion, weight: u64, flags: FormFlags) -> Result<Self, QError> {
        let chi = DirichletCharacter::trivial(1, qexp.field());
        Self::new(qexp, 1, weight, &chi, flags)
    }

    pub fn qexp(&self) -> &QExpansion {
        &self.qexp
    }

    pub fn field(&self) -> &FiniteField {
        self.qexp.field()
    }

    pub fn p(&self) -> u64 {
        self.field().characteristic()
    }

    pub fn prec(&self) -> u64 {
        self.qexp.prec()
    }

    pub fn coeff(&self, n: u64) -> &FieldElement {
        self.qexp.coeff(n)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    /// `a_1 = 1`.
    pub fn normalized(&self) -> bool {
        self.qexp.get(1).is_some_and(FieldElement::is_one)
    }

    /// Same metadata, new expansion.
    pub fn with_qexp(&self, qexp: QExpansion) -> Self {
        assert!(qexp.field() == self.field(), "field mismatch");
        ModularForm {
            qexp,
            ..self.clone()
        }
    }

    pub fn with_weight(&self, weight: u64) -> Self {
        ModularForm {
            weight,
            ..self.clone()
        }
    }

    pub fn truncate(&self, prec: u64) -> Self {
        self.with_qexp(self.qexp.truncate(prec))
    }

    /// `f / a_1`.
    pub fn normalize(&self) -> Result<Self, QError> {
        let a1 = self.qexp.get(1).ok_or(QError::NotNormalizable)?;
        let inv = a1.inv().map_err(|_| QError::NotNormalizable)?;
        Ok(self.with_qexp(self.qexp.scale(&inv)))
    }

    /// Level, weight and primitive character agree.
    pub fn same_space(&self, other: &Self) -> Result<(), QError> {
        let key = |f: &ModularForm| format!("N={} k={} char={}", f.level, f.weight, f.character);
        if self.field() != other.field() || key(self) != key(other) {
            return Err(QError::MixedMetadata {
                expected: key(self),
                got: key(other),
            });
        }
        Ok(())
    }

    /// `k mod (p - 1)`.
    pub fn weight_class(&self) -> u64 {
        self.weight % (self.p() - 1).max(1)
    }
}

impl fmt::Debug for ModularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModularForm(N={}, k={}, {:?}, {:?})",
            self.level, self.weight, self.character, self.qexp
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// Multiplication by the Hasse invariant.
    A,
    Frob,
}

/// A word in `A` and `Frob`, read as a composition: the last letter acts first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightWord(pub Vec<Letter>);

impl WeightWord {
    /// Weight reached from `k`.
    pub fn weight(&self, k: u64, p: u64) -> u64 {
        self.0.iter().rev().fold(k, |w, l| match l {
            Letter::A => w + p - 1,
            Letter::Frob => p * w,
        })
    }

    pub fn frob_count(&self) -> u32 {
        self.0.iter().filter(|&&l| l == Letter::Frob).count() as u32
    }

    pub fn apply(&self, f: &ModularForm) -> ModularForm {
        self.0.iter().rev().fold(f.clone(), |g, l| match l {
            Letter::A => hasse_mult(&g, 1),
            Letter::Frob => frobenius(&g),
        })
    }

    /// All words with `frob_count` Frobenius letters reaching exactly `target`.
    pub fn enumerate(k: u64, p: u64, target: u64) -> Vec<WeightWord> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::<Letter>::new(), k)];
        while let Some((rev_word, w)) = stack.pop() {
            if w == target {
                let mut word = rev_word.clone();
                word.reverse();
                out.push(WeightWord(word));
            }
            for l in [Letter::A, Letter::Frob] {
                let nw = match l {
                    Letter::A => w + p - 1,
                    Letter::Frob => p * w,
                };
                // Frob on weight 0 never leaves 0; cut it to keep the search finite
                if nw <= target && nw != w {
                    let mut next = rev_word.clone();
                    next.push(l);
                    stack.push((next, nw));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
