//! Finite fields `GF(p^d)` in a polynomial basis.
//!
//! A [`FiniteField`] is a cheap handle (an `Arc`) around the characteristic,
//! the degree and a monic irreducible modulus. The modulus picked by
//! [`FiniteField::new`] is the lexicographically smallest monic irreducible of
//! the requested degree, reading coefficients from the constant term upwards.
//! This is deliberately not a Conway polynomial: it is simply deterministic, so
//! two sessions that ask for `GF(p^d)` agree bit for bit.
//!
//! Elements are ordered canonically by their index `sum c_i p^i`. That order
//! drives every "smallest generator" or "first root" choice in this module.

mod element;
mod poly;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::arith;

pub use element::FieldElement;

/// Characteristics must stay below this bound so products fit in `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;
/// Upper bound on the field order `p^d`.
pub const MAX_FIELD_ORDER: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("GF({p}^{d}) exceeds the supported field size")]
    DegreeOverflow { p: u64, d: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("GF({p}^{d}) has no primitive {n}-th root of unity")]
    NoSuchRoot { n: u64, p: u64, d: u32 },
    #[error("GF({p}^{from}) does not embed into GF({q}^{to})")]
    NoEmbedding { p: u64, from: u32, q: u64, to: u32 },
    #[error("modulus is not monic irreducible of the stated degree")]
    ReducibleModulus,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

struct FieldData {
    p: u64,
    d: u32,
    order: u64,
    /// Monic, low-to-high, length `d + 1`.
    modulus: Vec<u64>,
    generator: OnceLock<Vec<u64>>,
}

/// The field `GF(p^d)`.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl FiniteField {
    /// The canonical field of order `p^d`.
    pub fn new(p: u64, d: u32) -> Result<Self, GfError> {
        Self::check_params(p, d)?;
        let modulus = if d == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, d)
        };
        Ok(Self::from_parts(p, d, modulus))
    }

    /// Shorthand for the prime field.
    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, 1)
    }

    /// A field with an explicitly chosen modulus (low-to-high, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, GfError> {
        if modulus.len() < 2 {
            return Err(GfError::ReducibleModulus);
        }
        let d = (modulus.len() - 1) as u32;
        Self::check_params(p, d)?;
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(GfError::ReducibleModulus);
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(GfError::ReducibleModulus);
        }
        Ok(Self::from_parts(p, d, modulus))
    }

    fn check_params(p: u64, d: u32) -> Result<(), GfError> {
        if d == 0 {
            return Err(GfError::ZeroDegree);
        }
        if !arith::is_prime(p) {
            return Err(GfError::CompositeCharacteristic(p));
        }
        if p >= MAX_CHARACTERISTIC {
            return Err(GfError::DegreeOverflow { p, d });
        }
        match p.checked_pow(d) {
            Some(q) if q <= MAX_FIELD_ORDER => Ok(()),
            _ => Err(GfError::DegreeOverflow { p, d }),
        }
    }

    fn from_parts(p: u64, d: u32, modulus: Vec<u64>) -> Self {
        FiniteField(Arc::new(FieldData {
            p,
            d,
            order: p.pow(d),
            modulus,
            generator: OnceLock::new(),
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.d
    }

    /// Number of elements, `p^d`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_coeffs_unchecked(self.clone(), vec![0; self.0.d as usize])
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        let mut c = vec![0; self.0.d as usize];
        c[0] = n.rem_euclid(p) as u64;
        FieldElement::from_coeffs_unchecked(self.clone(), c)
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut c = vec![0; self.0.d as usize];
        c[0] = n % self.0.p;
        FieldElement::from_coeffs_unchecked(self.clone(), c)
    }

    /// The class of `x` in `F_p[x]/(modulus)`.
    pub fn gen_x(&self) -> FieldElement {
        if self.0.d == 1 {
            // modulus is x, so x = 0
            return self.zero();
        }
        let mut c = vec![0; self.0.d as usize];
        c[1] = 1;
        FieldElement::from_coeffs_unchecked(self.clone(), c)
    }

    /// Element from polynomial-basis coordinates; residues are reduced mod p.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, GfError> {
        if coeffs.len() != self.0.d as usize {
            return Err(GfError::Parse(format!(
                "expected {} coordinates, got {}",
                self.0.d,
                coeffs.len()
            )));
        }
        let p = self.0.p;
        Ok(FieldElement::from_coeffs_unchecked(
            self.clone(),
            coeffs.iter().map(|c| c % p).collect(),
        ))
    }

    /// Element with canonical index `idx = sum c_i p^i`.
    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        let p = self.0.p;
        let c = (0..self.0.d)
            .map(|_| {
                let r = idx % p;
                idx /= p;
                r
            })
            .collect();
        FieldElement::from_coeffs_unchecked(self.clone(), c)
    }

    /// Smallest generator of the multiplicative group in canonical order.
    pub fn multiplicative_generator(&self) -> FieldElement {
        let coeffs = self.0.generator.get_or_init(|| {
            let n = self.0.order - 1;
            let qs = arith::prime_divisors(n);
            (1..self.0.order)
                .map(|i| self.from_index(i))
                .find(|g| qs.iter().all(|&q| !g.pow_u64(n / q).is_one()))
                .expect("multiplicative group of a finite field is cyclic")
                .coeffs()
                .to_vec()
        });
        FieldElement::from_coeffs_unchecked(self.clone(), coeffs.clone())
    }

    /// The deterministic primitive `n`-th root of unity `g^((q-1)/n)`.
    pub fn nth_root_of_unity(&self, n: u64) -> Result<FieldElement, GfError> {
        let q1 = self.0.order - 1;
        if n == 0 || n % self.0.p == 0 || q1 % n != 0 {
            return Err(GfError::NoSuchRoot {
                n,
                p: self.0.p,
                d: self.0.d,
            });
        }
        Ok(self.multiplicative_generator().pow_u64(q1 / n))
    }

    /// Canonical embedding of `a` into `target`.
    ///
    /// The root of `a`'s modulus is sent to its smallest conjugate in `target`.
    pub fn embed(a: &FieldElement, target: &FiniteField) -> Result<FieldElement, GfError> {
        let src = a.field();
        if src == target {
            return Ok(a.clone());
        }
        let (p, d, d2) = (src.characteristic(), src.degree(), target.degree());
        if p != target.characteristic() || d2 % d != 0 {
            return Err(GfError::NoEmbedding {
                p,
                from: d,
                q: target.characteristic(),
                to: d2,
            });
        }
        let root = src.image_of_x(target);
        // Horner in the target field
        let mut acc = target.zero();
        for &c in a.coeffs().iter().rev() {
            acc = &(&acc * &root) + &target.from_u64(c);
        }
        Ok(acc)
    }

    fn image_of_x(&self, target: &FiniteField) -> FieldElement {
        let d = self.degree();
        if d == 1 {
            // modulus x has the single root 0
            return target.zero();
        }
        // roots of an irreducible degree-d polynomial live in the subgroup of
        // order p^d - 1 of target^*
        let sub_order = self.order() - 1;
        let h = target
            .multiplicative_generator()
            .pow_u64((target.order() - 1) / sub_order);
        let modulus: Vec<FieldElement> =
            self.modulus().iter().map(|&c| target.from_u64(c)).collect();
        let eval = |x: &FieldElement| {
            modulus
                .iter()
                .rev()
                .fold(target.zero(), |acc, c| &(&acc * x) + c)
        };
        let mut cur = target.one();
        let mut found = None;
        for _ in 0..sub_order {
            if eval(&cur).is_zero() {
                found = Some(cur.clone());
                break;
            }
            cur = &cur * &h;
        }
        let r = found.expect("irreducible modulus splits in an extension of divisible degree");
        let mut best = r.clone();
        let mut conj = r;
        for _ in 1..d {
            conj = conj.frobenius();
            if conj.index() < best.index() {
                best = conj.clone();
            }
        }
        best
    }

    fn data(&self) -> &FieldData {
        &self.0
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{};", self.0.p, self.0.d)?;
        write_list(f, &self.0.modulus)?;
        write!(f, ")")
    }
}

impl FromStr for FiniteField {
    type Err = GfError;

    /// Parses `GF(p^d;c_0,...,c_d)`, or the short forms `GF(p^d)` and `p^d`.
    fn from_str(s: &str) -> Result<Self, GfError> {
        let err = || GfError::Parse(s.to_string());
        let t = s.trim();
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        let (pd, modulus) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (inner, None),
        };
        let (p, d) = match pd.split_once('^') {
            Some((p, d)) => (
                p.trim().parse::<u64>().map_err(|_| err())?,
                d.trim().parse::<u32>().map_err(|_| err())?,
            ),
            None => (pd.trim().parse::<u64>().map_err(|_| err())?, 1),
        };
        match modulus {
            None => FiniteField::new(p, d),
            Some(m) => {
                let coeffs = arith::parse_u64_list(m).map_err(|_| err())?;
                if coeffs.len() != d as usize + 1 {
                    return Err(err());
                }
                FiniteField::with_modulus(p, coeffs)
            }
        }
    }
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    for (i, c) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Lexicographically smallest monic irreducible of degree `d`, comparing
/// `(c_0, c_1, ..., c_{d-1})`.
fn smallest_irreducible(p: u64, d: u32) -> Vec<u64> {
    let total = p.pow(d);
    (0..total)
        .map(|idx| {
            let mut m: Vec<u64> = (0..d)
                .map(|i| idx / p.pow(d - 1 - i) % p)
                .collect();
            m.push(1);
            m
        })
        .find(|m| m[0] != 0 && poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}
