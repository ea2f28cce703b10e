use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{poly, FiniteField, GfError};

/// An element of a [`FiniteField`], stored as `d` residues in `[0, p)`.
///
/// The arithmetic operators panic when the operands come from different
/// fields; the `checked_*` methods report [`GfError::FieldMismatch`] instead.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub(super) fn from_coeffs_unchecked(field: FiniteField, coeffs: Vec<u64>) -> Self {
        FieldElement { field, coeffs }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Canonical index `sum c_i p^i`.
    pub fn index(&self) -> u64 {
        let p = self.field.characteristic();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    /// `Some(c)` if the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    fn same_field(&self, other: &Self) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(Self::from_coeffs_unchecked(self.field.clone(), coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        Ok(Self::from_coeffs_unchecked(self.field.clone(), coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        let data = self.field.data();
        let p = data.p;
        if data.d == 1 {
            return Ok(Self::from_coeffs_unchecked(
                self.field.clone(),
                vec![self.coeffs[0] * other.coeffs[0] % p],
            ));
        }
        let mut prod = poly::rem_monic(poly::mul(&self.coeffs, &other.coeffs, p), &data.modulus, p);
        prod.resize(data.d as usize, 0);
        Ok(Self::from_coeffs_unchecked(self.field.clone(), prod))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow_u64(self.field.order() - 2))
    }

    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Any integer exponent; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self, GfError> {
        if e >= 0 {
            Ok(self.pow_u64(e as u64))
        } else {
            Ok(self.inv()?.pow_u64(e.unsigned_abs()))
        }
    }

    /// `a -> a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow_u64(self.field.characteristic())
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.order() - 1;
        let mut ord = n;
        for q in crate::arith::prime_divisors(n) {
            while ord % q == 0 && self.pow_u64(ord / q).is_one() {
                ord /= q;
            }
        }
        Some(ord)
    }

    /// Parses `[c_0,...,c_{d-1}]`; a bare integer is read in the prime field.
    pub fn parse_in(field: &FiniteField, s: &str) -> Result<Self, GfError> {
        let t = s.trim();
        let err = || GfError::Parse(s.to_string());
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let cs = crate::arith::parse_u64_list(inner).map_err(|_| err())?;
            if cs.iter().any(|&c| c >= field.characteristic()) {
                return Err(err());
            }
            field.element(&cs)
        } else {
            let n: i64 = t.parse().map_err(|_| err())?;
            Ok(field.from_int(n))
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        super::write_list(f, &self.coeffs)?;
        write!(f, "]")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_prime_field() {
            Some(c) if self.field.degree() == 1 => write!(f, "{c}"),
            _ => write!(f, "{self}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.characteristic();
        let coeffs = self.coeffs.iter().map(|&c| (p - c) % p).collect();
        FieldElement::from_coeffs_unchecked(self.field.clone(), coeffs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
