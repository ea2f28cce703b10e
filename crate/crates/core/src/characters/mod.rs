//! Dirichlet characters with values in a finite field, their lifts to
//! cyclotomic fields, and generalized Bernoulli numbers.
//!
//! A character is stored as an exponent vector: with `n` its order and
//! `omega` the canonical primitive `n`-th root of unity of the target field,
//! the value on the `i`-th generator of `(Z/NZ)^*` is `omega^{e_i}`. The lift
//! to characteristic zero replaces `omega` by `zeta_n`, so lifting and reducing
//! are inverse by construction.

mod bernoulli;
mod cyclo;
mod group;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith;
use crate::gf::{FieldElement, FiniteField, GfError};

pub use bernoulli::{classical_bernoulli, gen_bernoulli};
pub use cyclo::{cyclotomic_polynomial, p_integral_check, CycloParseError, CycloRational};
pub use group::unit_group_generators;

#[allow(unused_imports)]
pub(crate) use cyclo::{fmt_rational, parse_rational};
use group::UnitGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("value at generator {generator} has order not dividing {generator_order}")]
    BadOrder { generator: u64, generator_order: u64 },
    #[error("no value assigned to generator {0}")]
    IncompleteAssignment(u64),
    #[error("{0} is not a canonical generator of the unit group")]
    UnknownGenerator(u64),
    #[error("character order {order} is divisible by the characteristic {p}")]
    RamifiedOrder { order: u64, p: u64 },
    #[error("character modulo {modulus} is imprimitive (conductor {conductor})")]
    Imprimitive { modulus: u64, conductor: u64 },
    #[error("modulus {from} does not divide {to}")]
    ModulusNotDividing { from: u64, to: u64 },
    #[error("characters take values in different fields")]
    FieldMismatch,
    #[error("denominator divisible by {0}; reduction undefined")]
    NotPIntegral(u64),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("cannot parse character {0:?}")]
    Parse(String),
}

/// Shared combinatorial data of a character: group, order and exponents.
#[derive(Clone)]
struct CharData {
    group: Arc<UnitGroup>,
    order: u64,
    exps: Vec<u64>,
    conductor: u64,
}

impl CharData {
    fn new(group: Arc<UnitGroup>, order: u64, exps: Vec<u64>) -> Self {
        let (order, exps) = normalize_order(order, exps);
        let mut data = CharData {
            group,
            order,
            exps,
            conductor: 0,
        };
        data.conductor = data.compute_conductor();
        data
    }

    fn modulus(&self) -> u64 {
        self.group.modulus
    }

    fn exponent_at(&self, m: i64) -> Option<u64> {
        let n = self.group.modulus;
        let r = m.rem_euclid(n as i64) as u64;
        let logs = self.group.log(r)?;
        Some(
            logs.iter()
                .zip(&self.exps)
                .fold(0u64, |acc, (&x, &e)| (acc + x % self.order * e) % self.order),
        )
    }

    /// Exponent contribution of one component at a local residue.
    fn local_exponent(&self, comp: usize, residue: u64) -> Option<u64> {
        let c = &self.group.components[comp];
        let log = c.log(residue)?;
        let mut acc = 0u64;
        for (gi, g) in self.group.generators.iter().enumerate() {
            if g.component == comp {
                acc = (acc + log[g.slot] as u64 % self.order * self.exps[gi]) % self.order;
            }
        }
        Some(acc)
    }

    fn compute_conductor(&self) -> u64 {
        let mut cond = 1u64;
        for (ci, c) in self.group.components.iter().enumerate() {
            let b = (0..=c.exp)
                .find(|&b| {
                    let step = c.prime.pow(b);
                    (0..c.modulus / step)
                        .map(|j| 1 + j * step)
                        .filter(|x| x % c.prime != 0)
                        .all(|x| self.local_exponent(ci, x % c.modulus) == Some(0))
                })
                .unwrap_or(c.exp);
            cond *= c.prime.pow(b);
        }
        cond
    }

    fn primitive(&self) -> CharData {
        if self.conductor == self.modulus() {
            return self.clone();
        }
        let group = Arc::new(UnitGroup::new(self.conductor));
        let exps = group
            .generators
            .iter()
            .map(|g| {
                let prime = group.components[g.component].prime;
                let local_mod = group.components[g.component].modulus;
                let ci = self
                    .group
                    .components
                    .iter()
                    .position(|c| c.prime == prime)
                    .expect("conductor divides modulus");
                self.local_exponent(ci, g.residue % local_mod)
                    .expect("generator residues are units")
            })
            .collect();
        CharData::new(group, self.order, exps)
    }

    fn extend(&self, modulus: u64) -> Result<CharData, CharError> {
        if modulus % self.modulus() != 0 {
            return Err(CharError::ModulusNotDividing {
                from: self.modulus(),
                to: modulus,
            });
        }
        if modulus == self.modulus() {
            return Ok(self.clone());
        }
        let group = Arc::new(UnitGroup::new(modulus));
        let exps = group
            .generators
            .iter()
            .map(|g| self.exponent_at(g.residue as i64).expect("units map to units"))
            .collect();
        Ok(CharData::new(group, self.order, exps))
    }

    fn mul(&self, other: &CharData) -> CharData {
        let m = arith::lcm(self.modulus(), other.modulus());
        let a = self.extend(m).expect("lcm is a multiple");
        let b = other.extend(m).expect("lcm is a multiple");
        let n = arith::lcm(a.order, b.order);
        let exps = a
            .exps
            .iter()
            .zip(&b.exps)
            .map(|(&x, &y)| (x * (n / a.order) + y * (n / b.order)) % n)
            .collect();
        CharData::new(a.group.clone(), n, exps)
    }

    fn is_odd(&self) -> bool {
        self.order % 2 == 0 && self.exponent_at(-1) == Some(self.order / 2)
    }

    fn same_as(&self, other: &CharData) -> bool {
        self.modulus() == other.modulus() && self.order == other.order && self.exps == other.exps
    }
}

/// Reduce `(n, exps)` so that `n` is the exact order.
fn normalize_order(n: u64, exps: Vec<u64>) -> (u64, Vec<u64>) {
    let exps: Vec<u64> = exps.into_iter().map(|e| e % n).collect();
    let actual = exps
        .iter()
        .fold(1u64, |acc, &e| arith::lcm(acc, n / arith::gcd(n, e)));
    let shrink = n / actual;
    (actual, exps.into_iter().map(|e| e / shrink).collect())
}

/// A Dirichlet character `(Z/NZ)^* -> target^*`, extended by zero.
#[derive(Clone)]
pub struct DirichletCharacter {
    data: CharData,
    target: FiniteField,
    powers: Arc<Vec<FieldElement>>,
}

impl DirichletCharacter {
    /// Build from values on the canonical generators (see [`unit_group_generators`]).
    pub fn new(
        modulus: u64,
        assignments: &[(u64, FieldElement)],
        target: &FiniteField,
    ) -> Result<Self, CharError> {
        let group = Arc::new(UnitGroup::new(modulus.max(1)));
        for (g, v) in assignments {
            if v.field() != target {
                return Err(CharError::FieldMismatch);
            }
            if !group.generators.iter().any(|gen| gen.residue == g % group.modulus) {
                return Err(CharError::UnknownGenerator(*g));
            }
        }
        let mut values = Vec::with_capacity(group.generators.len());
        let mut order = 1u64;
        for gen in &group.generators {
            let v = assignments
                .iter()
                .find(|(g, _)| g % group.modulus == gen.residue)
                .map(|(_, v)| v)
                .ok_or(CharError::IncompleteAssignment(gen.residue))?;
            let bad = CharError::BadOrder {
                generator: gen.residue,
                generator_order: gen.order,
            };
            let vo = v.multiplicative_order().ok_or(bad.clone())?;
            if gen.order % vo != 0 {
                return Err(bad);
            }
            order = arith::lcm(order, vo);
            values.push(v.clone());
        }
        let omega = target.nth_root_of_unity(order)?;
        let powers = power_table(&omega, order);
        let exps = values
            .iter()
            .map(|v| {
                powers
                    .iter()
                    .position(|w| w == v)
                    .expect("value order divides the character order") as u64
            })
            .collect();
        Ok(Self::from_data(CharData::new(group, order, exps), target))
    }

    pub fn trivial(modulus: u64, target: &FiniteField) -> Self {
        let group = Arc::new(UnitGroup::new(modulus.max(1)));
        let exps = vec![0; group.generators.len()];
        Self::from_data(CharData::new(group, 1, exps), target)
    }

    fn from_data(data: CharData, target: &FiniteField) -> Self {
        let omega = target
            .nth_root_of_unity(data.order)
            .expect("order divides the field's unit group order");
        let powers = Arc::new(power_table(&omega, data.order));
        DirichletCharacter {
            data,
            target: target.clone(),
            powers,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.data.modulus()
    }

    pub fn conductor(&self) -> u64 {
        self.data.conductor
    }

    pub fn order(&self) -> u64 {
        self.data.order
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn is_trivial(&self) -> bool {
        self.data.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.data.conductor == self.modulus()
    }

    /// `chi(-1) = -1`.
    pub fn is_odd(&self) -> bool {
        self.data.is_odd()
    }

    /// `chi(m)`; zero when `gcd(m, N) > 1`.
    pub fn eval(&self, m: i64) -> FieldElement {
        match self.data.exponent_at(m) {
            Some(e) => self.powers[e as usize].clone(),
            None => self.target.zero(),
        }
    }

    pub fn values_on_generators(&self) -> Vec<(u64, FieldElement)> {
        self.data
            .group
            .generators
            .iter()
            .zip(&self.data.exps)
            .map(|(g, &e)| (g.residue, self.powers[e as usize].clone()))
            .collect()
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        Self::from_data(self.data.primitive(), &self.target)
    }

    /// The same character viewed modulo a multiple `modulus` of `N`.
    pub fn extend(&self, modulus: u64) -> Result<Self, CharError> {
        Ok(Self::from_data(self.data.extend(modulus)?, &self.target))
    }

    /// Reinterpret at `modulus`, which must be a multiple of the conductor.
    pub fn at_modulus(&self, modulus: u64) -> Result<Self, CharError> {
        if modulus % self.conductor() != 0 {
            return Err(CharError::ModulusNotDividing {
                from: self.conductor(),
                to: modulus,
            });
        }
        self.primitive().extend(modulus)
    }

    /// Pointwise product, at modulus `lcm` of the two moduli.
    pub fn mul(&self, other: &Self) -> Result<Self, CharError> {
        if self.target != other.target {
            return Err(CharError::FieldMismatch);
        }
        Ok(Self::from_data(self.data.mul(&other.data), &self.target))
    }

    /// Equality of the induced primitive characters.
    pub fn same_primitive(&self, other: &Self) -> bool {
        self.target == other.target && self.data.primitive().same_as(&other.data.primitive())
    }

    /// The characteristic-zero lift and its reduction map.
    pub fn lift(&self) -> Result<(LiftedCharacter, ReductionMap), CharError> {
        let p = self.target.characteristic();
        if self.data.order % p == 0 {
            return Err(CharError::RamifiedOrder {
                order: self.data.order,
                p,
            });
        }
        Ok((
            LiftedCharacter {
                data: self.data.clone(),
            },
            ReductionMap {
                target: self.target.clone(),
            },
        ))
    }

    /// Parses `chi(N;g1:v1,g2:v2)`; `triv` is the trivial character mod 1.
    pub fn parse(s: &str, target: &FiniteField) -> Result<Self, CharError> {
        let err = || CharError::Parse(s.to_string());
        let t = s.trim();
        if t == "triv" || t == "trivial" || t == "1" {
            return Ok(Self::trivial(1, target));
        }
        let inner = t
            .strip_prefix("chi(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (n, rest) = match inner.split_once(';') {
            Some((n, rest)) => (n, rest),
            None => (inner, ""),
        };
        let modulus: u64 = n.trim().parse().map_err(|_| err())?;
        if modulus == 0 {
            return Err(err());
        }
        let mut assignments = Vec::new();
        for part in split_top_level(rest) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (g, v) = part.split_once(':').ok_or_else(err)?;
            let g: u64 = g.trim().parse().map_err(|_| err())?;
            let v = FieldElement::parse_in(target, v)?;
            assignments.push((g, v));
        }
        Self::new(modulus, &assignments, target)
    }
}

/// Split on commas that are not inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn power_table(omega: &FieldElement, n: u64) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(n as usize);
    let mut cur = omega.field().one();
    for _ in 0..n {
        out.push(cur.clone());
        cur = &cur * omega;
    }
    out
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target && self.data.same_as(&other.data)
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals = self.values_on_generators();
        if vals.is_empty() {
            return write!(f, "chi({})", self.modulus());
        }
        write!(f, "chi({};", self.modulus())?;
        for (i, (g, v)) in vals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}:{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A character with values in `Q(zeta_n)`, `n` its order.
#[derive(Clone)]
pub struct LiftedCharacter {
    data: CharData,
}

impl LiftedCharacter {
    /// The trivial character modulo 1.
    pub fn trivial() -> Self {
        LiftedCharacter {
            data: CharData::new(Arc::new(UnitGroup::new(1)), 1, vec![]),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.data.modulus()
    }

    pub fn conductor(&self) -> u64 {
        self.data.conductor
    }

    pub fn order(&self) -> u64 {
        self.data.order
    }

    pub fn is_trivial(&self) -> bool {
        self.data.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.data.conductor == self.data.modulus()
    }

    pub fn is_odd(&self) -> bool {
        self.data.is_odd()
    }

    pub fn primitive(&self) -> Self {
        LiftedCharacter {
            data: self.data.primitive(),
        }
    }

    /// `e` with `chi(m) = zeta_n^e`, or `None` when `gcd(m, N) > 1`.
    pub fn exponent_at(&self, m: i64) -> Option<u64> {
        self.data.exponent_at(m)
    }

    pub fn eval(&self, m: i64) -> CycloRational {
        match self.exponent_at(m) {
            Some(e) => CycloRational::root_of_unity(self.data.order, e),
            None => CycloRational::zero(self.data.order),
        }
    }

    /// Values on the generators as cyclotomic numbers.
    pub fn values_on_generators(&self) -> Vec<(u64, CycloRational)> {
        self.data
            .group
            .generators
            .iter()
            .zip(&self.data.exps)
            .map(|(g, &e)| (g.residue, CycloRational::root_of_unity(self.data.order, e)))
            .collect()
    }
}

impl fmt::Debug for LiftedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({};", self.modulus())?;
        for (g, v) in self.values_on_generators() {
            write!(f, " {g}:{v}")?;
        }
        write!(f, ")")
    }
}

/// Reduction `Z_(p)[zeta_n] -> GF(p^d)` sending `zeta_n` to the canonical
/// primitive `n`-th root of unity.
#[derive(Clone, Debug)]
pub struct ReductionMap {
    target: FiniteField,
}

impl ReductionMap {
    pub fn new(target: &FiniteField) -> Self {
        ReductionMap {
            target: target.clone(),
        }
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn reduce_rational(&self, q: &num_rational::BigRational) -> Result<FieldElement, CharError> {
        let p = self.target.characteristic();
        let pb = num_bigint::BigInt::from(p);
        let num = residue(q.numer(), &pb);
        let den = residue(q.denom(), &pb);
        if den == 0 {
            return Err(CharError::NotPIntegral(p));
        }
        Ok(self
            .target
            .from_u64(num)
            .checked_div(&self.target.from_u64(den))?)
    }

    pub fn reduce(&self, x: &CycloRational) -> Result<FieldElement, CharError> {
        let omega = self.target.nth_root_of_unity(x.order())?;
        let mut acc = self.target.zero();
        let mut pow = self.target.one();
        for c in x.coords() {
            acc = &acc + &(&self.reduce_rational(c)? * &pow);
            pow = &pow * &omega;
        }
        Ok(acc)
    }
}

fn residue(x: &num_bigint::BigInt, p: &num_bigint::BigInt) -> u64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    x.mod_floor(p).to_u64().expect("residue below p")
}
