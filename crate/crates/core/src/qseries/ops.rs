use std::collections::BTreeMap;

use super::{FormFlags, ModularForm, QError, QExpansion};
use crate::arith;
use crate::gf::FieldElement;

fn derived_flags(f: &ModularForm) -> FormFlags {
    FormFlags {
        cuspidal: f.flags.cuspidal,
        ..FormFlags::default()
    }
}

/// `a_m(T_n f) = sum_{d | (m, n)} eps(d) d^{k-1} a_{mn/d^2}`, the nebentypus
/// taken at modulus `N` so that primes dividing the level act as `U_l`.
/// Output precision `floor(B / n)`.
pub fn hecke_tn(f: &ModularForm, n: u64) -> Result<ModularForm, QError> {
    assert!(n >= 1);
    let b = f.prec() / n;
    if b < 1 {
        return Err(QError::PrecisionUnderflow(b as i64));
    }
    let field = f.field();
    let k1 = f.weight() as i64 - 1;
    let mut factors = Vec::new();
    for d in arith::divisors(n) {
        let e = f.character().eval(d as i64);
        if e.is_zero() {
            continue;
        }
        let dk = field
            .from_u64(d)
            .pow(k1)
            .map_err(|_| QError::HeckeUndefined { n, d, p: f.p() })?;
        factors.push((d, e * dk));
    }
    let coeffs = (0..=b)
        .map(|m| {
            factors
                .iter()
                .filter(|(d, _)| m % d == 0)
                .fold(field.zero(), |acc, (d, c)| acc + c * f.coeff(m * n / (d * d)))
        })
        .collect();
    Ok(f.with_qexp(QExpansion::new(field, coeffs)?))
}

/// `<d> f = eps(d) f`.
pub fn diamond(f: &ModularForm, d: i64) -> Result<ModularForm, QError> {
    let du = d.rem_euclid(f.level() as i64) as u64;
    if arith::gcd(du, f.level()) != 1 {
        return Err(QError::NotCoprime {
            d: d.unsigned_abs(),
            level: f.level(),
        });
    }
    Ok(f.with_qexp(f.qexp().scale(&f.character().eval(d))))
}

/// `q d/dq`; weight goes up by `p + 1` and the result is cuspidal.
pub fn theta(f: &ModularForm) -> ModularForm {
    let field = f.field();
    let coeffs = f
        .qexp()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| a * &field.from_u64(n as u64))
        .collect();
    let mut g = f
        .with_qexp(QExpansion::new(field, coeffs).expect("same field"))
        .with_weight(f.weight() + f.p() + 1);
    g.flags = FormFlags {
        cuspidal: true,
        ..FormFlags::default()
    };
    g
}

/// Multiplication by `A^t`: expansion unchanged, weight `k + t(p - 1)`.
pub fn hasse_mult(f: &ModularForm, t: u64) -> ModularForm {
    if t == 0 {
        return f.clone();
    }
    let mut g = f.with_weight(f.weight() + t * (f.p() - 1));
    g.flags = derived_flags(f);
    g
}

/// `f(q^p)` in weight `pk`, precision `p B`.
pub fn frobenius(f: &ModularForm) -> ModularForm {
    let p = f.p();
    let mut g = f.with_qexp(f.qexp().stretch(p)).with_weight(p * f.weight());
    g.flags = derived_flags(f);
    g
}

/// `B_d^M f = f(q^d)` at level `M`; needs `N | M/d` and `p ∤ dM`.
pub fn degeneracy_bd(f: &ModularForm, d: u64, target_level: u64) -> Result<ModularForm, QError> {
    let p = f.p();
    if d % p == 0 {
        return Err(QError::CharacteristicDividesLevel { p, n: d });
    }
    if target_level % p == 0 {
        return Err(QError::CharacteristicDividesLevel { p, n: target_level });
    }
    if d == 0 || target_level % d != 0 || (target_level / d) % f.level() != 0 {
        return Err(QError::BadLevelDivisibility {
            level: f.level(),
            target: target_level,
            d,
        });
    }
    if d == 1 && target_level == f.level() {
        return Ok(f.clone());
    }
    ModularForm::new(
        f.qexp().stretch(d),
        target_level,
        f.weight(),
        f.character(),
        derived_flags(f),
    )
}

/// The unique `g` with `f(q) = g(q^l)`, at level `N/l`.
///
/// When `l ∤ N` the only such form is zero, so a nonzero `f` is reported as
/// inconsistent rather than divided.
pub fn divide_exponents(f: &ModularForm, l: u64) -> Result<ModularForm, QError> {
    let p = f.p();
    if l == p {
        return Err(QError::CharacteristicDividesLevel { p, n: l });
    }
    if let Some(m) = (1..=f.prec()).find(|m| m % l != 0 && !f.coeff(*m).is_zero()) {
        return Err(QError::NotPure(m));
    }
    let b = f.prec() / l;
    let coeffs: Vec<FieldElement> = (0..=b).map(|m| f.coeff(m * l).clone()).collect();
    let qexp = QExpansion::new(f.field(), coeffs)?;
    if f.level() % l != 0 {
        if !f.qexp().is_zero() {
            return Err(QError::NonIntegralLevel {
                l,
                level: f.level(),
            });
        }
        return Ok(f.with_qexp(qexp));
    }
    ModularForm::new(
        qexp,
        f.level() / l,
        f.weight(),
        f.character(),
        derived_flags(f),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenCheck {
    /// Eigenvalues `l -> a_l / a_1` for every prime checked.
    Eigen(BTreeMap<u64, FieldElement>),
    /// `a_m(T_l f) != a_l a_m(f)` for the normalized form.
    Failure {
        l: u64,
        m: u64,
        lhs: FieldElement,
        rhs: FieldElement,
    },
}

impl EigenCheck {
    pub fn is_eigen(&self) -> bool {
        matches!(self, EigenCheck::Eigen(_))
    }
}

/// Checks `T_l f = a_l f` for primes `l <= min(bound, B)` outside `exclude`,
/// comparing `a_0..=a_{floor(B/l)}` after normalizing `a_1 = 1`.
pub fn is_eigen_upto(f: &ModularForm, bound: u64, exclude: &[u64]) -> Result<EigenCheck, QError> {
    let g = f.normalize()?;
    let mut table = BTreeMap::new();
    for l in arith::primes_upto(bound.min(g.prec())) {
        if exclude.contains(&l) {
            continue;
        }
        let tl = hecke_tn(&g, l)?;
        let lambda = g.coeff(l).clone();
        for m in 0..=tl.prec() {
            let rhs = &lambda * g.coeff(m);
            if tl.coeff(m) != &rhs {
                return Ok(EigenCheck::Failure {
                    l,
                    m,
                    lhs: tl.coeff(m).clone(),
                    rhs,
                });
            }
        }
        table.insert(l, lambda);
    }
    Ok(EigenCheck::Eigen(table))
}
