use super::{fmt_elem, NewformError};
use crate::arith;
use crate::gf::FieldElement;
use crate::qseries::{degeneracy_bd, is_eigen_upto, EigenCheck, FormFlags, ModularForm, QExpansion};

fn require_eigen(f: &ModularForm) -> Result<ModularForm, NewformError> {
    let g = f.normalize()?;
    match is_eigen_upto(&g, g.prec(), &[])? {
        EigenCheck::Eigen(_) => Ok(g),
        EigenCheck::Failure { l, m, .. } => Err(NewformError::NotEigenform { l, m }),
    }
}

/// `prod_{l in S} (1 - a_l(f) B_l) f` at level `N prod l`.
///
/// Each factor uses `U_l f = a_l f` to clear the coefficients at multiples
/// of `l`, and the factors commute, so the product clears every `l in S`
/// while leaving `a_n` alone for `n` prime to `S`. The first-order sum
/// `f - sum a_l f(q^l)` agrees with this only for `|S| <= 1`.
pub fn lemma31_kill(f: &ModularForm, s: &[u64]) -> Result<ModularForm, NewformError> {
    let mut primes: Vec<u64> = s.to_vec();
    primes.sort_unstable();
    primes.dedup();
    for &l in &primes {
        if !arith::is_prime(l) || f.level() % l != 0 {
            return Err(NewformError::SNotDividingLevel { l, level: f.level() });
        }
    }
    if primes.is_empty() {
        return Ok(f.clone());
    }
    let f = require_eigen(f)?;
    let mut g = f.clone();
    for &l in &primes {
        let level = g.level() * l;
        let shifted = degeneracy_bd(&g, l, level)?;
        let raised = degeneracy_bd(&g, 1, level)?;
        let qexp = raised.qexp().sub(&shifted.qexp().scale(f.coeff(l)))?;
        g = raised.with_qexp(qexp);
    }
    Ok(g)
}

/// Splits `f = A^r g(q^p)` when `theta f = 0`.
///
/// `r` is forced by `r + k ≡ 0 (mod p)`, and `g` has weight
/// `(k - r(p - 1)) / p` and coefficients `a_m(g) = a_{pm}(f)`.
pub fn theta_kernel_decompose(f: &ModularForm) -> Result<(u64, ModularForm), NewformError> {
    let p = f.p();
    if let Some(n) = (1..=f.prec()).find(|n| n % p != 0 && !f.coeff(*n).is_zero()) {
        return Err(NewformError::ThetaNonzero(n));
    }
    let k = f.weight();
    let r = (p - k % p) % p;
    let drop = r * (p - 1);
    if drop > k {
        return Err(NewformError::NegativeWeight { k, r });
    }
    let coeffs: Vec<FieldElement> = (0..=f.prec() / p).map(|m| f.coeff(p * m).clone()).collect();
    let mut g = f
        .with_qexp(QExpansion::new(f.field(), coeffs)?)
        .with_weight((k - drop) / p);
    g.flags = FormFlags {
        cuspidal: f.flags.cuspidal,
        ..FormFlags::default()
    };
    Ok((r, g))
}

/// `f - alpha' f(q^l)` at level `lN`, where `alpha + alpha' = a_l(f)`.
///
/// The result is a `U_l` eigenform with eigenvalue `alpha` and still a
/// `T_n` eigenform for `n` prime to `l`.
pub fn oldform_eigenform_at_l(
    f: &ModularForm,
    l: u64,
    alpha: &FieldElement,
) -> Result<ModularForm, NewformError> {
    let np = f.level() * f.p();
    if !arith::is_prime(l) || np % l == 0 {
        return Err(NewformError::BadAuxiliaryPrime { l, np });
    }
    let f = f.normalize()?;
    let field = f.field();
    let al = f.coeff(l).clone();
    let c = &f.character().eval(l as i64)
        * &field
            .from_u64(l)
            .pow(f.weight() as i64 - 1)
            .expect("l is prime to p");
    if !(&(&(alpha * alpha) - &(&al * alpha)) + &c).is_zero() {
        return Err(NewformError::NotARoot { alpha: fmt_elem(alpha) });
    }
    let other = &al - alpha;
    let level = f.level() * l;
    let raised = degeneracy_bd(&f, 1, level)?;
    let shifted = degeneracy_bd(&f, l, level)?;
    Ok(raised.with_qexp(raised.qexp().sub(&shifted.qexp().scale(&other))?))
}
