//! Eisenstein series: exact expansions over cyclotomic fields, their
//! reductions mod p, and the reducible Galois data they carry.
//!
//! Conventions follow the divisor-sum definition
//! `a_m = sum_{d | m} eps1(d) eps2(m/d) d^{k-1}` with constant term
//! `-B_k^{eps1} / 2k` when `eps2` has conductor 1 and zero otherwise. In the
//! mod-p API the pair is written `(eps, eps')`, `eps` weighting `d^{k-1}`, so
//! the eigenvalue of `T_l` is `eps(l) l^{k-1} + eps'(l)` and the attached
//! representation is `eps' + eps chi_p^{k-1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith;
use crate::characters::{
    gen_bernoulli, CharError, CycloRational, DirichletCharacter, LiftedCharacter, ReductionMap,
};
use crate::gf::FieldElement;
use crate::qseries::{FormFlags, ModularForm, QError, QExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EisError {
    #[error("(eps1 eps2)(-1) != (-1)^{k}")]
    ParityViolation { k: u64 },
    #[error("E_2 with trivial characters needs t > 1")]
    IllegalE2,
    #[error("weight must be at least 1 and t at least 1")]
    BadParameters,
    #[error("p = {p} divides the denominator of the constant term {c0}")]
    NotPIntegral { p: u64, c0: String },
    #[error("p = {p} divides the level {level}")]
    CharacteristicDividesLevel { p: u64, level: u64 },
    #[error("{l} is not a prime prime to {bad}")]
    BadPrime { l: u64, bad: u64 },
    #[error("characters take values in different fields")]
    FieldMismatch,
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Form(#[from] QError),
}

/// `E_k^{eps1, eps2}` stretched by `t`. Characters are kept primitive.
#[derive(Clone, Debug)]
pub struct EisensteinSpec {
    k: u64,
    eps1: LiftedCharacter,
    eps2: LiftedCharacter,
    t: u64,
}

impl EisensteinSpec {
    pub fn new(
        k: u64,
        eps1: &LiftedCharacter,
        eps2: &LiftedCharacter,
        t: u64,
    ) -> Result<Self, EisError> {
        if k == 0 || t == 0 {
            return Err(EisError::BadParameters);
        }
        let (eps1, eps2) = (eps1.primitive(), eps2.primitive());
        if (eps1.is_odd() != eps2.is_odd()) != (k % 2 == 1) {
            return Err(EisError::ParityViolation { k });
        }
        if k == 2 && eps1.is_trivial() && eps2.is_trivial() && t == 1 {
            return Err(EisError::IllegalE2);
        }
        Ok(EisensteinSpec { k, eps1, eps2, t })
    }

    pub fn weight(&self) -> u64 {
        self.k
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// `t u v`, or `t` for the weight-2 combination.
    pub fn level(&self) -> u64 {
        self.t * self.eps1.conductor() * self.eps2.conductor()
    }

    fn is_e2_combination(&self) -> bool {
        self.k == 2 && self.eps1.is_trivial() && self.eps2.is_trivial()
    }

    /// Constant term of the unstretched series.
    pub fn c0(&self) -> Result<CycloRational, EisError> {
        if self.eps2.conductor() != 1 {
            return Ok(CycloRational::zero(self.eps1.order()));
        }
        let b = gen_bernoulli(self.k, &self.eps1)?;
        let two_k = BigRational::from_integer(BigInt::from(2 * self.k));
        Ok(b.scale(&(-BigRational::from_integer(1.into()) / two_k)))
    }
}

/// Exact `q`-expansion with coefficients in `Q(zeta_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactExpansion {
    pub level: u64,
    pub coeffs: Vec<CycloRational>,
}

fn divisor_sum_exact(spec: &EisensteinSpec, m: u64, n: u64) -> CycloRational {
    let (n1, n2) = (spec.eps1.order(), spec.eps2.order());
    let mut by_exp = vec![BigInt::from(0); n as usize];
    for d in arith::divisors(m) {
        let (Some(e1), Some(e2)) = (
            spec.eps1.exponent_at(d as i64),
            spec.eps2.exponent_at((m / d) as i64),
        ) else {
            continue;
        };
        let e = (e1 * (n / n1) + e2 * (n / n2)) % n;
        by_exp[e as usize] += BigInt::from(d).pow(spec.k as u32 - 1);
    }
    CycloRational::from_poly(
        n,
        by_exp.into_iter().map(BigRational::from_integer).collect(),
    )
}

/// Coefficients `a_0..=a_B` of the series described by `spec`.
pub fn eisenstein_qexp(spec: &EisensteinSpec, prec: u64) -> Result<ExactExpansion, EisError> {
    let n = arith::lcm(spec.eps1.order(), spec.eps2.order());
    let c0 = spec.c0()?.lift_to(arith::lcm(n, spec.c0()?.order()));
    let base: Vec<CycloRational> = std::iter::once(c0)
        .chain((1..=prec).map(|m| divisor_sum_exact(spec, m, n)))
        .collect();
    let t = spec.t;
    let stretched = |m: u64| {
        if m % t == 0 {
            base[(m / t) as usize].clone()
        } else {
            CycloRational::zero(n)
        }
    };
    let coeffs = if t == 1 {
        base.clone()
    } else if spec.is_e2_combination() {
        let tq = BigRational::from_integer(BigInt::from(t));
        (0..=prec)
            .map(|m| base[m as usize].sub(&stretched(m).scale(&tq)))
            .collect()
    } else {
        (0..=prec).map(stretched).collect()
    };
    let level = if spec.is_e2_combination() { t } else { spec.level() };
    Ok(ExactExpansion { level, coeffs })
}

/// Semisimple `eps' chi_p^a + eps chi_p^b`, exponents mod `p - 1`.
#[derive(Clone, Debug)]
pub struct ReducibleRep {
    pub eps_prime: DirichletCharacter,
    pub a: u64,
    pub eps: DirichletCharacter,
    pub b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepMatch {
    Direct,
    Swapped,
}

impl ReducibleRep {
    pub fn new(eps_prime: &DirichletCharacter, a: u64, eps: &DirichletCharacter, b: u64) -> Self {
        let m = eps.target().characteristic() - 1;
        ReducibleRep {
            eps_prime: eps_prime.primitive(),
            a: a % m.max(1),
            eps: eps.primitive(),
            b: b % m.max(1),
        }
    }

    pub fn p(&self) -> u64 {
        self.eps.target().characteristic()
    }

    /// Both summands twisted by `chi_p^c`.
    pub fn twist(&self, c: u64) -> Self {
        ReducibleRep::new(&self.eps_prime, self.a + c, &self.eps, self.b + c)
    }

    /// Conductor part of the level: `lcm` of the two character moduli.
    pub fn conductor(&self) -> u64 {
        arith::lcm(self.eps.modulus(), self.eps_prime.modulus())
    }
}

/// `(eps'(l) l^a + eps(l) l^b, eps eps'(l) l^{a+b})` for primes `l ∤ pN`.
pub fn rep_trace_det(
    rho: &ReducibleRep,
    l: u64,
    level: u64,
) -> Result<(FieldElement, FieldElement), EisError> {
    let p = rho.p();
    let bad = arith::lcm(p * rho.conductor(), level.max(1));
    if !arith::is_prime(l) || bad % l == 0 {
        return Err(EisError::BadPrime { l, bad });
    }
    let field = rho.eps.target();
    let lf = field.from_u64(l);
    let x = &rho.eps_prime.eval(l as i64) * &lf.pow_u64(rho.a);
    let y = &rho.eps.eval(l as i64) * &lf.pow_u64(rho.b);
    let det = &x * &y;
    Ok((&x + &y, det))
}

/// Whether the two unordered pairs `{(eps', a), (eps, b)}` coincide.
pub fn rep_equiv(r1: &ReducibleRep, r2: &ReducibleRep) -> Option<RepMatch> {
    let same = |c1: &DirichletCharacter, e1: u64, c2: &DirichletCharacter, e2: u64| {
        e1 == e2 && c1.same_primitive(c2)
    };
    if same(&r1.eps_prime, r1.a, &r2.eps_prime, r2.a) && same(&r1.eps, r1.b, &r2.eps, r2.b) {
        Some(RepMatch::Direct)
    } else if same(&r1.eps_prime, r1.a, &r2.eps, r2.b) && same(&r1.eps, r1.b, &r2.eps_prime, r2.a)
    {
        Some(RepMatch::Swapped)
    } else {
        None
    }
}

/// A reduced Eisenstein series with its representation.
#[derive(Clone, Debug)]
pub struct KatzEisenstein {
    pub form: ModularForm,
    pub rep: ReducibleRep,
    /// Exact constant term before reduction.
    pub c0: CycloRational,
}

/// Reduction mod p of `E_k^{eps, eps'}` (stretched by `t`).
///
/// Coefficients `a_m`, `m >= 1`, are evaluated directly in the target field;
/// this agrees with reducing the exact series because reduction is a ring map
/// sending each lifted character value to the field value. The constant term
/// goes through the exact Bernoulli number and must be `p`-integral.
pub fn katz_eisenstein(
    k: u64,
    eps: &DirichletCharacter,
    eps_prime: &DirichletCharacter,
    t: u64,
    prec: u64,
) -> Result<KatzEisenstein, EisError> {
    if eps.target() != eps_prime.target() {
        return Err(EisError::FieldMismatch);
    }
    let field = eps.target().clone();
    let p = field.characteristic();
    let (e, ep) = (eps.primitive(), eps_prime.primitive());
    let (l1, red) = e.lift()?;
    let (l2, _) = ep.lift()?;
    let spec = EisensteinSpec::new(k, &l1, &l2, t)?;
    let level = if spec.is_e2_combination() { t } else { spec.level() };
    if level % p == 0 {
        return Err(EisError::CharacteristicDividesLevel { p, level });
    }
    let c0 = spec.c0()?;
    if !c0.is_p_integral(p) {
        return Err(EisError::NotPIntegral {
            p,
            c0: c0.to_string(),
        });
    }
    let c0_red = red.reduce(&c0)?;

    let base: Vec<FieldElement> = std::iter::once(c0_red)
        .chain((1..=prec).map(|m| divisor_sum_field(&e, &ep, k, m)))
        .collect();
    let coeffs: Vec<FieldElement> = if t == 1 {
        base
    } else {
        let tf = field.from_u64(t);
        (0..=prec)
            .map(|m| {
                let s = if m % t == 0 {
                    base[(m / t) as usize].clone()
                } else {
                    field.zero()
                };
                if spec.is_e2_combination() {
                    &base[m as usize] - &(&s * &tf)
                } else {
                    s
                }
            })
            .collect()
    };
    let chi = e.mul(&ep)?;
    let form = ModularForm::new(
        QExpansion::new(&field, coeffs)?,
        level,
        k,
        &chi,
        FormFlags::default(),
    )?;
    Ok(KatzEisenstein {
        form,
        rep: ReducibleRep::new(&ep, 0, &e, k - 1),
        c0,
    })
}

fn divisor_sum_field(
    eps: &DirichletCharacter,
    eps_prime: &DirichletCharacter,
    k: u64,
    m: u64,
) -> FieldElement {
    let field = eps.target();
    arith::divisors(m).into_iter().fold(field.zero(), |acc, d| {
        let a = eps.eval(d as i64);
        if a.is_zero() {
            return acc;
        }
        let b = eps_prime.eval((m / d) as i64);
        acc + &(&a * &b) * &field.from_u64(d).pow_u64(k - 1)
    })
}

/// Reduction of an exact expansion along `red`.
pub fn reduce_expansion(
    exact: &ExactExpansion,
    red: &ReductionMap,
) -> Result<QExpansion, EisError> {
    let coeffs = exact
        .coeffs
        .iter()
        .map(|c| red.reduce(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QExpansion::new(red.target(), coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;
    use crate::qseries::{hecke_tn, is_eigen_upto, EigenCheck};

    fn q(a: i64, b: i64) -> CycloRational {
        CycloRational::from_rational(1, BigRational::new(a.into(), b.into()))
    }

    fn f7() -> FiniteField {
        FiniteField::prime(7).unwrap()
    }

    fn chi4(f: &FiniteField) -> DirichletCharacter {
        DirichletCharacter::new(4, &[(3, f.from_int(-1))], f).unwrap()
    }

    fn chi3(f: &FiniteField) -> DirichletCharacter {
        DirichletCharacter::new(3, &[(2, f.from_int(-1))], f).unwrap()
    }

    #[test]
    fn exact_e4() {
        let t = LiftedCharacter::trivial();
        let spec = EisensteinSpec::new(4, &t, &t, 1).unwrap();
        let e = eisenstein_qexp(&spec, 6).unwrap();
        assert_eq!(e.coeffs[0], q(1, 240));
        assert_eq!(e.coeffs[1], q(1, 1));
        assert_eq!(e.coeffs[2], q(9, 1));
        assert_eq!(e.coeffs[6], q(252, 1));
        assert_eq!(e.level, 1);
    }

    #[test]
    fn exact_e2_combination() {
        let t = LiftedCharacter::trivial();
        assert!(matches!(EisensteinSpec::new(2, &t, &t, 1), Err(EisError::IllegalE2)));
        let spec = EisensteinSpec::new(2, &t, &t, 2).unwrap();
        let e = eisenstein_qexp(&spec, 4).unwrap();
        assert_eq!(e.level, 2);
        assert_eq!(e.coeffs[0], q(1, 24));
        assert_eq!(e.coeffs[1], q(1, 1));
        assert_eq!(e.coeffs[2], q(1, 1));
        // sigma(4) - 2 sigma(2) = 7 - 6
        assert_eq!(e.coeffs[4], q(1, 1));
    }

    #[test]
    fn c0_vanishes_for_ramified_second_character() {
        let f = f7();
        let (l4, _) = chi4(&f).lift().unwrap();
        let t = LiftedCharacter::trivial();
        let spec = EisensteinSpec::new(3, &t, &l4, 1).unwrap();
        assert!(eisenstein_qexp(&spec, 3).unwrap().coeffs[0].is_zero());
        assert_eq!(
            EisensteinSpec::new(4, &l4, &t, 1).unwrap_err(),
            EisError::ParityViolation { k: 4 }
        );
    }

    #[test]
    fn katz_e4_mod_7() {
        let f = f7();
        let one = DirichletCharacter::trivial(1, &f);
        let e4 = katz_eisenstein(4, &one, &one, 1, 30).unwrap();
        assert_eq!(e4.form.coeff(0), &f.from_int(4));
        for l in arith::primes_upto(30) {
            assert_eq!(e4.form.coeff(l), &f.from_u64((1 + l * l * l) % 7));
        }
        assert!(e4.form.normalized());
        assert!(!e4.form.flags.cuspidal);

        let f2 = FiniteField::prime(2).unwrap();
        let one2 = DirichletCharacter::trivial(1, &f2);
        assert!(matches!(
            katz_eisenstein(4, &one2, &one2, 1, 10),
            Err(EisError::NotPIntegral { p: 2, .. })
        ));
    }

    #[test]
    fn katz_e12_mod_691() {
        let f = FiniteField::prime(691).unwrap();
        let one = DirichletCharacter::trivial(1, &f);
        let e12 = katz_eisenstein(12, &one, &one, 1, 20).unwrap();
        assert!(e12.form.coeff(0).is_zero());
        assert_eq!(e12.c0, q(691, 65520));
        for n in 1..=20u64 {
            let s: u64 = arith::divisors(n)
                .iter()
                .map(|&d| arith::pow_mod(d, 11, 691))
                .sum();
            assert_eq!(e12.form.coeff(n), &f.from_u64(s % 691));
        }
    }

    #[test]
    fn reduction_matches_direct_evaluation() {
        let f13 = FiniteField::prime(13).unwrap();
        let chi = DirichletCharacter::new(7, &[(3, f13.from_int(4))], &f13).unwrap();
        let one = DirichletCharacter::trivial(1, &f13);
        for (k, a, b) in [(3, &chi, &one), (3, &one, &chi), (4, &chi.mul(&chi).unwrap(), &one)] {
            let Ok(ke) = katz_eisenstein(k, a, b, 1, 40) else {
                continue;
            };
            let (la, red) = a.primitive().lift().unwrap();
            let (lb, _) = b.primitive().lift().unwrap();
            let spec = EisensteinSpec::new(k, &la, &lb, 1).unwrap();
            let exact = eisenstein_qexp(&spec, 40).unwrap();
            assert_eq!(&reduce_expansion(&exact, &red).unwrap(), ke.form.qexp());
        }
    }

    #[test]
    fn eigenvalue_law_with_characters() {
        let f = f7();
        let one = DirichletCharacter::trivial(1, &f);
        let e = katz_eisenstein(3, &chi4(&f), &one, 1, 120).unwrap();
        assert_eq!(e.form.level(), 4);
        let EigenCheck::Eigen(table) = is_eigen_upto(&e.form, 40, &[7]).unwrap() else {
            panic!("not an eigenform");
        };
        for (l, v) in table {
            if l == 2 {
                continue;
            }
            let (tr, _) = rep_trace_det(&e.rep, l, 4).unwrap();
            assert_eq!(v, tr, "l = {l}");
        }
        // U_2 acts on the level-4 series too
        let u2 = hecke_tn(&e.form, 2).unwrap();
        assert!(u2.qexp().eq_upto_common(&e.form.qexp().scale(e.form.coeff(2))));
    }

    #[test]
    fn multiplicativity_and_swap() {
        let f = f7();
        let a = katz_eisenstein(4, &chi4(&f), &chi3(&f), 1, 200).unwrap().form;
        for (m, n) in [(3u64, 4u64), (5, 8), (7, 9), (11, 16)] {
            assert_eq!(a.coeff(m * n), &(a.coeff(m) * a.coeff(n)));
        }
        // weight 7 is congruent to 1 mod 6, but these characters force even weight
        assert_eq!(
            katz_eisenstein(7, &chi4(&f), &chi3(&f), 1, 10).unwrap_err(),
            EisError::ParityViolation { k: 7 }
        );
        let one = DirichletCharacter::trivial(1, &f);
        let x = katz_eisenstein(7, &chi4(&f), &one, 1, 100).unwrap();
        let y = katz_eisenstein(7, &one, &chi4(&f), 1, 100).unwrap();
        for l in arith::primes_upto(100).into_iter().filter(|&l| l != 2 && l != 7) {
            assert_eq!(x.form.coeff(l), y.form.coeff(l), "l = {l}");
        }
        assert_eq!(rep_equiv(&x.rep, &y.rep), Some(RepMatch::Swapped));
        assert_eq!(rep_equiv(&x.rep, &x.rep), Some(RepMatch::Direct));
        let z = katz_eisenstein(3, &chi4(&f), &one, 1, 10).unwrap();
        assert_eq!(rep_equiv(&x.rep, &z.rep.twist(1)), None);
    }

    #[test]
    fn trace_and_det() {
        let f = f7();
        let one = DirichletCharacter::trivial(1, &f);
        let rho = ReducibleRep::new(&one, 0, &one, 3);
        let (tr, det) = rep_trace_det(&rho, 2, 1).unwrap();
        assert_eq!(tr, f.from_int(2));
        assert_eq!(det, f.from_int(1));
        assert!(matches!(rep_trace_det(&rho, 7, 1), Err(EisError::BadPrime { .. })));
    }
}
