use std::fmt;

use super::NewformError;
use crate::arith;
use crate::gf::FieldElement;
use crate::linalg::{self, Solve};
use crate::qseries::{degeneracy_bd, frobenius, hasse_mult, ModularForm, QError, QExpansion};
use crate::report::{list, Report};

/// Generator `B_d(A^t Frob^j f) = f(q^{d p^j})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OldLabel {
    pub d: u64,
    pub j: u32,
}

impl fmt::Display for OldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}j{}", self.d, self.j)
    }
}

#[derive(Debug, Clone)]
pub struct OldSpaceBasis {
    pub source: ModularForm,
    pub level: u64,
    pub weight: u64,
    pub generators: Vec<(OldLabel, ModularForm)>,
}

impl OldSpaceBasis {
    pub fn labels(&self) -> Vec<OldLabel> {
        self.generators.iter().map(|(l, _)| *l).collect()
    }
}

/// `j` with `p^j k <= k'` and `(p - 1) | k' - p^j k`. Weight 0 never grows
/// under Frobenius, so there `j` stops once `p^j` passes the precision.
fn admissible_js(f: &ModularForm, target: u64) -> Vec<u32> {
    let (p, k) = (f.p(), f.weight());
    let mut out = Vec::new();
    let mut pj = 1u64;
    for j in 0.. {
        let w = pj * k;
        if w > target || (k == 0 && pj > f.prec().max(1)) {
            break;
        }
        if (target - w) % (p - 1) == 0 {
            out.push(j);
        }
        pj *= p;
    }
    out
}

fn weight_image(f: &ModularForm, j: u32, target: u64) -> ModularForm {
    let g = (0..j).fold(f.clone(), |g, _| frobenius(&g));
    hasse_mult(&g, (target - g.weight()) / (f.p() - 1))
}

/// Distinct expansions reachable by words in `A` and `Frob` of weight `k'`.
pub fn weight_old_generators(f: &ModularForm, target: u64) -> OldSpaceBasis {
    let generators = admissible_js(f, target)
        .into_iter()
        .map(|j| (OldLabel { d: 1, j }, weight_image(f, j, target)))
        .collect();
    OldSpaceBasis {
        source: f.clone(),
        level: f.level(),
        weight: target,
        generators,
    }
}

fn check_level(f: &ModularForm, target: u64) -> Result<(), NewformError> {
    if target == 0 || target % f.level() != 0 || target % f.p() == 0 {
        return Err(NewformError::BadLevel {
            level: f.level(),
            target,
        });
    }
    Ok(())
}

/// `f(q^d)` for every `d | M/N`.
pub fn level_old_generators(f: &ModularForm, target: u64) -> Result<OldSpaceBasis, NewformError> {
    check_level(f, target)?;
    let generators = arith::divisors(target / f.level())
        .into_iter()
        .map(|d| Ok((OldLabel { d, j: 0 }, degeneracy_bd(f, d, target)?)))
        .collect::<Result<_, QError>>()?;
    Ok(OldSpaceBasis {
        source: f.clone(),
        level: target,
        weight: f.weight(),
        generators,
    })
}

/// All `f(q^{d p^j})`, ordered by `j` and then `d`.
pub fn combined_old_generators(
    f: &ModularForm,
    level: u64,
    weight: u64,
) -> Result<OldSpaceBasis, NewformError> {
    check_level(f, level)?;
    let mut generators = Vec::new();
    for j in admissible_js(f, weight) {
        let g = weight_image(f, j, weight);
        for d in arith::divisors(level / f.level()) {
            generators.push((OldLabel { d, j }, degeneracy_bd(&g, d, level)?));
        }
    }
    Ok(OldSpaceBasis {
        source: f.clone(),
        level,
        weight,
        generators,
    })
}

/// `ceil(k psi(M) / 12) + 1`.
pub fn sturm_bound(weight: u64, level: u64) -> u64 {
    (weight * arith::dedekind_psi(level)).div_ceil(12) + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member,
    /// Consistent, but only checked below the Sturm-type bound.
    MemberUpToPrecision,
    NonMember { witness: u64 },
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        !matches!(self, Verdict::NonMember { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Member => write!(f, "member"),
            Verdict::MemberUpToPrecision => write!(f, "member up to precision"),
            Verdict::NonMember { .. } => write!(f, "non-member"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MembershipResult {
    pub verdict: Verdict,
    pub labels: Vec<OldLabel>,
    /// One per generator; free directions are set to zero.
    pub coefficients: Vec<FieldElement>,
    pub certified_prec: u64,
    pub sturm: u64,
}

impl MembershipResult {
    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.set("verdict", &self.verdict)
            .set("labels", list(&self.labels))
            .set("coefficients", list(&self.coefficients))
            .set("certified_prec", self.certified_prec)
            .set("sturm_bound", self.sturm);
        if let Verdict::NonMember { witness } = self.verdict {
            r.set("witness", witness);
        }
        r
    }
}

/// Linear combination of the basis reproducing `big_f` on `a_0..=a_B`.
pub fn membership(
    big_f: &ModularForm,
    basis: &OldSpaceBasis,
) -> Result<MembershipResult, NewformError> {
    let src = &basis.source;
    let key = |lvl: u64, k: u64| format!("N={lvl} k={k}");
    if big_f.field() != src.field()
        || big_f.level() != basis.level
        || big_f.weight() != basis.weight
        || !big_f.character().same_primitive(src.character())
    {
        return Err(QError::MixedMetadata {
            expected: format!("{} char={}", key(basis.level, basis.weight), src.character()),
            got: format!(
                "{} char={}",
                key(big_f.level(), big_f.weight()),
                big_f.character()
            ),
        }
        .into());
    }
    let b = basis
        .generators
        .iter()
        .map(|(_, g)| g.prec())
        .chain(std::iter::once(big_f.prec()))
        .min()
        .unwrap();
    let columns: Vec<Vec<FieldElement>> = basis
        .generators
        .iter()
        .map(|(_, g)| g.qexp().coeffs()[..=b as usize].to_vec())
        .collect();
    let target = &big_f.qexp().coeffs()[..=b as usize];
    let sturm = sturm_bound(basis.weight, basis.level);
    let labels = basis.labels();
    Ok(match linalg::solve(big_f.field(), &columns, target) {
        Solve::Solution(x) => MembershipResult {
            verdict: if b >= sturm {
                Verdict::Member
            } else {
                Verdict::MemberUpToPrecision
            },
            labels,
            coefficients: x,
            certified_prec: b,
            sturm,
        },
        Solve::Inconsistent { row } => MembershipResult {
            verdict: Verdict::NonMember { witness: row as u64 },
            labels,
            coefficients: Vec::new(),
            certified_prec: b,
            sturm,
        },
    })
}

/// Evaluates `sum x_i g_i` over the common precision.
pub(crate) fn combine(
    basis: &OldSpaceBasis,
    coeffs: &[FieldElement],
) -> Result<QExpansion, NewformError> {
    let prec = basis
        .generators
        .iter()
        .map(|(_, g)| g.prec())
        .min()
        .unwrap_or(basis.source.prec());
    let mut acc = QExpansion::zero(basis.source.field(), prec);
    for ((_, g), x) in basis.generators.iter().zip(coeffs) {
        acc = acc.add(&g.qexp().truncate(prec).scale(x))?;
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct Theorem13Certificate {
    pub stage1: MembershipResult,
    /// `F_1 = sum_j beta_j A^{t_j} f(q^{p^j})`.
    pub betas: Vec<(u32, FieldElement)>,
    pub f1: ModularForm,
    /// `a_{pm}(F_1) = a_p a_m` for `p ∤ m`.
    pub tp_multiplicative: bool,
    /// `a_{p^n} = a_p a_{p^{n-1}} - p^{k'-1} eps(p) a_{p^{n-2}}`.
    pub tp_recursion: bool,
    pub stage2: MembershipResult,
    pub stage2_basis: OldSpaceBasis,
}

impl Theorem13Certificate {
    /// `sum_d gamma_d F_1(q^d)`.
    pub fn reconstruct(&self) -> Result<QExpansion, NewformError> {
        combine(&self.stage2_basis, &self.stage2.coefficients)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.merge("stage1", &self.stage1.report())
            .merge("stage2", &self.stage2.report())
            .set(
                "betas",
                list(self.betas.iter().map(|(j, b)| format!("j{j}:{b}"))),
            )
            .set("tp_multiplicative", self.tp_multiplicative)
            .set("tp_recursion", self.tp_recursion)
            .set(
                "certified_prec",
                self.stage1.certified_prec.min(self.stage2.certified_prec),
            );
        r
    }
}

fn tp_checks(f1: &ModularForm) -> (bool, bool) {
    let p = f1.p();
    let b = f1.prec();
    let a = |n: u64| f1.coeff(n);
    let mult = (1..=b / p)
        .filter(|m| m % p != 0)
        .all(|m| a(p * m) == &(a(p) * a(m)));
    let field = f1.field();
    let c = &field.from_u64(p).pow_u64(f1.weight().saturating_sub(1)) * &f1.character().eval(p as i64);
    let mut rec = true;
    let mut pn = p * p;
    while pn <= b {
        let rhs = &(a(p) * a(pn / p)) - &(&c * a(pn / p / p));
        rec &= a(pn) == &rhs;
        pn *= p;
    }
    (mult, rec)
}

/// Two-stage recovery of `F` from `f`: first a weight-old form `F_1` at
/// level `N`, then `F` as a level-old combination of `F_1`.
///
/// Stage 1 solves in the joint span of all `f(q^{d p^j})` and reads `F_1`
/// off the smallest `d` carrying a nonzero coefficient. The `T_p` relations
/// of `F_1` are reported rather than enforced, since an arbitrary `beta`
/// need not give a `T_p` eigenform.
pub fn theorem13_decompose(
    big_f: &ModularForm,
    f: &ModularForm,
) -> Result<Theorem13Certificate, NewformError> {
    let (m, n) = (big_f.level(), f.level());
    if m % n != 0 {
        return Err(NewformError::LevelNotDivisible { newform: n, form: m });
    }
    let k1 = big_f.weight();
    let basis = combined_old_generators(f, m, k1)?;
    if basis.generators.is_empty() {
        return Err(NewformError::EmptySpace {
            k: f.weight(),
            target: k1,
        });
    }
    let stage1 = membership(big_f, &basis)?;
    if let Verdict::NonMember { witness } = stage1.verdict {
        return Err(NewformError::Stage1Fail { witness });
    }
    let d0 = basis
        .generators
        .iter()
        .zip(&stage1.coefficients)
        .find(|(_, x)| !x.is_zero())
        .map(|((l, _), _)| l.d)
        .unwrap_or(1);
    let betas: Vec<(u32, FieldElement)> = basis
        .generators
        .iter()
        .zip(&stage1.coefficients)
        .filter(|((l, _), _)| l.d == d0)
        .map(|((l, _), x)| (l.j, x.clone()))
        .collect();
    let weight_basis = weight_old_generators(f, k1);
    let beta_vec: Vec<FieldElement> = weight_basis
        .generators
        .iter()
        .map(|(l, _)| {
            betas
                .iter()
                .find(|(j, _)| *j == l.j)
                .map(|(_, b)| b.clone())
                .unwrap_or_else(|| f.field().zero())
        })
        .collect();
    let f1 = weight_basis.generators[0]
        .1
        .with_qexp(combine(&weight_basis, &beta_vec)?)
        .truncate(f.prec());
    let (tp_multiplicative, tp_recursion) = tp_checks(&f1);
    let stage2_basis = level_old_generators(&f1, m)?;
    let stage2 = membership(big_f, &stage2_basis)?;
    if let Verdict::NonMember { witness } = stage2.verdict {
        return Err(NewformError::Stage2Fail { witness });
    }
    Ok(Theorem13Certificate {
        stage1,
        betas,
        f1,
        tp_multiplicative,
        tp_recursion,
        stage2,
        stage2_basis,
    })
}
