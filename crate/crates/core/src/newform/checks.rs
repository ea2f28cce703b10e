use std::fmt;

use super::NewformError;
use crate::arith;
use crate::gf::FieldElement;
use crate::qseries::{is_eigen_upto, EigenCheck, ModularForm};
use crate::report::{list, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop24Report {
    pub weights_congruent: bool,
    pub characters_equal: bool,
    /// `a_n` agree over the common precision.
    pub expansions_agree: bool,
    /// `(|k - k'| / (p - 1))` when the heavier form is `A^t` of the lighter.
    pub hasse_power: Option<u64>,
}

impl Prop24Report {
    pub fn holds(&self) -> bool {
        self.weights_congruent && self.characters_equal
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.set("weights_congruent", self.weights_congruent)
            .set("characters_equal", self.characters_equal)
            .set("expansions_agree", self.expansions_agree)
            .set(
                "hasse_power",
                self.hasse_power.map_or("none".to_string(), |t| t.to_string()),
            );
        r
    }
}

/// Weight congruence mod `p - 1` and equality of primitive characters for
/// two forms with the same eigensystem.
pub fn check_prop24(f: &ModularForm, g: &ModularForm) -> Prop24Report {
    let m = f.p() - 1;
    let (k, k2) = (f.weight(), g.weight());
    let weights_congruent = k % m == k2 % m;
    let characters_equal = f.character().same_primitive(g.character());
    let expansions_agree = f.field() == g.field() && f.qexp().eq_upto_common(g.qexp());
    let hasse_power = (weights_congruent && expansions_agree).then(|| k.abs_diff(k2) / m);
    Prop24Report {
        weights_congruent,
        characters_equal,
        expansions_agree,
        hasse_power,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// `(l, a_l(f), a_l(g))` for every compared prime.
    Equal {
        table: Vec<(u64, FieldElement, FieldElement)>,
    },
    Divergence {
        l: u64,
        a_f: FieldElement,
        a_g: FieldElement,
        table: Vec<(u64, FieldElement, FieldElement)>,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }

    pub fn table(&self) -> &[(u64, FieldElement, FieldElement)] {
        match self {
            Comparison::Equal { table } | Comparison::Divergence { table, .. } => table,
        }
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.set(
            "table",
            list(self.table().iter().map(|(l, a, b)| format!("{l}:{a}:{b}"))),
        );
        match self {
            Comparison::Equal { .. } => {
                r.set("verdict", "equal");
            }
            Comparison::Divergence { l, a_f, a_g, .. } => {
                r.set("verdict", "divergence")
                    .set("witness", l)
                    .set("a_f", a_f)
                    .set("a_g", a_g);
            }
        }
        r
    }
}

fn eigen_normalized(f: &ModularForm, bound: u64, bad: &[u64]) -> Result<ModularForm, NewformError> {
    let g = f.normalize()?;
    match is_eigen_upto(&g, bound, bad)? {
        EigenCheck::Eigen(_) => Ok(g),
        EigenCheck::Failure { l, m, .. } => Err(NewformError::NotEigenform { l, m }),
    }
}

/// `a_l(f) = a_l(g)` for primes `l <= bound` outside `bad`, as far as both
/// expansions reach.
pub fn compare_eigensystems(
    f: &ModularForm,
    g: &ModularForm,
    bad: &[u64],
    bound: u64,
) -> Result<Comparison, NewformError> {
    let f = eigen_normalized(f, bound, bad)?;
    let g = eigen_normalized(g, bound, bad)?;
    let top = bound.min(f.prec()).min(g.prec());
    let mut table = Vec::new();
    for l in arith::primes_upto(top) {
        if bad.contains(&l) {
            continue;
        }
        let (a, b) = (f.coeff(l).clone(), g.coeff(l).clone());
        let differ = a != b;
        table.push((l, a.clone(), b.clone()));
        if differ {
            return Ok(Comparison::Divergence {
                l,
                a_f: a,
                a_g: b,
                table,
            });
        }
    }
    Ok(Comparison::Equal { table })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cor37Case {
    /// `l ∤ Mp/N`
    I,
    /// `l | M/N` and `l | N`
    II,
    /// `l | Mp/N` and `l ∤ N`
    III,
    None,
}

impl fmt::Display for Cor37Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cor37Case::I => "i",
            Cor37Case::II => "ii",
            Cor37Case::III => "iii",
            Cor37Case::None => "none",
        })
    }
}

fn classify(l: u64, big_level: u64, level: u64, p: u64) -> Cor37Case {
    let ratio = big_level / level;
    if (ratio * p) % l != 0 {
        Cor37Case::I
    } else if ratio % l == 0 && level % l == 0 {
        Cor37Case::II
    } else if level % l != 0 {
        Cor37Case::III
    } else {
        Cor37Case::None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cor37Row {
    pub l: u64,
    pub case: Cor37Case,
    pub a_l: FieldElement,
    pub b_l: FieldElement,
    /// Case (iii) evaluated with the weight of `F`; equal to the other
    /// reading in cases (i) and (ii).
    pub holds_big_weight: bool,
    /// Case (iii) evaluated with the weight of `f`.
    pub holds_small_weight: bool,
}

impl Cor37Row {
    pub fn holds(&self) -> bool {
        self.holds_big_weight || self.holds_small_weight
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cor37Report {
    pub rows: Vec<Cor37Row>,
}

impl Cor37Report {
    pub fn row(&self, l: u64) -> Option<&Cor37Row> {
        self.rows.iter().find(|r| r.l == l)
    }

    pub fn all_big_weight(&self) -> bool {
        self.rows.iter().all(|r| r.holds_big_weight)
    }

    pub fn all_small_weight(&self) -> bool {
        self.rows.iter().all(|r| r.holds_small_weight)
    }

    /// Every row holds under one consistent reading of the weight.
    pub fn satisfied(&self) -> bool {
        self.all_big_weight() || self.all_small_weight()
    }

    pub fn first_violation(&self) -> Option<u64> {
        self.rows.iter().find(|r| !r.holds()).map(|r| r.l)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.set(
            "rows",
            list(self.rows.iter().map(|row| {
                format!(
                    "{}:{}:{}:{}:{}{}",
                    row.l,
                    row.case,
                    row.a_l,
                    row.b_l,
                    if row.holds_big_weight { "K" } else { "-" },
                    if row.holds_small_weight { "k" } else { "-" },
                )
            })),
        )
        .set("holds_weight_of_F", self.all_big_weight())
        .set("holds_weight_of_f", self.all_small_weight())
        .set("verdict", if self.satisfied() { "satisfied" } else { "violated" });
        if let Some(l) = self.first_violation() {
            r.set("witness", l);
        }
        r
    }
}

/// `x = 0` or `x^2 - x b + eps(l) l^{k-1} = 0`; false when `l^{k-1}` is
/// undefined in the field.
fn case_iii(a: &FieldElement, b: &FieldElement, eps_l: &FieldElement, l: u64, k: u64) -> bool {
    if a.is_zero() {
        return true;
    }
    let Ok(lk) = a.field().from_u64(l).pow(k as i64 - 1) else {
        return false;
    };
    (&(&(a * a) - &(a * b)) + &(eps_l * &lk)).is_zero()
}

/// Classifies every prime up to the common precision by the divisibility
/// pattern of `l` against `M`, `N` and `p`, and tests the matching relation
/// between `a_l(F)` and `b_l(f)`.
pub fn check_cor37(big_f: &ModularForm, f: &ModularForm) -> Result<Cor37Report, NewformError> {
    let (m, n) = (big_f.level(), f.level());
    if m % n != 0 {
        return Err(NewformError::LevelNotDivisible { newform: n, form: m });
    }
    let big = big_f.normalize()?;
    let small = f.normalize()?;
    let p = f.p();
    let rows = arith::primes_upto(big.prec().min(small.prec()))
        .into_iter()
        .map(|l| {
            let a = big.coeff(l).clone();
            let b = small.coeff(l).clone();
            let case = classify(l, m, n, p);
            let (hk, hs) = match case {
                Cor37Case::I => {
                    let h = a == b;
                    (h, h)
                }
                Cor37Case::II => {
                    let h = a.is_zero() || a == b;
                    (h, h)
                }
                Cor37Case::III => {
                    let e = small.character().eval(l as i64);
                    (
                        case_iii(&a, &b, &e, l, big.weight()),
                        case_iii(&a, &b, &e, l, small.weight()),
                    )
                }
                Cor37Case::None => (false, false),
            };
            Cor37Row {
                l,
                case,
                a_l: a,
                b_l: b,
                holds_big_weight: hk,
                holds_small_weight: hs,
            }
        })
        .collect();
    Ok(Cor37Report { rows })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cor47Row {
    pub l: u64,
    pub case: Cor37Case,
    /// `(clause, holds)`; both `ii` and `iii` are listed where their
    /// conditions overlap.
    pub checks: Vec<(&'static str, bool)>,
}

impl Cor47Row {
    pub fn holds(&self) -> bool {
        self.checks.iter().any(|(_, h)| *h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionReport {
    /// `n^k b_n = n a_n` verified for `1 <= n <= identity_upto`.
    pub identity_upto: u64,
    /// `a_p(F) != 0`.
    pub ordinary: bool,
    pub rows: Vec<Cor47Row>,
}

impl CompanionReport {
    pub fn rows_hold(&self) -> bool {
        self.rows.iter().all(Cor47Row::holds)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.set("identity", "holds")
            .set("identity_upto", self.identity_upto)
            .set("ordinary", self.ordinary);
        if !self.rows.is_empty() {
            r.set(
                "rows",
                list(self.rows.iter().map(|row| {
                    let cs: Vec<String> = row
                        .checks
                        .iter()
                        .map(|(c, h)| format!("{c}={}", if *h { "y" } else { "n" }))
                        .collect();
                    format!("{}:{}:{}", row.l, row.case, cs.join(","))
                })),
            )
            .set("rows_hold", self.rows_hold());
        }
        r
    }
}

/// Companion identity `n^k b_n = n a_n` between `F` (weight `k`) and `G`
/// (weight `p + 1 - k`), then, if a comparison newform `h` with coefficients
/// `c_l` is supplied, the prime-by-prime relations between `G` and `h`.
pub fn companion_check(
    big_f: &ModularForm,
    big_g: &ModularForm,
    comparison: Option<&ModularForm>,
) -> Result<CompanionReport, NewformError> {
    let p = big_f.p();
    let k = big_f.weight();
    if !(2..=p).contains(&k) {
        return Err(NewformError::HypothesisViolation(format!(
            "weight {k} outside [2, {p}]"
        )));
    }
    if big_g.weight() != p + 1 - k {
        return Err(NewformError::HypothesisViolation(format!(
            "companion weight {} is not p + 1 - k = {}",
            big_g.weight(),
            p + 1 - k
        )));
    }
    if big_f.level() != big_g.level() || big_f.field() != big_g.field() {
        return Err(NewformError::HypothesisViolation(
            "forms must share level and field".into(),
        ));
    }
    let field = big_f.field();
    let upto = big_f.prec().min(big_g.prec());
    for n in 1..=upto {
        let nf = field.from_u64(n);
        let lhs = &nf.pow_u64(k) * big_g.coeff(n);
        let rhs = &nf * big_f.coeff(n);
        if lhs != rhs {
            return Err(NewformError::IdentityFail { n });
        }
    }
    let ordinary = big_f.prec() >= p && !big_f.coeff(p).is_zero();
    let mut rows = Vec::new();
    if let Some(h) = comparison {
        let (m, n) = (big_g.level(), h.level());
        if m % n != 0 {
            return Err(NewformError::LevelNotDivisible { newform: n, form: m });
        }
        let h = h.normalize()?;
        for l in arith::primes_upto(upto.min(h.prec())) {
            let lf = field.from_u64(l);
            let b = big_g.coeff(l);
            let c = h.coeff(l);
            let lkb = &lf.pow_u64(k) * b;
            let lc = &lf * c;
            let case = classify(l, m, n, p);
            let ii = lkb.is_zero() || lkb == lc;
            let iii = lkb.is_zero() || {
                let inner = &(&lf.pow_u64(k - 1) * b) - c;
                (&(&(&lf * b) * &inner) + &(&h.character().eval(l as i64) * &lf)).is_zero()
            };
            let checks = match case {
                Cor37Case::I => vec![("i", lkb == lc)],
                Cor37Case::II => vec![("ii", ii)],
                Cor37Case::III => vec![("ii", ii), ("iii", iii)],
                Cor37Case::None => vec![],
            };
            rows.push(Cor47Row { l, case, checks });
        }
    }
    Ok(CompanionReport {
        identity_upto: upto,
        ordinary,
        rows,
    })
}
