use std::fmt;
use std::str::FromStr;

use super::NewformError;
use crate::characters::DirichletCharacter;
use crate::eisenstein::{katz_eisenstein, ReducibleRep};
use crate::qseries::{theta, ModularForm};

/// Which character pattern the target representation falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma45Case {
    /// `eps'` nontrivial.
    I,
    /// Both trivial, `k = 2`: uses weight `p^2 + 1`.
    II,
    /// Both trivial, `k != 2`.
    III,
    /// `eps` nontrivial, `eps'` trivial.
    IV,
}

impl fmt::Display for Lemma45Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma45Case::I => "i",
            Lemma45Case::II => "ii",
            Lemma45Case::III => "iii",
            Lemma45Case::IV => "iv",
        })
    }
}

impl FromStr for Lemma45Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Lemma45Case::I),
            "ii" | "2" => Ok(Lemma45Case::II),
            "iii" | "3" => Ok(Lemma45Case::III),
            "iv" | "4" => Ok(Lemma45Case::IV),
            _ => Err(format!("unknown case {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Lemma45Output {
    /// `theta^a` of the reduced Eisenstein series.
    pub form: ModularForm,
    /// `eps' chi_p^a + eps chi_p^{k-1+a}`.
    pub rep: ReducibleRep,
}

fn violation(msg: impl Into<String>) -> NewformError {
    NewformError::HypothesisViolation(msg.into())
}

/// Eigenform realizing `eps' chi_p^a + eps chi_p^b` at the optimal level
/// `cond(eps) cond(eps')`.
///
/// `a = 0` is accepted and means no twist. The `(N, k) != (1, 2)` clause is
/// not imposed on case (ii), whose own hypotheses force `N = 1, k = 2`.
pub fn lemma45_construct(
    case: Lemma45Case,
    a: u64,
    b: u64,
    k: u64,
    eps: &DirichletCharacter,
    eps_prime: &DirichletCharacter,
    prec: u64,
) -> Result<Lemma45Output, NewformError> {
    if eps.target() != eps_prime.target() {
        return Err(violation("characters live over different fields"));
    }
    let p = eps.target().characteristic();
    let m = p - 1;
    if a > p - 1 {
        return Err(violation(format!("a = {a} outside [0, {}]", p - 1)));
    }
    if b > p.saturating_sub(2) {
        return Err(violation(format!("b = {b} outside [0, {}]", p.saturating_sub(2))));
    }
    if !(1..=p + 1).contains(&k) {
        return Err(violation(format!("k = {k} outside [1, {}]", p + 1)));
    }
    let congruent = |lhs: u64| (lhs + m * p) % m == (b + m * p - a) % m;
    let (e1, e2) = (eps.is_trivial(), eps_prime.is_trivial());
    let weight_ok = || {
        if congruent(k - 1) {
            Ok(())
        } else {
            Err(violation(format!("k - 1 = {} is not b - a mod {m}", k - 1)))
        }
    };
    let level = eps.conductor() * eps_prime.conductor();
    let not_one_two = || {
        if (level, k) == (1, 2) {
            Err(violation("(N, k) = (1, 2)"))
        } else {
            Ok(())
        }
    };
    let weight = match case {
        Lemma45Case::I => {
            if e2 {
                return Err(violation("case (i) needs eps' nontrivial"));
            }
            weight_ok()?;
            not_one_two()?;
            k
        }
        Lemma45Case::II => {
            if !(e1 && e2) {
                return Err(violation("case (ii) needs both characters trivial"));
            }
            if k != 2 {
                return Err(violation("case (ii) needs k = 2"));
            }
            if !congruent(1) {
                return Err(violation(format!("b - a is not 1 mod {m}")));
            }
            if p == 2 || p == 3 {
                return Err(violation("case (ii) needs p not 2 or 3"));
            }
            p * p + 1
        }
        Lemma45Case::III => {
            if !(e1 && e2) {
                return Err(violation("case (iii) needs both characters trivial"));
            }
            if k == 2 {
                return Err(violation("case (iii) needs k != 2"));
            }
            weight_ok()?;
            not_one_two()?;
            k
        }
        Lemma45Case::IV => {
            if e1 || !e2 {
                return Err(violation(
                    "case (iv) needs eps nontrivial and eps' trivial",
                ));
            }
            weight_ok()?;
            not_one_two()?;
            k
        }
    };
    let eis = katz_eisenstein(weight, eps, eps_prime, 1, prec)?;
    let form = (0..a).fold(eis.form, |g, _| theta(&g));
    Ok(Lemma45Output {
        form,
        rep: eis.rep.twist(a),
    })
}
