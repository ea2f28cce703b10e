//! Built-in level-one forms with integer coefficients, computed exactly and
//! then reduced, so a single integer expansion serves every prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::characters::classical_bernoulli;
use crate::gf::FiniteField;
use crate::qseries::{FormFlags, ModularForm, QExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry {0:?}; known: {known}", known = NAMES.join(", "))]
    UnknownEntry(String),
    #[error("{0} is not a prime")]
    BadPrime(u64),
}

pub const NAMES: [&str; 6] = ["delta", "E4", "E6", "E8", "E10", "E14"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    /// `eta(q)^e`, with `e` a multiple of 24 so the expansion is integral in `q`.
    EtaPower(u32),
    /// `1 - (2k / B_k) sum sigma_{k-1}(n) q^n`.
    Eisenstein(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub weight: u64,
    pub recipe: Recipe,
    pub cuspidal: bool,
}

impl CorpusEntry {
    pub fn lookup(name: &str) -> Result<Self, CorpusError> {
        let entry = |name, weight, recipe, cuspidal| CorpusEntry {
            name,
            weight,
            recipe,
            cuspidal,
        };
        Ok(match name {
            "delta" | "Delta" => entry("delta", 12, Recipe::EtaPower(24), true),
            "E4" => entry("E4", 4, Recipe::Eisenstein(4), false),
            "E6" => entry("E6", 6, Recipe::Eisenstein(6), false),
            "E8" => entry("E8", 8, Recipe::Eisenstein(8), false),
            "E10" => entry("E10", 10, Recipe::Eisenstein(10), false),
            "E14" => entry("E14", 14, Recipe::Eisenstein(14), false),
            _ => return Err(CorpusError::UnknownEntry(name.to_string())),
        })
    }

    /// `a_0..=a_prec` over the integers.
    pub fn integer_expansion(&self, prec: u64) -> Vec<BigInt> {
        match self.recipe {
            Recipe::EtaPower(e) => eta_power(e, prec),
            Recipe::Eisenstein(k) => eisenstein_integral(k, prec),
        }
    }
}

/// `q^{e/24} prod (1 - q^n)^e` through the logarithmic derivative
/// `n c_n = -e sum_{m=1}^{n} sigma(m) c_{n-m}` of the product.
fn eta_power(e: u32, prec: u64) -> Vec<BigInt> {
    assert!(e % 24 == 0, "eta power must be a multiple of 24");
    let shift = (e / 24) as usize;
    let len = (prec as usize + 1).saturating_sub(shift);
    let sigma: Vec<BigInt> = (0..len as u64)
        .map(|m| if m == 0 { BigInt::zero() } else { sigma_k(m, 1) })
        .collect();
    let mut c: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            c.push(BigInt::from(1));
            continue;
        }
        let s: BigInt = (1..=n).map(|m| &sigma[m] * &c[n - m]).sum();
        let v = -(s * e) / BigInt::from(n);
        c.push(v);
    }
    let mut out = vec![BigInt::zero(); shift];
    out.extend(c);
    out.truncate(prec as usize + 1);
    out
}

fn sigma_k(n: u64, k: u32) -> BigInt {
    arith::divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

fn eisenstein_integral(k: u64, prec: u64) -> Vec<BigInt> {
    let scale = -(classical_bernoulli(k).recip() * BigInt::from(2 * k));
    assert!(scale.is_integer(), "E_{k} is not integral");
    let scale = scale.to_integer();
    (0..=prec)
        .map(|n| {
            if n == 0 {
                BigInt::from(1)
            } else {
                &scale * sigma_k(n, (k - 1) as u32)
            }
        })
        .collect()
}

/// Reduction of a named entry over `F_p`.
pub fn corpus_get(name: &str, p: u64, prec: u64) -> Result<ModularForm, CorpusError> {
    if !arith::is_prime(p) {
        return Err(CorpusError::BadPrime(p));
    }
    let field = FiniteField::prime(p).map_err(|_| CorpusError::BadPrime(p))?;
    Ok(corpus_get_in(name, &field, prec)?)
}

/// Reduction of a named entry into an arbitrary finite field.
pub fn corpus_get_in(
    name: &str,
    field: &FiniteField,
    prec: u64,
) -> Result<ModularForm, CorpusError> {
    let entry = CorpusEntry::lookup(name)?;
    let p = BigInt::from(field.characteristic());
    let coeffs: Vec<i64> = entry
        .integer_expansion(prec)
        .iter()
        .map(|c| c.mod_floor(&p).to_i64().expect("reduced residue fits"))
        .collect();
    let flags = FormFlags {
        cuspidal: entry.cuspidal,
        ..FormFlags::default()
    };
    Ok(
        ModularForm::level_one(QExpansion::from_ints(field, &coeffs), entry.weight, flags)
            .expect("level one is prime to every p"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct expansion of `prod (1 - q^n)^24` by repeated multiplication.
    fn delta_by_product(prec: usize) -> Vec<BigInt> {
        let mut poly = vec![BigInt::zero(); prec];
        poly[0] = BigInt::from(1);
        for n in 1..prec {
            for _ in 0..24 {
                for i in (n..prec).rev() {
                    let t = poly[i - n].clone();
                    poly[i] -= t;
                }
            }
        }
        let mut out = vec![BigInt::zero()];
        out.extend(poly);
        out.truncate(prec);
        out
    }

    #[test]
    fn tau_values() {
        let d = CorpusEntry::lookup("delta").unwrap().integer_expansion(12);
        let expect = [0i64, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        let got: Vec<i64> = d.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn recurrence_matches_product() {
        let d = CorpusEntry::lookup("delta").unwrap().integer_expansion(80);
        assert_eq!(d, delta_by_product(81));
    }

    #[test]
    fn reductions() {
        let d = corpus_get("delta", 7, 10).unwrap();
        let ints: Vec<i64> = [1u64, 2, 3, 5, 7]
            .iter()
            .map(|&n| d.coeff(n).as_prime_field().unwrap() as i64)
            .collect();
        assert_eq!(ints, vec![1, 4, 0, 0, 0]);

        let d2 = corpus_get("delta", 2, 50).unwrap();
        for n in 0..=50u64 {
            assert_eq!(d2.coeff(n).is_one(), [1, 9, 25, 49].contains(&n), "n = {n}");
        }
        assert!(d2.flags.cuspidal);
    }

    #[test]
    fn eisenstein_entries() {
        let e4 = CorpusEntry::lookup("E4").unwrap().integer_expansion(3);
        assert_eq!(e4, vec![1, 240, 2160, 6720].into_iter().map(BigInt::from).collect::<Vec<_>>());
        let e6 = CorpusEntry::lookup("E6").unwrap().integer_expansion(2);
        assert_eq!(e6, vec![1, -504, -16632].into_iter().map(BigInt::from).collect::<Vec<_>>());
        let e14 = CorpusEntry::lookup("E14").unwrap().integer_expansion(1);
        assert_eq!(e14[1], BigInt::from(-24));
    }

    #[test]
    fn errors() {
        assert_eq!(
            corpus_get("E12", 7, 5).unwrap_err(),
            CorpusError::UnknownEntry("E12".into())
        );
        assert_eq!(corpus_get("delta", 9, 5).unwrap_err(), CorpusError::BadPrime(9));
    }
}
