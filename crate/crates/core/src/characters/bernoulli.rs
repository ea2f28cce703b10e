use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CharError, CycloRational, LiftedCharacter};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Classical `B_k` from `sum_{j<=k} C(k+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn classical_bernoulli(k: u64) -> BigRational {
    let mut bs: Vec<BigRational> = Vec::with_capacity(k as usize + 1);
    for m in 0..=k {
        if m == 0 {
            bs.push(BigRational::one());
            continue;
        }
        let s = bs
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (j, b)| {
                acc + b * BigRational::from_integer(binomial(m + 1, j as u64))
            });
        bs.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    bs.pop().unwrap()
}

/// Generalized Bernoulli number `B_k^eps` of a primitive character of
/// conductor `f`, the `k`-th Taylor coefficient (times `k!`) of
/// `sum_{j=1}^f eps(j) x e^{jx} / (e^{fx} - 1)`.
///
/// Imprimitive input is rejected: the generating function depends on the
/// modulus, and only the conductor-level version is meant here.
pub fn gen_bernoulli(k: u64, eps: &LiftedCharacter) -> Result<CycloRational, CharError> {
    if !eps.is_primitive() {
        return Err(CharError::Imprimitive {
            modulus: eps.modulus(),
            conductor: eps.conductor(),
        });
    }
    let f = eps.modulus();
    let n = eps.order();
    let k = k as usize;

    // x / (e^{fx} - 1) = 1 / S(x), S_i = f^{i+1} / (i+1)!
    let s: Vec<BigRational> = (0..=k)
        .map(|i| {
            BigRational::new(
                BigInt::from(f).pow(i as u32 + 1),
                factorial(i as u64 + 1),
            )
        })
        .collect();
    let mut inv = vec![BigRational::zero(); k + 1];
    inv[0] = BigRational::one() / &s[0];
    for i in 1..=k {
        let acc = (1..=i).fold(BigRational::zero(), |acc, j| acc + &s[j] * &inv[i - j]);
        inv[i] = -acc / &s[0];
    }

    // power sums of j over each exponent class of eps
    let mut sums = vec![vec![BigInt::zero(); k + 1]; n as usize];
    for j in 1..=f {
        let Some(e) = eps.exponent_at(j as i64) else {
            continue;
        };
        let mut pw = BigInt::one();
        for slot in sums[e as usize].iter_mut() {
            *slot += &pw;
            pw *= j;
        }
    }

    let kf = BigRational::from_integer(factorial(k as u64));
    let poly: Vec<BigRational> = sums
        .iter()
        .map(|ps| {
            let c = (0..=k).fold(BigRational::zero(), |acc, i| {
                if ps[i].is_zero() {
                    acc
                } else {
                    acc + BigRational::new(ps[i].clone(), factorial(i as u64)) * &inv[k - i]
                }
            });
            c * &kf
        })
        .collect();
    Ok(CycloRational::from_poly(n, poly))
}
