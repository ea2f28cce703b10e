//! Exact arithmetic in `Q(zeta_n) = Q[x]/Phi_n(x)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Phi_n` low-to-high, by dividing `x^n - 1` by `Phi_d` for the proper divisors `d`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in arith::divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    let out = Arc::new(num);
    cache().lock().unwrap().insert(n, out.clone());
    out
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// An element of `Q(zeta_n)` in the power basis `1, zeta, ..., zeta^{phi(n)-1}`.
#[derive(Clone, Debug)]
pub struct CycloRational {
    n: u64,
    coords: Vec<BigRational>,
}

impl CycloRational {
    pub fn zero(n: u64) -> Self {
        let phi = arith::euler_phi(n) as usize;
        CycloRational {
            n,
            coords: vec![BigRational::zero(); phi],
        }
    }

    pub fn from_rational(n: u64, q: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coords[0] = q;
        z
    }

    pub fn from_int(n: u64, k: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(k)))
    }

    /// `zeta_n^e`.
    pub fn root_of_unity(n: u64, e: u64) -> Self {
        let e = (e % n) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(n, poly)
    }

    /// Reduce an arbitrary polynomial in `zeta` modulo `Phi_n`.
    pub fn from_poly(n: u64, mut poly: Vec<BigRational>) -> Self {
        let phi_poly = cyclotomic_polynomial(n);
        let deg = phi_poly.len() - 1;
        while poly.len() > deg {
            let lead = poly.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = poly.len() - deg;
            for (i, &c) in phi_poly[..deg].iter().enumerate() {
                if c != 0 {
                    poly[shift + i] -= &lead * BigRational::from_integer(BigInt::from(c));
                }
            }
        }
        poly.resize(deg, BigRational::zero());
        CycloRational { n, coords: poly }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    /// Re-express in `Q(zeta_m)` for a multiple `m` of `n`.
    pub fn lift_to(&self, m: u64) -> Self {
        assert!(m % self.n == 0, "Q(zeta_{}) does not sit inside Q(zeta_{m})", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut poly = vec![BigRational::zero(); step * (self.coords.len().max(1) - 1) + 1];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(m, poly)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.n == other.n {
            (self.clone(), other.clone())
        } else {
            let m = arith::lcm(self.n, other.n);
            (self.lift_to(m), other.lift_to(m))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        CycloRational { n: a.n, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloRational {
            n: self.n,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut prod = vec![BigRational::zero(); a.coords.len() + b.coords.len() - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_poly(a.n, prod)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloRational {
            n: self.n,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// True iff no reduced coordinate denominator is divisible by `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coords.iter().all(|c| !c.denom().is_multiple_of(&p))
    }
}

/// True iff every coordinate of `b` has a denominator coprime to `p`.
pub fn p_integral_check(b: &CycloRational, p: u64) -> bool {
    b.is_p_integral(p)
}

impl PartialEq for CycloRational {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coords == b.coords
    }
}

impl Eq for CycloRational {}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cyc({};", self.n)?;
        for (i, c) in self.coords.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, fmt_rational(c))?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse cyclotomic token {0:?}")]
pub struct CycloParseError(pub String);

impl FromStr for CycloRational {
    type Err = CycloParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CycloParseError(s.to_string());
        let inner = s
            .trim()
            .strip_prefix("cyc(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (n, rest) = inner.split_once(';').ok_or_else(err)?;
        let n: u64 = n.trim().parse().map_err(|_| err())?;
        if n == 0 {
            return Err(err());
        }
        let coords: Vec<BigRational> = rest
            .split(',')
            .map(|t| parse_rational(t).ok_or_else(err))
            .collect::<Result<_, _>>()?;
        if coords.len() != arith::euler_phi(n) as usize {
            return Err(err());
        }
        Ok(CycloRational { n, coords })
    }
}
