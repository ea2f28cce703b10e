//! Dense polynomials over F_p (low-to-high `Vec<u64>`), just enough for
//! irreducibility testing and extension-field multiplication.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(super) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y % p) % p;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
pub(super) fn rem_monic(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = a.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            let idx = shift + i;
            a[idx] = (a[idx] + p - lead * c % p) % p;
        }
    }
    a
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    trim(rem_monic(mul(a, b, p), m, p))
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = trim(rem_monic(base.to_vec(), m, p));
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let inv = inv_mod_p(*b.last().unwrap(), p);
        let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        let r = trim(rem_monic(a, &monic, p));
        a = monic;
        b = r;
    }
    a
}

/// Irreducibility of a monic polynomial of degree `d >= 1`:
/// `gcd(x^{p^i} - x, m) = 1` for `1 <= i < d` and `x^{p^d} = x (mod m)`.
pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..d {
        xp = powmod(&xp, p, m, p);
        let g = gcd(&sub(&xp, &x, p), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    xp = powmod(&xp, p, m, p);
    sub(&xp, &x, p).is_empty()
}
