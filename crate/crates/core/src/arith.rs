//! Small-integer number theory used throughout the crate.
//!
//! Everything here works on `u64` and assumes inputs small enough for trial
//! division (the field-size limit in [`crate::gf`] keeps group orders below
//! 2^40).

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// `base^exp mod m` with 128-bit intermediates.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 || n % (i + 2) == 0 {
            return false;
        }
        i += 6;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Index of Gamma_0(n) in SL_2(Z): n * prod_{l | n} (1 + 1/l).
pub fn dedekind_psi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p + 1))
}

/// Primes `<= n` by a sieve of Eratosthenes.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| is_p.then_some(i as u64))
        .collect()
}

/// Multiplicative order of `a` modulo `m`, given `group_order` (a multiple of it).
pub fn mult_order(a: u64, m: u64, group_order: u64) -> u64 {
    let mut ord = group_order;
    for (q, _) in factor(group_order) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Smallest primitive root modulo an odd prime power `l^a`.
pub fn primitive_root_prime_power(l: u64, a: u32) -> u64 {
    debug_assert!(l > 2 && is_prime(l));
    let m = l.pow(a);
    let phi = m / l * (l - 1);
    let qs = prime_divisors(phi);
    (2..m)
        .find(|&g| g % l != 0 && qs.iter().all(|&q| pow_mod(g, phi / q, m) != 1))
        .expect("odd prime powers have primitive roots")
}

/// Solve x = r_i (mod m_i) for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        let mi128 = mi as u128;
        // find t with x + m t = r (mod mi)
        let inv = mod_inverse((m % mi128) as u64, mi).expect("moduli must be coprime");
        let diff = ((r as u128 % mi128) + mi128 - x % mi128) % mi128;
        let t = diff * inv as u128 % mi128;
        x += m * t;
        m *= mi128;
        x %= m;
    }
    x as u64
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Parse a comma separated list of unsigned integers, ignoring blanks.
pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, std::num::ParseIntError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factor(65520), vec![(2, 4), (3, 2), (5, 1), (7, 1), (13, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(dedekind_psi(12), 24);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn primes_and_roots() {
        assert_eq!(primes_upto(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(691));
        assert!(!is_prime(1));
        assert_eq!(primitive_root_prime_power(7, 1), 3);
        assert_eq!(primitive_root_prime_power(3, 2), 2);
        assert_eq!(mult_order(2, 7, 6), 3);
    }

    #[test]
    fn crt_combines() {
        let x = crt(&[(3, 4), (1, 3)]);
        assert_eq!(x % 4, 3);
        assert_eq!(x % 3, 1);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
