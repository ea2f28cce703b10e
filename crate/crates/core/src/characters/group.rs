//! The unit group `(Z/NZ)^*` split by CRT into prime-power factors, each with
//! fixed generators and a discrete-log table.

use crate::arith;

const NOT_A_UNIT: [u32; 2] = [u32::MAX, u32::MAX];

#[derive(Debug)]
pub(crate) struct Component {
    pub prime: u64,
    pub exp: u32,
    pub modulus: u64,
    /// local generators (residue mod `modulus`, order)
    pub gens: Vec<(u64, u64)>,
    /// residue -> exponents with respect to `gens`
    dlog: Vec<[u32; 2]>,
}

impl Component {
    fn new(prime: u64, exp: u32) -> Self {
        let modulus = prime.pow(exp);
        let mut dlog = vec![NOT_A_UNIT; modulus as usize];
        let gens = if prime == 2 {
            match exp {
                1 => {
                    dlog[1] = [0, 0];
                    vec![]
                }
                2 => {
                    dlog[1] = [0, 0];
                    dlog[3] = [1, 0];
                    vec![(3, 2)]
                }
                _ => {
                    let half = modulus / 4;
                    for s in 0..2u32 {
                        let mut r = if s == 0 { 1 } else { modulus - 1 };
                        for e in 0..half {
                            dlog[r as usize] = [s, e as u32];
                            r = r * 5 % modulus;
                        }
                    }
                    vec![(modulus - 1, 2), (5, half)]
                }
            }
        } else {
            let g = arith::primitive_root_prime_power(prime, exp);
            let phi = modulus / prime * (prime - 1);
            let mut r = 1u64;
            for e in 0..phi {
                dlog[r as usize] = [e as u32, 0];
                r = r * g % modulus;
            }
            vec![(g, phi)]
        };
        Component {
            prime,
            exp,
            modulus,
            gens,
            dlog,
        }
    }

    /// Exponents of a residue with respect to the local generators.
    pub fn log(&self, residue: u64) -> Option<[u32; 2]> {
        let v = self.dlog[(residue % self.modulus) as usize];
        (v != NOT_A_UNIT).then_some(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Generator {
    /// residue mod N
    pub residue: u64,
    pub order: u64,
    pub component: usize,
    pub slot: usize,
}

#[derive(Debug)]
pub(crate) struct UnitGroup {
    pub modulus: u64,
    pub components: Vec<Component>,
    pub generators: Vec<Generator>,
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let components: Vec<Component> = arith::factor(modulus)
            .into_iter()
            .map(|(l, a)| Component::new(l, a))
            .collect();
        let mut generators = Vec::new();
        for (ci, c) in components.iter().enumerate() {
            for (slot, &(g, order)) in c.gens.iter().enumerate() {
                let residues: Vec<(u64, u64)> = components
                    .iter()
                    .enumerate()
                    .map(|(cj, other)| (if cj == ci { g } else { 1 }, other.modulus))
                    .collect();
                generators.push(Generator {
                    residue: arith::crt(&residues),
                    order,
                    component: ci,
                    slot,
                });
            }
        }
        UnitGroup {
            modulus,
            components,
            generators,
        }
    }

    /// Discrete logs of `m` against every generator, or `None` if `gcd(m, N) > 1`.
    pub fn log(&self, m: u64) -> Option<Vec<u64>> {
        let mut per_comp = Vec::with_capacity(self.components.len());
        for c in &self.components {
            per_comp.push(c.log(m % c.modulus)?);
        }
        Some(
            self.generators
                .iter()
                .map(|g| per_comp[g.component][g.slot] as u64)
                .collect(),
        )
    }
}

/// Canonical generators of `(Z/NZ)^*` as `(residue mod N, order)`.
pub fn unit_group_generators(modulus: u64) -> Vec<(u64, u64)> {
    UnitGroup::new(modulus)
        .generators
        .iter()
        .map(|g| (g.residue, g.order))
        .collect()
}
