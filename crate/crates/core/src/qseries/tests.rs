use super::*;
use crate::arith;
use proptest::prelude::*;

fn f7() -> FiniteField {
    FiniteField::prime(7).unwrap()
}

fn sigma(k: u32, n: u64) -> u64 {
    arith::divisors(n).iter().map(|&d| d.pow(k)).sum()
}

/// Reduction of E_4 with constant term 1/240, straight from divisor sums.
fn e4_mod7(prec: u64) -> ModularForm {
    let f = f7();
    let mut c = vec![f.from_int(4)];
    c.extend((1..=prec).map(|n| f.from_u64(sigma(3, n) % 7)));
    ModularForm::level_one(QExpansion::new(&f, c).unwrap(), 4, FormFlags::default()).unwrap()
}

fn chi4() -> DirichletCharacter {
    let f = f7();
    DirichletCharacter::new(4, &[(3, f.from_int(-1))], &f).unwrap()
}

#[test]
fn hecke_identity_and_e4() {
    let e4 = e4_mod7(60);
    assert_eq!(hecke_tn(&e4, 1).unwrap(), e4);
    let t2 = hecke_tn(&e4, 2).unwrap();
    assert_eq!(t2.prec(), 30);
    assert_eq!(t2.coeff(1), &f7().from_int(2));
    assert_eq!(t2.qexp(), &e4.qexp().truncate(30).scale(&f7().from_int(2)));
}

#[test]
fn hecke_at_level_prime_is_u() {
    let f = f7();
    let qe = QExpansion::from_ints(&f, &[0, 1, 3, 5, 2, 6, 1, 4, 4, 0, 1, 2, 3]);
    let g = ModularForm::new(qe, 4, 3, &chi4(), FormFlags::default()).unwrap();
    let t2 = hecke_tn(&g, 2).unwrap();
    for m in 0..=t2.prec() {
        assert_eq!(t2.coeff(m), g.coeff(2 * m));
    }
}

#[test]
fn hecke_weight_zero_at_p() {
    let f = f7();
    let g = ModularForm::level_one(QExpansion::from_ints(&f, &[1; 30]), 0, FormFlags::default())
        .unwrap();
    assert_eq!(
        hecke_tn(&g, 7).unwrap_err(),
        QError::HeckeUndefined { n: 7, d: 7, p: 7 }
    );
    assert!(hecke_tn(&g, 2).is_ok());
    assert!(matches!(hecke_tn(&g, 30), Err(QError::PrecisionUnderflow(0))));
}

#[test]
fn diamond_scalar() {
    let f = f7();
    let g = ModularForm::new(
        QExpansion::from_ints(&f, &[0, 1, 2]),
        4,
        3,
        &chi4(),
        FormFlags::default(),
    )
    .unwrap();
    assert_eq!(diamond(&g, 1).unwrap(), g);
    assert_eq!(diamond(&g, 3).unwrap().qexp(), &g.qexp().scale(&f.from_int(6)));
    assert_eq!(
        diamond(&g, 2).unwrap_err(),
        QError::NotCoprime { d: 2, level: 4 }
    );
}

#[test]
fn theta_and_hasse() {
    let f = f7();
    let mut c = vec![f.zero(); 11];
    c[0] = f.from_int(5);
    c[7] = f.from_int(3);
    c[3] = f.from_int(2);
    let g = ModularForm::level_one(QExpansion::new(&f, c).unwrap(), 4, FormFlags::default())
        .unwrap();
    let th = theta(&g);
    assert!(th.coeff(0).is_zero());
    assert!(th.coeff(7).is_zero());
    assert_eq!(th.coeff(3), &f.from_int(6));
    assert_eq!(th.weight(), 12);
    assert!(th.flags.cuspidal);

    assert_eq!(hasse_mult(&g, 0), g);
    let a = hasse_mult(&g, 1);
    assert_eq!(a.weight(), 10);
    assert_eq!(a.qexp(), g.qexp());
}

#[test]
fn frobenius_basics() {
    let f = f7();
    let q = ModularForm::level_one(QExpansion::from_ints(&f, &[0, 1, 0]), 4, FormFlags::default())
        .unwrap();
    let fq = frobenius(&q);
    assert_eq!(fq.weight(), 28);
    assert_eq!(fq.prec(), 14);
    assert!(fq.coeff(7).is_one());
    assert!(theta(&fq).qexp().is_zero());
}

#[test]
fn degeneracy_and_division() {
    let f = f7();
    let g = ModularForm::level_one(QExpansion::from_ints(&f, &[0, 1, 3]), 2, FormFlags::default())
        .unwrap();
    assert_eq!(degeneracy_bd(&g, 1, 1).unwrap(), g);
    let b2 = degeneracy_bd(&g, 2, 2).unwrap();
    assert_eq!(b2.level(), 2);
    assert_eq!(b2.qexp(), &QExpansion::from_ints(&f, &[0, 0, 1, 0, 3]));
    assert!(matches!(
        degeneracy_bd(&g, 7, 7),
        Err(QError::CharacteristicDividesLevel { p: 7, .. })
    ));
    assert!(matches!(
        degeneracy_bd(&g, 2, 3),
        Err(QError::BadLevelDivisibility { .. })
    ));

    let h = divide_exponents(&b2, 2).unwrap();
    assert_eq!(h.level(), 1);
    assert_eq!(h.qexp(), g.qexp());
    assert_eq!(divide_exponents(&g, 2).unwrap_err(), QError::NotPure(1));
    let pure_l1 = ModularForm::level_one(
        QExpansion::from_ints(&f, &[0, 0, 1, 0, 1]),
        2,
        FormFlags::default(),
    )
    .unwrap();
    assert_eq!(
        divide_exponents(&pure_l1, 2).unwrap_err(),
        QError::NonIntegralLevel { l: 2, level: 1 }
    );
}

#[test]
fn e4_eigenvalues() {
    let e4 = e4_mod7(40);
    let EigenCheck::Eigen(table) = is_eigen_upto(&e4, 20, &[]).unwrap() else {
        panic!("E4 is an eigenform");
    };
    let expect = [(2, 2), (3, 0), (5, 0), (7, 1), (11, 2), (13, 0), (17, 0), (19, 0)];
    for (l, v) in expect {
        assert_eq!(table[&l], f7().from_int(v), "l = {l}");
    }

    let mut bad = e4.qexp().clone();
    bad.set(4, &bad.coeff(4).clone() + &f7().one());
    let check = is_eigen_upto(&e4.with_qexp(bad), 20, &[]).unwrap();
    assert!(matches!(check, EigenCheck::Failure { l: 2, m: 2, .. }));

    let zero = e4.with_qexp(QExpansion::zero(&f7(), 10));
    assert_eq!(is_eigen_upto(&zero, 5, &[]).unwrap_err(), QError::NotNormalizable);
}

#[test]
fn form_file_round_trip() {
    let f9 = FiniteField::new(3, 2).unwrap();
    let chi = DirichletCharacter::new(5, &[(2, f9.nth_root_of_unity(4).unwrap())], &f9).unwrap();
    let coeffs: Vec<_> = (0..20).map(|i| f9.from_index((i * i + 1) % 9)).collect();
    let flags = FormFlags {
        cuspidal: false,
        asserted_newform: true,
        asserted_minimal_weight: false,
    };
    let g = ModularForm::new(QExpansion::new(&f9, coeffs).unwrap(), 10, 3, &chi, flags).unwrap();
    let text = serialize_form(&g);
    assert!(text.starts_with("p=3 d=2 modulus=1,0,1\nN=10 k=3 char=chi(10;"));
    assert_eq!(parse_form(&text).unwrap(), g);

    let hand = "p=7 d=1 modulus=0,1\nN=4 k=3 char=chi(4; 3:6) flags=cuspidal\nprec=3\na1=1\na3=[2]\n";
    let h = parse_form(hand).unwrap();
    assert_eq!(h.character(), &chi4());
    assert_eq!(h.coeff(3), &f7().from_int(2));
    assert!(h.coeff(2).is_zero());
    assert!(matches!(
        parse_form("p=7 d=1 modulus=0,1\nN=1 k=4 char=chi(1) flags=\nprec=2\na5=1\n"),
        Err(QError::Parse { line: 4, .. })
    ));
}

#[test]
fn weight_words_collapse() {
    // every word reaching k' yields f(q^{p^j}) with j admissible
    for p in [2u64, 3, 5, 7] {
        for k in 1..=6u64 {
            for target in k..=(p * p * k + 4 * (p - 1)) {
                let mut js: Vec<u32> = WeightWord::enumerate(k, p, target)
                    .iter()
                    .map(|w| {
                        assert_eq!(w.weight(k, p), target);
                        w.frob_count()
                    })
                    .collect();
                js.sort();
                js.dedup();
                let predicted: Vec<u32> = (0..8)
                    .filter(|&j| {
                        let w = p.pow(j) * k;
                        w <= target && (target - w) % (p - 1) == 0
                    })
                    .collect();
                assert_eq!(js, predicted, "p {p} k {k} k' {target}");
            }
        }
    }
}

fn random_form(seed: &[i64], level: u64, weight: u64, chi: &DirichletCharacter) -> ModularForm {
    let f = chi.target().clone();
    ModularForm::new(QExpansion::from_ints(&f, seed), level, weight, chi, FormFlags::default())
        .unwrap()
}

proptest! {
    #[test]
    fn theta_power_fixes_prime_to_p(seed in prop::collection::vec(-50i64..50, 30..60)) {
        let g = random_form(&seed, 1, 4, &DirichletCharacter::trivial(1, &f7()));
        let t = (0..6).fold(g.clone(), |h, _| theta(&h));
        for n in 0..=g.prec() {
            let expect = if n % 7 == 0 { f7().zero() } else { g.coeff(n).clone() };
            prop_assert_eq!(t.coeff(n), &expect);
        }
    }

    #[test]
    fn hecke_multiplicative(seed in prop::collection::vec(-50i64..50, 120..160), pick in 0usize..3) {
        let (m, n) = [(2u64, 3u64), (3, 5), (4, 5)][pick];
        let g = random_form(&seed, 4, 3, &chi4());
        let mn = hecke_tn(&g, m * n).unwrap();
        let a = hecke_tn(&hecke_tn(&g, m).unwrap(), n).unwrap();
        let b = hecke_tn(&hecke_tn(&g, n).unwrap(), m).unwrap();
        prop_assert!(mn.qexp().eq_upto_common(a.qexp()));
        prop_assert!(a.qexp().eq_upto_common(b.qexp()));
    }

    #[test]
    fn commutation_rules(seed in prop::collection::vec(-50i64..50, 40..80), d in 1u64..4, n in 1u64..6) {
        let g = random_form(&seed, 4, 3, &chi4());
        let m = 4 * d;
        let l = degeneracy_bd(&frobenius(&g), d, m).unwrap();
        let r = frobenius(&degeneracy_bd(&g, d, m).unwrap());
        prop_assert!(l.qexp().eq_upto_common(r.qexp()));
        let l = degeneracy_bd(&hasse_mult(&g, 2), d, m).unwrap();
        let r = hasse_mult(&degeneracy_bd(&g, d, m).unwrap(), 2);
        prop_assert_eq!(l, r);
        let l = hasse_mult(&hecke_tn(&g, n).unwrap(), 1);
        let r = hecke_tn(&hasse_mult(&g, 1), n).unwrap();
        prop_assert_eq!(l, r);
        let l = frobenius(&hecke_tn(&g, n).unwrap());
        let r = hecke_tn(&frobenius(&g), n).unwrap();
        prop_assert!(l.qexp().eq_upto_common(r.qexp()));
    }

    #[test]
    fn divide_undoes_degeneracy(seed in prop::collection::vec(-50i64..50, 5..40), l in prop::sample::select(vec![2u64, 3, 5])) {
        let g = random_form(&seed, 4, 3, &chi4());
        let up = degeneracy_bd(&g, l, 4 * l).unwrap();
        let back = divide_exponents(&up, l).unwrap();
        prop_assert_eq!(back.qexp(), g.qexp());
        prop_assert_eq!(back.level(), 4);
        prop_assert_eq!(back.character(), g.character());
    }
}
