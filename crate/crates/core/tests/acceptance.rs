//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! All comparisons are exact equalities in the coefficient field; the only
//! tolerance is the truncation precision, pinned per criterion below. The
//! process exits nonzero when a criterion fails unexpectedly, or on any
//! failure when run with `--strict`.

use std::panic::{self, AssertUnwindSafe};

use kats_core::arith;
use kats_core::characters::{
    classical_bernoulli, gen_bernoulli, p_integral_check, CharError, CycloRational,
    LiftedCharacter,
};
use kats_core::corpus::{corpus_get, CorpusError};
use kats_core::eisenstein::{katz_eisenstein, EisError};
use kats_core::linalg;
use kats_core::newform::{
    check_cor37, combined_old_generators, compare_eigensystems, lemma31_kill, membership,
    oldform_eigenform_at_l, theorem13_decompose, theta_kernel_decompose, Comparison, Cor37Case,
    NewformError, Verdict,
};
use kats_core::qseries::{
    degeneracy_bd, frobenius, hasse_mult, hecke_tn, theta, FormFlags, ModularForm, QError,
    QExpansion,
};
use kats_core::{DirichletCharacter, FieldElement, FiniteField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6b617473;

/// Criteria whose literal statement cannot hold; see the notes printed with
/// their FAIL line.
const KNOWN_UNATTAINABLE: &[u32] = &[10];

struct Fail(String);

macro_rules! fail_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Fail {
            fn from(e: $t) -> Self {
                Fail(e.to_string())
            }
        }
    )*};
}

fail_from!(String, &str, QError, NewformError, EisError, CorpusError, CharError);

type Outcome = Result<String, Fail>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

fn f7() -> FiniteField {
    FiniteField::prime(7).unwrap()
}

fn chi4(f: &FiniteField) -> DirichletCharacter {
    DirichletCharacter::new(4, &[(3, f.from_int(-1))], f).unwrap()
}

fn chi3(f: &FiniteField) -> DirichletCharacter {
    DirichletCharacter::new(3, &[(2, f.from_int(-1))], f).unwrap()
}

fn chi5_quadratic(f: &FiniteField) -> DirichletCharacter {
    DirichletCharacter::new(5, &[(2, f.from_int(-1))], f).unwrap()
}

fn eis(k: u64, e: &DirichletCharacter, ep: &DirichletCharacter, prec: u64) -> ModularForm {
    katz_eisenstein(k, e, ep, 1, prec).unwrap().form
}

fn random_form(rng: &mut ChaCha8Rng, field: &FiniteField, level: u64, weight: u64, prec: u64) -> ModularForm {
    let coeffs = (0..=prec)
        .map(|_| field.from_index(rng.gen_range(0..field.order())))
        .collect();
    let chi = DirichletCharacter::trivial(1, field);
    ModularForm::new(
        QExpansion::new(field, coeffs).unwrap(),
        level,
        weight,
        &chi,
        FormFlags::default(),
    )
    .unwrap()
}

/// `eps(l) l^{k-1} + eps'(l)`.
fn eis_eigenvalue(k: u64, e: &DirichletCharacter, ep: &DirichletCharacter, l: u64) -> FieldElement {
    let f = e.target();
    &(&e.eval(l as i64) * &f.from_u64(l).pow_u64(k - 1)) + &ep.eval(l as i64)
}

// 1. T_l Ebar = lambda_l Ebar coefficientwise to precision 200.
fn criterion_1() -> Outcome {
    const PREC: u64 = 200;
    let f = f7();
    let one = DirichletCharacter::trivial(1, &f);
    let primes = [2u64, 3, 5, 11, 13, 17, 19];
    let cases = [
        (4, one.clone(), one.clone()),
        (3, chi4(&f), one.clone()),
        (3, one.clone(), chi4(&f)),
    ];
    for (k, e, ep) in &cases {
        let form = eis(*k, e, ep, PREC * 19);
        for &l in &primes {
            let lambda = eis_eigenvalue(*k, e, ep, l);
            let tl = hecke_tn(&form, l)?;
            for m in 0..=PREC {
                check(tl.coeff(m) == &(&lambda * form.coeff(m)), || {
                    format!("k={k} eps={e} eps'={ep}: T_{l} fails at a_{m}")
                })?;
            }
        }
    }
    Ok(format!(
        "E_4 and E_3 with the odd mod-4 character in both slots, l in {primes:?}, a_0..a_{PREC}"
    ))
}

// 2. Delta mod 691 equals the normalized reduction of E_12.
fn criterion_2() -> Outcome {
    const PREC: u64 = 200;
    let delta = corpus_get("delta", 691, PREC)?;
    let f = delta.field().clone();
    let one = DirichletCharacter::trivial(1, &f);
    let kz = katz_eisenstein(12, &one, &one, 1, PREC)?;
    check(kz.form.coeff(0).is_zero(), || "c_0(E_12) is nonzero mod 691".into())?;
    let e12 = kz.form.normalize()?;
    if let Some(n) = e12.qexp().first_difference(delta.qexp()) {
        return Err(format!("mismatch at a_{n}").into());
    }
    Ok(format!("c_0 = {} reduces to 0; a_0..a_{PREC} agree", kz.c0))
}

// 3. Delta mod 2 is supported exactly on odd squares.
fn criterion_3() -> Outcome {
    const PREC: u64 = 2000;
    let d = corpus_get("delta", 2, PREC)?;
    for n in 0..=PREC {
        let r = (n as f64).sqrt() as u64;
        let odd_square = n % 2 == 1 && (r * r == n || (r + 1) * (r + 1) == n);
        check(d.coeff(n).is_one() == odd_square, || format!("a_{n} wrong"))?;
    }
    Ok(format!("n <= {PREC}"))
}

// 4. Theta-kernel round trip and rejection witnesses.
fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut rejected = 0;
    for trial in 0..100 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let field = FiniteField::prime(p).unwrap();
        let l = rng.gen_range(0..12u64);
        let r = rng.gen_range(0..p);
        let level = [1u64, 2, 4, 11][rng.gen_range(0..4)];
        let level = if level % p == 0 { 1 } else { level };
        let g = random_form(&mut rng, &field, level, l, 30);
        let big = hasse_mult(&frobenius(&g), r);
        let (r2, g2) = theta_kernel_decompose(&big).map_err(|e| format!("trial {trial}: {e}"))?;
        check(r2 == r && g2.weight() == l && g2.level() == level && g2.qexp() == g.qexp(), || {
            format!("trial {trial}: p={p} l={l} r={r} recovered r={r2} weight {}", g2.weight())
        })?;

        let mut q = big.qexp().clone();
        let mut witness = u64::MAX;
        for _ in 0..rng.gen_range(1..4) {
            let n = loop {
                let n = rng.gen_range(1..=big.prec());
                if n % p != 0 {
                    break n;
                }
            };
            let v = field.from_u64(rng.gen_range(1..p));
            q.set(n, v);
            witness = witness.min(n);
        }
        match theta_kernel_decompose(&big.with_qexp(q)) {
            Err(NewformError::ThetaNonzero(n)) if n == witness => rejected += 1,
            other => return Err(format!("trial {trial}: expected witness {witness}, got {other:?}").into()),
        }
    }
    Ok(format!("100 round trips over p in {{3,5,7}}; {rejected} perturbed inputs rejected with the first witness"))
}

// 5. Commutation of B_d, A, Frob and T_n.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut count = 0;
    for trial in 0..50 {
        let p = [5u64, 7, 11][rng.gen_range(0..3)];
        let field = FiniteField::prime(p).unwrap();
        let level = [1u64, 2, 3, 4][rng.gen_range(0..4)];
        let k = rng.gen_range(1..8u64);
        let f = random_form(&mut rng, &field, level, k, 60);
        let d = [1u64, 2, 3][rng.gen_range(0..3)];
        let n = loop {
            let n = rng.gen_range(1..7u64);
            if n % p != 0 {
                break n;
            }
        };
        let t = rng.gen_range(1..4u64);
        let m = level * d;
        let same = |a: &ModularForm, b: &ModularForm, what: &str| {
            check(
                a.weight() == b.weight()
                    && a.level() == b.level()
                    && a.qexp().eq_upto_common(b.qexp()),
                || format!("trial {trial}: {what} (p={p} N={level} k={k} d={d} n={n})"),
            )
        };
        same(
            &degeneracy_bd(&frobenius(&f), d, m)?,
            &frobenius(&degeneracy_bd(&f, d, m)?),
            "B_d Frob",
        )?;
        same(
            &degeneracy_bd(&hasse_mult(&f, t), d, m)?,
            &hasse_mult(&degeneracy_bd(&f, d, m)?, t),
            "B_d A",
        )?;
        same(&hasse_mult(&hecke_tn(&f, n)?, t), &hecke_tn(&hasse_mult(&f, t), n)?, "A T_n")?;
        same(&frobenius(&hecke_tn(&f, n)?), &hecke_tn(&frobenius(&f), n)?, "Frob T_n")?;
        count += 4;
    }
    Ok(format!("{count} identities on 50 random forms, zero mismatches"))
}

// 6. Killing coefficients at 2 and 3 on level-12 Eisenstein series.
fn criterion_6() -> Outcome {
    const PREC: u64 = 150;
    let f = f7();
    let (c4, c3) = (chi4(&f), chi3(&f));
    let mut checked = 0;
    for k in [2u64, 4] {
        for (e, ep) in [(&c4, &c3), (&c3, &c4)] {
            let form = eis(k, e, ep, PREC);
            for s in [vec![2u64], vec![3], vec![2, 3]] {
                let g = lemma31_kill(&form, &s)?;
                for &l in &s {
                    let mut lm = l;
                    while lm <= PREC {
                        check(g.coeff(lm).is_zero(), || format!("k={k} S={s:?}: a_{lm} != 0"))?;
                        lm *= l;
                    }
                }
                for l in arith::primes_upto(PREC) {
                    if !s.contains(&l) {
                        check(g.coeff(l) == form.coeff(l), || {
                            format!("k={k} S={s:?}: a_{l} changed")
                        })?;
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (form, S) pairs at level 12, precision {PREC}"))
}

fn roots(field: &FiniteField, b: &FieldElement, c: &FieldElement) -> Vec<FieldElement> {
    (0..field.order())
        .map(|i| field.from_index(i))
        .filter(|x| (&(&(x * x) - &(b * x)) + c).is_zero())
        .collect()
}

// 7. Oldform eigenforms at an auxiliary prime.
fn criterion_7() -> Outcome {
    const PREC: u64 = 150;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    // degree two so every Hecke polynomial splits
    let field = FiniteField::new(7, 2).unwrap();
    let one = DirichletCharacter::trivial(1, &field);
    let c4 = chi4(&field);
    let sources = [
        (4u64, one.clone(), one.clone()),
        (3, c4.clone(), one.clone()),
        (3, one.clone(), c4.clone()),
    ];
    let candidates = [3u64, 5, 11, 13];
    for trial in 0..20 {
        let (k, e, ep) = &sources[rng.gen_range(0..sources.len())];
        let l = loop {
            let l = candidates[rng.gen_range(0..candidates.len())];
            if (7 * e.modulus() * ep.modulus()) % l != 0 {
                break l;
            }
        };
        let f = eis(*k, e, ep, PREC * l);
        let c = &f.character().eval(l as i64) * &field.from_u64(l).pow_u64(k - 1);
        let rs = roots(&field, f.coeff(l), &c);
        check(!rs.is_empty(), || format!("trial {trial}: no root at l={l}"))?;
        let alpha = rs[rng.gen_range(0..rs.len())].clone();
        let g = oldform_eigenform_at_l(&f, l, &alpha)?;
        let tl = hecke_tn(&g, l)?;
        for m in 0..=PREC {
            check(tl.coeff(m) == &(&alpha * g.coeff(m)), || {
                format!("trial {trial}: T_{l} g != alpha g at a_{m}")
            })?;
        }
        let rep = check_cor37(&g, &f)?;
        let row = rep.row(l).ok_or("missing row")?;
        check(row.case == Cor37Case::III && row.holds(), || {
            format!("trial {trial}: l={l} classified {} holds={}", row.case, row.holds())
        })?;
    }
    Ok(format!("20 triples over F_49, U_l eigenvalue verified to a_{PREC}, case (iii) satisfied"))
}

// 8. Membership soundness.
fn criterion_8() -> Outcome {
    const PREC: u64 = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let f = f7();
    let one = DirichletCharacter::trivial(1, &f);
    let e4 = eis(4, &one, &one, PREC);
    let basis = combined_old_generators(&e4, 6, 28)?;
    let n = basis.generators.len();
    for (i, (label, g)) in basis.generators.iter().enumerate() {
        let r = membership(g, &basis)?;
        let mut e_i = vec![f.zero(); n];
        e_i[i] = f.one();
        check(r.verdict == Verdict::Member && r.coefficients == e_i, || {
            format!("generator {label} not certified")
        })?;
    }
    let cols: Vec<Vec<FieldElement>> = basis
        .generators
        .iter()
        .map(|(_, g)| g.qexp().coeffs()[..=PREC as usize].to_vec())
        .collect();
    let base_rank = linalg::rank(&f, &cols);
    let mut perturbed = 0;
    while perturbed < 50 {
        let idx = rng.gen_range(0..=PREC);
        let mut unit = vec![f.zero(); PREC as usize + 1];
        unit[idx as usize] = f.one();
        let mut with = cols.clone();
        with.push(unit);
        if linalg::rank(&f, &with) == base_rank {
            continue;
        }
        let mut q = QExpansion::zero(&f, PREC);
        for ((_, g), _) in basis.generators.iter().zip(0..) {
            q = q.add(&g.qexp().scale(&f.from_u64(rng.gen_range(0..7))))?;
        }
        let bump = f.from_u64(rng.gen_range(1..7));
        q.set(idx, q.coeff(idx) + &bump);
        let target = basis.generators[0].1.with_qexp(q);
        let r = membership(&target, &basis)?;
        match r.verdict {
            Verdict::NonMember { witness } if witness >= idx => perturbed += 1,
            other => return Err(format!("perturbation at {idx} gave {other:?}").into()),
        }
    }
    let low = 20;
    let short: Vec<_> = basis.generators.iter().map(|(_, g)| g.truncate(low)).collect();
    let short_basis = kats_core::newform::OldSpaceBasis {
        generators: basis
            .labels()
            .into_iter()
            .zip(short.iter().cloned())
            .collect(),
        ..basis.clone()
    };
    for g in &short {
        let r = membership(g, &short_basis)?;
        check(r.verdict == Verdict::MemberUpToPrecision, || {
            format!("precision {low} below bound {} not labelled", r.sturm)
        })?;
    }
    Ok(format!(
        "{n} generators at level 6 weight 28 certified; 50 perturbations rejected; precision {low} labelled up to precision"
    ))
}

// 9. Two-stage decomposition round trip.
fn criterion_9() -> Outcome {
    const PREC: u64 = 150;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let f = f7();
    let one = DirichletCharacter::trivial(1, &f);
    let e4 = eis(4, &one, &one, PREC);
    let rand_elem = |rng: &mut ChaCha8Rng| f.from_u64(rng.gen_range(0..7));
    for trial in 0..10 {
        let (b0, b1) = loop {
            let (x, y) = (rand_elem(&mut rng), rand_elem(&mut rng));
            if !(x.is_zero() && y.is_zero()) {
                break (x, y);
            }
        };
        let (g1, g2) = loop {
            let (x, y) = (rand_elem(&mut rng), rand_elem(&mut rng));
            if !(x.is_zero() && y.is_zero()) {
                break (x, y);
            }
        };
        let a4 = hasse_mult(&e4, 4);
        let f1 = a4.with_qexp(a4.qexp().scale(&b0).add(&frobenius(&e4).qexp().scale(&b1))?);
        let up1 = degeneracy_bd(&f1, 1, 2)?;
        let up2 = degeneracy_bd(&f1, 2, 2)?;
        let big = up1.with_qexp(up1.qexp().scale(&g1).add(&up2.qexp().scale(&g2))?);
        let cert = theorem13_decompose(&big, &e4).map_err(|e| format!("trial {trial}: {e}"))?;
        let rebuilt = cert.reconstruct()?;
        check(rebuilt.prec() >= PREC && rebuilt.truncate(PREC) == big.qexp().truncate(PREC), || {
            format!("trial {trial}: reconstruction differs at {:?}", rebuilt.first_difference(big.qexp()))
        })?;
    }
    Ok(format!("10 random (beta, gamma) at level 2 weight 28, exact to a_{PREC}"))
}

// 10. Swapped characters at k = 1 mod (p - 1).
fn criterion_10() -> Outcome {
    const BOUND: u64 = 200;
    let f = f7();
    let (c4, c3) = (chi4(&f), chi3(&f));
    let bad = [2u64, 3, 7];
    // k = 4: both orders exist and must diverge
    let a = eis(4, &c4, &c3, BOUND);
    let b = eis(4, &c3, &c4, BOUND);
    let k4 = match compare_eigensystems(&a, &b, &bad, BOUND)? {
        Comparison::Divergence { l, .. } => format!("k=4 diverges at l={l}"),
        Comparison::Equal { .. } => return Err("k=4 unexpectedly equal".into()),
    };
    // k = 7: literal statement
    match katz_eisenstein(7, &c4, &c3, 1, BOUND) {
        Ok(kz) => {
            let b = eis(7, &c3, &c4, BOUND);
            let c = compare_eigensystems(&kz.form, &b, &bad, BOUND)?;
            check(c.is_equal(), || "k=7 diverges".into())?;
            Ok(format!("{k4}; k=7 equal"))
        }
        Err(EisError::ParityViolation { .. }) => {
            let variant = criterion_10_variant().map_err(|Fail(m)| Fail(format!("variant failed: {m}")))?;
            Err(Fail(format!(
                "{k4}, but k=7 cannot be built: both characters are odd, so their product is even \
                 while k is odd, and E_7 with these characters is zero (ParityViolation). \
                 Variant with conductors 4 and 5: {variant}"
            )))
        }
        Err(e) => Err(e.into()),
    }
}

/// Same phenomenon with a parity-compatible pair: the odd mod-4 character
/// and the even quadratic mod-5 character.
fn criterion_10_variant() -> Outcome {
    const BOUND: u64 = 200;
    let f = f7();
    let (c4, c5) = (chi4(&f), chi5_quadratic(&f));
    let bad = [2u64, 5, 7];
    let eq = compare_eigensystems(&eis(7, &c4, &c5, BOUND), &eis(7, &c5, &c4, BOUND), &bad, BOUND)
        ?;
    let ne = compare_eigensystems(&eis(3, &c4, &c5, BOUND), &eis(3, &c5, &c4, BOUND), &bad, BOUND)
        ?;
    match (eq.is_equal(), &ne) {
        (true, Comparison::Divergence { l, .. }) => Ok(format!("k=7 equal, k=3 diverges at l={l}")),
        _ => Err("variant failed".into()),
    }
}

// 11. theta^{p-1} keeps a_l for l != p.
fn criterion_11() -> Outcome {
    const PREC: u64 = 200;
    let f = f7();
    let one = DirichletCharacter::trivial(1, &f);
    let mut forms = vec![
        eis(4, &one, &one, PREC),
        eis(3, &chi4(&f), &one, PREC),
        eis(3, &one, &chi4(&f), PREC),
    ];
    for name in ["delta", "E4", "E6", "E8", "E10", "E14"] {
        forms.push(corpus_get(name, 7, PREC)?);
    }
    for form in &forms {
        let th = theta(form);
        check(th.coeff(0).is_zero(), || "a_0(theta f) != 0".into())?;
        let t6 = (1..6).fold(th, |g, _| theta(&g));
        for l in arith::primes_upto(PREC) {
            if l != 7 {
                check(t6.coeff(l) == form.coeff(l), || format!("a_{l} moved on {form:?}"))?;
            }
        }
    }
    Ok(format!("{} forms, primes up to {PREC}", forms.len()))
}

/// Akiyama-Tanigawa, giving `B_1 = +1/2`.
fn bernoulli_oracle(n: usize) -> BigRational {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
    }
    a[0].clone()
}

// 12. Generalized Bernoulli numbers and the integrality gate.
fn criterion_12() -> Outcome {
    let triv = LiftedCharacter::trivial();
    for k in 0..=30u64 {
        let got = gen_bernoulli(k, &triv)?;
        let want = bernoulli_oracle(k as usize);
        check(got.as_rational() == Some(&want) || (want.is_zero() && got.is_zero()), || {
            format!("B_{k}: {got} vs {want}")
        })?;
        let classical = classical_bernoulli(k);
        let expect = if k == 1 { -classical } else { classical };
        check(want == expect, || format!("oracles disagree at k={k}"))?;
    }
    let gate = |p: u64, k: u64| {
        let q = classical_bernoulli(k) / BigRational::from_integer(BigInt::from(2 * k));
        p_integral_check(&CycloRational::from_rational(1, q), p)
    };
    check(!gate(2, 4), || "(2, 4) accepted".into())?;
    check(gate(7, 4), || "(7, 4) rejected".into())?;
    check(gate(691, 12), || "(691, 12) rejected".into())?;
    Ok("k <= 30 against an independent oracle; gate rejects (2,4), accepts (7,4), (691,12)".into())
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "Eisenstein eigenform law", criterion_1),
        (2, "Ramanujan congruence mod 691", criterion_2),
        (3, "Delta mod 2 support", criterion_3),
        (4, "theta-kernel round trip", criterion_4),
        (5, "operator commutation", criterion_5),
        (6, "coefficient killing at level 12", criterion_6),
        (7, "oldform eigenform at auxiliary prime", criterion_7),
        (8, "membership soundness", criterion_8),
        (9, "two-stage decomposition round trip", criterion_9),
        (10, "swapped Eisenstein characters", criterion_10),
        (11, "theta^(p-1) eigensystem preservation", criterion_11),
        (12, "Bernoulli gate", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    println!("acceptance: exact equality throughout, seed {SEED:#x}");
    let mut unexpected = Vec::new();
    let mut failed = 0;
    for (id, name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(Fail(format!("panic: {msg}")))
            });
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(Fail(detail)) => {
                failed += 1;
                let known = KNOWN_UNATTAINABLE.contains(&id);
                let tag = if known { " (known)" } else { "" };
                println!("criterion {id:>2} FAIL{tag}  {name}: {detail}");
                if !known {
                    unexpected.push(id);
                }
            }
        }
    }
    println!(
        "acceptance: {} PASS, {failed} FAIL, unexpected failures {unexpected:?}",
        12 - failed
    );
    if !unexpected.is_empty() || (strict && failed > 0) {
        std::process::exit(1);
    }
}
