use std::fs;

use kats_core::characters::DirichletCharacter;
use kats_core::corpus::corpus_get_in;
use kats_core::eisenstein::katz_eisenstein;
use kats_core::newform::{
    check_cor37, check_prop24, combined_old_generators, companion_check, compare_eigensystems,
    lemma31_kill, lemma45_construct, membership, theorem13_decompose, theta_kernel_decompose,
    NewformError,
};
use kats_core::qseries::{degeneracy_bd, frobenius, hecke_tn, serialize_form, theta};
use kats_core::{FiniteField, ModularForm, Report};

use crate::io::{parse_field, read_form, render_form, render_report};
use crate::{Cli, Command, Global};

const DEFAULT_PREC: u64 = 100;

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }

    fn verdict(g: &Global, r: &Report, passed: bool) -> Self {
        Output {
            text: render_report(r, g.format),
            code: if passed { 0 } else { 1 },
        }
    }
}

fn inputs(g: &Global, n: usize) -> Result<Vec<ModularForm>, String> {
    if g.inputs.len() != n {
        return Err(format!("expected {n} --in file(s), got {}", g.inputs.len()));
    }
    g.inputs.iter().map(|p| read_form(p, g)).collect()
}

fn single(g: &Global) -> Result<ModularForm, String> {
    Ok(inputs(g, 1)?.remove(0))
}

fn field(g: &Global) -> Result<FiniteField, String> {
    let spec = g.field.as_deref().ok_or("--field (or -p) is required")?;
    parse_field(spec)
}

fn character(spec: &str, field: &FiniteField) -> Result<DirichletCharacter, String> {
    DirichletCharacter::parse(spec, field).map_err(|e| format!("character {spec:?}: {e}"))
}

fn form_out(g: &Global, f: &ModularForm) -> Output {
    Output::ok(render_form(f, g.format))
}

/// Witness-carrying failures are results of a check, not usage errors.
fn checked_failure(g: &Global, e: &NewformError) -> Option<Output> {
    let witness = match e {
        NewformError::IdentityFail { n } => *n,
        NewformError::Stage1Fail { witness } | NewformError::Stage2Fail { witness } => *witness,
        NewformError::ThetaNonzero(n) => *n,
        _ => return None,
    };
    let mut r = Report::new();
    r.set("verdict", "failed")
        .set("witness", witness)
        .set("reason", e);
    Some(Output::verdict(g, &r, false))
}

fn newform_result<T>(
    g: &Global,
    r: Result<T, NewformError>,
    ok: impl FnOnce(T) -> Result<Output, String>,
) -> Result<Output, String> {
    match r {
        Ok(v) => ok(v),
        Err(e) => checked_failure(g, &e).ok_or_else(|| e.to_string()),
    }
}

pub fn run(cli: &Cli) -> Result<Output, String> {
    let g = &cli.global;
    let e = |x: &dyn std::fmt::Display| x.to_string();
    match &cli.command {
        Command::Eisenstein { k, chi1, chi2, t } => {
            let field = field(g)?;
            let (c1, c2) = (character(chi1, &field)?, character(chi2, &field)?);
            let kz = katz_eisenstein(*k, &c1, &c2, *t, g.prec.unwrap_or(DEFAULT_PREC))
                .map_err(|x| e(&x))?;
            Ok(form_out(g, &kz.form))
        }
        Command::Hecke { n } => {
            if *n == 0 {
                return Err("n must be positive".into());
            }
            Ok(form_out(g, &hecke_tn(&single(g)?, *n).map_err(|x| e(&x))?))
        }
        Command::Theta { times } => {
            let f = single(g)?;
            Ok(form_out(g, &(0..*times).fold(f, |h, _| theta(&h))))
        }
        Command::Frobenius => Ok(form_out(g, &frobenius(&single(g)?))),
        Command::Degeneracy { d, level } => Ok(form_out(
            g,
            &degeneracy_bd(&single(g)?, *d, *level).map_err(|x| e(&x))?,
        )),
        Command::Kill { primes } => Ok(form_out(
            g,
            &lemma31_kill(&single(g)?, primes).map_err(|x| e(&x))?,
        )),
        Command::DecomposeTheta => {
            newform_result(g, theta_kernel_decompose(&single(g)?), |(r, form)| {
                Ok(match g.format {
                    crate::Format::Text => Output::ok(format!("# r={r}\n{}", serialize_form(&form))),
                    crate::Format::Report => {
                        let mut rep = Report::new();
                        rep.set("r", r).set("weight", form.weight());
                        Output::ok(format!("{rep}{}", render_form(&form, g.format)))
                    }
                })
            })
        }
        Command::Oldspace {
            level,
            weight,
            emit,
        } => {
            let f = single(g)?;
            let basis = combined_old_generators(
                &f,
                level.unwrap_or(f.level()),
                weight.unwrap_or(f.weight()),
            )
            .map_err(|x| e(&x))?;
            if let Some(dir) = emit {
                fs::create_dir_all(dir).map_err(|x| format!("{}: {x}", dir.display()))?;
                for (label, gen) in &basis.generators {
                    let path = dir.join(format!("{label}.form"));
                    fs::write(&path, serialize_form(gen))
                        .map_err(|x| format!("{}: {x}", path.display()))?;
                }
            }
            let mut r = Report::new();
            r.set("level", basis.level)
                .set("weight", basis.weight)
                .set("count", basis.generators.len())
                .set("labels", kats_core::report::list(basis.labels()));
            Ok(Output::ok(render_report(&r, g.format)))
        }
        Command::Member { newform } => {
            let big = single(g)?;
            let f = read_form(newform, g)?;
            let basis =
                combined_old_generators(&f, big.level(), big.weight()).map_err(|x| e(&x))?;
            let res = membership(&big, &basis).map_err(|x| e(&x))?;
            Ok(Output::verdict(g, &res.report(), res.verdict.is_member()))
        }
        Command::Decompose { newform } => {
            let big = single(g)?;
            let f = read_form(newform, g)?;
            newform_result(g, theorem13_decompose(&big, &f), |cert| {
                let mut r = cert.report();
                r.set("verdict", "decomposed");
                Ok(Output::verdict(g, &r, true))
            })
        }
        Command::CheckCor37 { newform } => {
            let big = single(g)?;
            let f = read_form(newform, g)?;
            let rep = check_cor37(&big, &f).map_err(|x| e(&x))?;
            Ok(Output::verdict(g, &rep.report(), rep.satisfied()))
        }
        Command::CheckCor47 { companion, newform } => {
            let big = single(g)?;
            let comp = read_form(companion, g)?;
            let h = newform.as_ref().map(|p| read_form(p, g)).transpose()?;
            newform_result(g, companion_check(&big, &comp, h.as_ref()), |rep| {
                Ok(Output::verdict(g, &rep.report(), rep.rows_hold()))
            })
        }
        Command::CheckProp24 => {
            let v = inputs(g, 2)?;
            let rep = check_prop24(&v[0], &v[1]);
            Ok(Output::verdict(g, &rep.report(), rep.holds()))
        }
        Command::Compare { bad, bound } => {
            let v = inputs(g, 2)?;
            let c = compare_eigensystems(&v[0], &v[1], bad, *bound).map_err(|x| e(&x))?;
            Ok(Output::verdict(g, &c.report(), c.is_equal()))
        }
        Command::Lemma45 {
            case,
            a,
            b,
            k,
            chi1,
            chi2,
        } => {
            let field = field(g)?;
            let (c1, c2) = (character(chi1, &field)?, character(chi2, &field)?);
            let out = lemma45_construct(
                case.parse()?,
                *a,
                *b,
                *k,
                &c1,
                &c2,
                g.prec.unwrap_or(DEFAULT_PREC),
            )
            .map_err(|x| e(&x))?;
            Ok(form_out(g, &out.form))
        }
        Command::Corpus { name } => {
            let field = field(g)?;
            let f = corpus_get_in(name, &field, g.prec.unwrap_or(DEFAULT_PREC))
                .map_err(|x| e(&x))?;
            Ok(form_out(g, &f))
        }
    }
}
