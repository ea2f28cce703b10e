use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use kats_core::qseries::{parse_form, serialize_form};
use kats_core::report::list;
use kats_core::{FiniteField, ModularForm, Report};

use crate::{Format, Global};

pub fn read_text(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_form(path: &Path, g: &Global) -> Result<ModularForm, String> {
    let f = parse_form(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(spec) = &g.field {
        let want = parse_field(spec)?;
        if &want != f.field() {
            return Err(format!(
                "{}: field does not match --field {spec}",
                path.display()
            ));
        }
    }
    Ok(match g.prec {
        Some(b) => f.truncate(b),
        None => f,
    })
}

/// `p` or `p^d`.
pub fn parse_field(spec: &str) -> Result<FiniteField, String> {
    let (p, d) = match spec.split_once('^') {
        Some((p, d)) => (p, d),
        None => (spec, "1"),
    };
    let p: u64 = p.trim().parse().map_err(|_| format!("bad field {spec:?}"))?;
    let d: u32 = d.trim().parse().map_err(|_| format!("bad field {spec:?}"))?;
    FiniteField::new(p, d).map_err(|e| format!("field {spec}: {e}"))
}

pub fn render_form(f: &ModularForm, format: Format) -> String {
    match format {
        Format::Text => serialize_form(f),
        Format::Report => {
            let mut r = Report::new();
            r.set("p", f.p())
                .set("d", f.field().degree())
                .set("level", f.level())
                .set("weight", f.weight())
                .set("character", f.character())
                .set("prec", f.prec())
                .set("cuspidal", f.flags.cuspidal)
                .set("coefficients", list(f.qexp().coeffs()));
            r.to_string()
        }
    }
}

pub fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Report => r.to_string(),
        Format::Text => r.entries().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    }
}

pub fn emit(g: &Global, text: &str) -> Result<(), String> {
    match &g.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}
