//! Line-oriented form files.
//!
//! ```text
//! p=7 d=1 modulus=0,1
//! N=1 k=4 char=chi(1) flags=normalized
//! prec=10
//! a0=[4]
//! a1=[1]
//! ```
//!
//! Coefficient lines that are absent mean zero. `normalized` is recomputed on
//! parse, so it is written for the reader's benefit only.

use std::fmt::Write as _;

use super::{FormFlags, ModularForm, QError, QExpansion};
use crate::characters::DirichletCharacter;
use crate::gf::{FieldElement, FiniteField};

pub fn serialize_form(f: &ModularForm) -> String {
    let field = f.field();
    let mut out = String::new();
    let modulus: Vec<String> = field.modulus().iter().map(u64::to_string).collect();
    let _ = writeln!(
        out,
        "p={} d={} modulus={}",
        field.characteristic(),
        field.degree(),
        modulus.join(",")
    );
    let mut flags = Vec::new();
    if f.flags.cuspidal {
        flags.push("cuspidal");
    }
    if f.normalized() {
        flags.push("normalized");
    }
    if f.flags.asserted_newform {
        flags.push("newform");
    }
    if f.flags.asserted_minimal_weight {
        flags.push("minimal_weight");
    }
    let flags = if flags.is_empty() {
        "none".to_string()
    } else {
        flags.join(",")
    };
    let _ = writeln!(
        out,
        "N={} k={} char={} flags={}",
        f.level(),
        f.weight(),
        f.character(),
        flags
    );
    let _ = writeln!(out, "prec={}", f.prec());
    for (n, a) in f.qexp().coeffs().iter().enumerate() {
        if !a.is_zero() {
            let _ = writeln!(out, "a{n}={a}");
        }
    }
    out
}

/// Splits on whitespace that is not inside parentheses or brackets.
fn tokens(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push(&line[s..i]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(&line[s..]);
    }
    out
}

fn fields_of(line: &str, lineno: usize, keys: &[&str]) -> Result<Vec<String>, QError> {
    let err = |msg: String| QError::Parse { line: lineno, msg };
    let mut found: Vec<Option<String>> = vec![None; keys.len()];
    for tok in tokens(line) {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {tok:?}")))?;
        let idx = keys
            .iter()
            .position(|&x| x == k)
            .ok_or_else(|| err(format!("unknown key {k:?}")))?;
        found[idx] = Some(v.to_string());
    }
    found
        .into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| err(format!("missing {k}"))))
        .collect()
}

fn num<T: std::str::FromStr>(s: &str, what: &str, lineno: usize) -> Result<T, QError> {
    s.trim().parse().map_err(|_| QError::Parse {
        line: lineno,
        msg: format!("bad {what} {s:?}"),
    })
}

pub fn parse_form(text: &str) -> Result<ModularForm, QError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| {
        lines.next().ok_or(QError::Parse {
            line: 0,
            msg: format!("missing {what} line"),
        })
    };

    let (ln, l1) = next("field")?;
    let v = fields_of(l1, ln, &["p", "d", "modulus"])?;
    let p: u64 = num(&v[0], "p", ln)?;
    let d: u32 = num(&v[1], "d", ln)?;
    let modulus = crate::arith::parse_u64_list(&v[2]).map_err(|_| QError::Parse {
        line: ln,
        msg: format!("bad modulus {:?}", v[2]),
    })?;
    if modulus.len() != d as usize + 1 {
        return Err(QError::Parse {
            line: ln,
            msg: "modulus length does not match d".into(),
        });
    }
    let field = FiniteField::with_modulus(p, modulus)?;

    let (ln, l2) = next("form")?;
    let v = fields_of(l2, ln, &["N", "k", "char", "flags"])?;
    let level: u64 = num(&v[0], "level", ln)?;
    let weight: u64 = num(&v[1], "weight", ln)?;
    let chi = DirichletCharacter::parse(&v[2], &field)?;
    let mut flags = FormFlags::default();
    for flag in v[3].split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match flag {
            "cuspidal" => flags.cuspidal = true,
            "newform" => flags.asserted_newform = true,
            "minimal_weight" => flags.asserted_minimal_weight = true,
            "normalized" | "none" => {}
            other => {
                return Err(QError::Parse {
                    line: ln,
                    msg: format!("unknown flag {other:?}"),
                })
            }
        }
    }

    let (ln, l3) = next("prec")?;
    let v = fields_of(l3, ln, &["prec"])?;
    let prec: u64 = num(&v[0], "precision", ln)?;

    let mut coeffs = vec![field.zero(); prec as usize + 1];
    let mut seen = vec![false; prec as usize + 1];
    for (ln, line) in lines {
        let err = |msg: String| QError::Parse { line: ln, msg };
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected a<n>=..., got {line:?}")))?;
        let n: u64 = key
            .strip_prefix('a')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(format!("bad coefficient key {key:?}")))?;
        if n > prec {
            return Err(err(format!("a{n} beyond prec={prec}")));
        }
        if std::mem::replace(&mut seen[n as usize], true) {
            return Err(err(format!("a{n} given twice")));
        }
        coeffs[n as usize] = FieldElement::parse_in(&field, val)?;
    }
    ModularForm::new(QExpansion::new(&field, coeffs)?, level, weight, &chi, flags)
}
