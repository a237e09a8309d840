//! CPLEX LP text format: writer and a reader for the subset the writer uses.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Constraint, Model, Relation};
use crate::{Error, Result};

const TERMS_PER_LINE: usize = 8;

fn push_terms<C: std::fmt::Display + Signed + One>(out: &mut String, head: &str, terms: &[(C, String)]) {
    out.push_str(head);
    if terms.is_empty() {
        out.push_str(" 0");
    }
    for (idx, (c, name)) in terms.iter().enumerate() {
        if idx > 0 && idx % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        out.push(' ');
        if c.is_negative() {
            out.push_str("- ");
        } else if idx > 0 {
            out.push_str("+ ");
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(name);
    }
}

pub(super) fn write_lp(m: &Model) -> String {
    let mut out = String::new();
    for c in &m.comments {
        out.push_str(&format!("\\ {c}\n"));
    }
    for w in &m.warnings {
        out.push_str(&format!("\\ WARNING: {w}\n"));
    }
    out.push_str("Maximize\n");
    push_terms(&mut out, " obj:", &m.objective);
    out.push_str("\nSubject To\n");
    for c in &m.constraints {
        push_terms(&mut out, &format!(" {}:", c.name), &c.terms);
        out.push_str(&format!(" {} {}\n", c.rel.symbol(), c.rhs));
    }
    if !m.bounds.is_empty() {
        out.push_str("Bounds\n");
        for (name, lo, hi) in &m.bounds {
            if lo == hi {
                out.push_str(&format!(" {name} = {lo}\n"));
            } else {
                out.push_str(&format!(" {lo} <= {name} <= {hi}\n"));
            }
        }
    }
    for (title, vars) in [("Binaries", &m.binaries), ("Generals", &m.generals)] {
        if vars.is_empty() {
            continue;
        }
        out.push_str(title);
        out.push('\n');
        for chunk in vars.chunks(TERMS_PER_LINE) {
            out.push(' ');
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Generals,
}

/// Parses LP text produced by the writer. Comments are kept, warnings are
/// recognised by their prefix.
pub fn parse_lp(text: &str) -> Result<Model> {
    let bad = |msg: String| Error::Parse(format!("LP: {msg}"));
    let mut m = Model {
        comments: Vec::new(),
        objective: Vec::new(),
        constraints: Vec::new(),
        bounds: Vec::new(),
        binaries: Vec::new(),
        generals: Vec::new(),
        warnings: Vec::new(),
        overflow_risk: false,
    };
    // Join continuation lines into statements first.
    let mut section = Section::Start;
    let mut statements: Vec<(Section, String)> = Vec::new();
    for raw in text.lines() {
        if let Some(c) = raw.trim_start().strip_prefix('\\') {
            let c = c.trim();
            match c.strip_prefix("WARNING: ") {
                Some(w) => m.warnings.push(w.to_string()),
                None => m.comments.push(c.to_string()),
            }
            continue;
        }
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let next = match line.to_ascii_lowercase().as_str() {
            "maximize" | "max" | "maximise" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" => Some(Section::Binaries),
            "generals" | "general" => Some(Section::Generals),
            "end" => break,
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let continues = line.starts_with('+') || line.starts_with('-');
        match section {
            Section::Start => return Err(bad(format!("text before the objective: {line:?}"))),
            Section::Objective | Section::Constraints if continues && !statements.is_empty() => {
                let last = statements.last_mut().unwrap();
                last.1.push(' ');
                last.1.push_str(line);
            }
            _ => statements.push((section, line.to_string())),
        }
    }
    for (sec, st) in statements {
        match sec {
            Section::Objective => {
                let body = st.split_once(':').map_or(st.as_str(), |(_, b)| b);
                m.objective = parse_terms(body)?.into_iter().filter(|(c, _)| c.sign() != num_bigint::Sign::NoSign).collect();
            }
            Section::Constraints => {
                let (name, body) = st.split_once(':').ok_or_else(|| bad(format!("unnamed constraint {st:?}")))?;
                let (lhs, rel, rhs) = split_relation(body).ok_or_else(|| bad(format!("no relation in {st:?}")))?;
                let terms = parse_terms(lhs)?
                    .into_iter()
                    .map(|(c, v)| i64::try_from(c).map(|c| (c, v)).map_err(|_| bad("coefficient too large".into())))
                    .collect::<Result<Vec<_>>>()?;
                let rhs = rhs.trim().parse().map_err(|_| bad(format!("bad right-hand side in {st:?}")))?;
                m.constraints.push(Constraint { name: name.trim().to_string(), terms, rel, rhs });
            }
            Section::Bounds => {
                let parts: Vec<&str> = st.split_whitespace().collect();
                let num = |s: &str| s.parse::<i64>().map_err(|_| bad(format!("bad bound {st:?}")));
                match parts.as_slice() {
                    [name, "=", v] => {
                        let v = num(v)?;
                        m.bounds.push((name.to_string(), v, v));
                    }
                    [lo, "<=", name, "<=", hi] => m.bounds.push((name.to_string(), num(lo)?, num(hi)?)),
                    _ => return Err(bad(format!("unsupported bound {st:?}"))),
                }
            }
            Section::Binaries => m.binaries.extend(st.split_whitespace().map(str::to_string)),
            Section::Generals => m.generals.extend(st.split_whitespace().map(str::to_string)),
            Section::Start => unreachable!(),
        }
    }
    let limit = BigInt::from(super::EXACT_FLOAT_LIMIT);
    m.overflow_risk = m.objective.iter().any(|(c, _)| c.abs() > limit);
    Ok(m)
}

fn split_relation(body: &str) -> Option<(&str, Relation, &str)> {
    for (sym, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("=", Relation::Eq)] {
        if let Some((a, b)) = body.split_once(sym) {
            return Some((a, rel, b));
        }
    }
    None
}

fn parse_terms(body: &str) -> Result<Vec<(BigInt, String)>> {
    let mut out = Vec::new();
    let mut sign = BigInt::one();
    let mut coeff: Option<BigInt> = None;
    for tok in body.split_whitespace() {
        match tok {
            "+" => sign = BigInt::one(),
            "-" => sign = -BigInt::one(),
            "0" if out.is_empty() && coeff.is_none() => {}
            _ => {
                if let Ok(c) = tok.parse::<BigInt>() {
                    coeff = Some(c);
                } else {
                    let c = coeff.take().unwrap_or_else(BigInt::one);
                    out.push((&sign * c, tok.to_string()));
                    sign = BigInt::one();
                }
            }
        }
    }
    if coeff.is_some() {
        return Err(Error::Parse(format!("LP: dangling coefficient in {body:?}")));
    }
    Ok(out)
}
