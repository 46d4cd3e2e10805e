//! LP text export (Maximize / Subject To / Binary / End) and a reader for the
//! same subset.
//!
//! Rows are normalized to `≤` on export: `≥` rows are negated and equalities
//! become a pair of opposite `≤` rows. Coefficients are written as decimals;
//! values whose denominator is not of the form `2^a·5^b` are rounded and
//! flagged, since only the JSON model preserves them exactly.

use std::collections::HashMap;
use std::fmt::Write;

use num_traits::{Signed, Zero};

use super::{BinaryProgram, Constraint, Sense};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_decimal, Rational};

const TERMS_PER_LINE: usize = 8;

#[derive(Clone, Debug)]
pub struct LpExport {
    pub text: String,
    /// Human-readable notes about coefficients that were rounded.
    pub inexact: Vec<String>,
}

impl LpExport {
    pub fn is_exact(&self) -> bool {
        self.inexact.is_empty()
    }
}

fn write_terms(out: &mut String, coeffs: &[Rational], names: &[String], inexact: &mut Vec<String>, ctx: &str) {
    let mut written = 0;
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if written > 0 && written % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let (text, exact) = to_decimal(&c.abs());
        if !exact {
            inexact.push(format!("{ctx}: coefficient of {name} is {}", format_rational(c)));
        }
        let sign = if c.is_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {text} {name}");
        written += 1;
    }
    if written == 0 {
        let _ = write!(out, " 0 {}", names[0]);
    }
}

fn rhs_text(rhs: &Rational, inexact: &mut Vec<String>, ctx: &str) -> String {
    let (text, exact) = to_decimal(rhs);
    if !exact {
        inexact.push(format!("{ctx}: right-hand side is {}", format_rational(rhs)));
    }
    text
}

/// Renders `bp` as LP text with every row in `≤` form.
pub fn to_lp(bp: &BinaryProgram) -> LpExport {
    let names = bp.variables();
    let mut inexact = Vec::new();
    let mut body = String::new();

    body.push_str("Maximize\n obj:");
    write_terms(&mut body, bp.objective(), names, &mut inexact, "obj");
    body.push_str("\nSubject To\n");

    for (i, c) in bp.constraints().iter().enumerate() {
        let base = c.name.clone().unwrap_or_else(|| format!("c{}", i + 1));
        let neg_row: Vec<Rational> = c.row.iter().map(|a| -a).collect();
        let parts: Vec<(String, &[Rational], Rational)> = match c.sense {
            Sense::Le => vec![(base, &c.row[..], c.rhs.clone())],
            Sense::Ge => vec![(base, &neg_row[..], -c.rhs.clone())],
            Sense::Eq => vec![
                (format!("{base}_le"), &c.row[..], c.rhs.clone()),
                (format!("{base}_ge"), &neg_row[..], -c.rhs.clone()),
            ],
        };
        for (label, row, rhs) in parts {
            let _ = write!(body, " {label}:");
            write_terms(&mut body, row, names, &mut inexact, &label);
            let _ = writeln!(body, " <= {}", rhs_text(&rhs, &mut inexact, &label));
        }
    }

    body.push_str("Binary\n");
    for chunk in names.chunks(TERMS_PER_LINE) {
        let _ = writeln!(body, " {}", chunk.join(" "));
    }
    body.push_str("End\n");

    let mut text = String::new();
    if !bp.name().is_empty() {
        let _ = writeln!(text, "\\ Problem: {}", bp.name());
    }
    if !inexact.is_empty() {
        let _ = writeln!(
            text,
            "\\ Warning: {} value(s) are rounded decimals; the JSON model holds the exact rationals",
            inexact.len()
        );
    }
    text.push_str(&body);
    LpExport { text, inexact }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Name(String),
    Plus,
    Minus,
    Colon,
    Cmp(Sense),
}

fn tokenize(line: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            ':' => {
                toks.push(Tok::Colon);
                i += 1;
            }
            '<' | '>' | '=' => {
                let mut j = i + 1;
                while j < chars.len() && matches!(chars[j], '<' | '>' | '=') {
                    j += 1;
                }
                let op: String = chars[i..j].iter().collect();
                let sense = match op.as_str() {
                    "<" | "<=" | "=<" => Sense::Le,
                    ">" | ">=" | "=>" => Sense::Ge,
                    "=" => Sense::Eq,
                    _ => return Err(Error::parse(format!("unknown comparison {op:?}"))),
                };
                toks.push(Tok::Cmp(sense));
                i = j;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len() {
                    let d = chars[j];
                    let exp_sign = matches!(d, '+' | '-') && j > i && matches!(chars[j - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || matches!(d, 'e' | 'E') || exp_sign {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let lit: String = chars[i..j].iter().collect();
                toks.push(Tok::Num(parse_rational(&lit)?));
                i = j;
            }
            _ => {
                let mut j = i;
                while j < chars.len() && !chars[j].is_whitespace() && !matches!(chars[j], '+' | '-' | ':' | '<' | '>' | '=') {
                    j += 1;
                }
                toks.push(Tok::Name(chars[i..j].iter().collect()));
                i = j;
            }
        }
    }
    Ok(toks)
}

/// Linear expression as (variable, coefficient) pairs in order of appearance.
fn parse_expr(toks: &[Tok]) -> Result<Vec<(String, Rational)>> {
    let mut terms = Vec::new();
    let mut sign = Rational::from_integer(1.into());
    let mut coef: Option<Rational> = None;
    for t in toks {
        match t {
            Tok::Plus => {}
            Tok::Minus => sign = -sign,
            Tok::Num(v) => coef = Some(coef.unwrap_or_else(|| Rational::from_integer(1.into())) * v),
            Tok::Name(n) => {
                let c = coef.take().unwrap_or_else(|| Rational::from_integer(1.into()));
                terms.push((n.clone(), &sign * c));
                sign = Rational::from_integer(1.into());
            }
            other => return Err(Error::parse(format!("unexpected token {other:?} in expression"))),
        }
    }
    if coef.is_some() {
        return Err(Error::parse("constant terms are not supported in LP expressions"));
    }
    Ok(terms)
}

fn strip_label(toks: &[Tok]) -> (Option<String>, &[Tok]) {
    match toks {
        [Tok::Name(n), Tok::Colon, rest @ ..] => (Some(n.clone()), rest),
        _ => (None, toks),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objective { minimize: bool },
    Constraints,
    Binary,
    Done,
}

fn section_header(line: &str) -> Option<Section> {
    let lower = line.trim().to_ascii_lowercase();
    match lower.as_str() {
        "maximize" | "maximise" | "maximum" | "max" => Some(Section::Objective { minimize: false }),
        "minimize" | "minimise" | "minimum" | "min" => Some(Section::Objective { minimize: true }),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "binary" | "binaries" | "bin" => Some(Section::Binary),
        "end" => Some(Section::Done),
        _ => None,
    }
}

/// Reads the LP subset written by [`to_lp`] (and hand-written files in the same
/// style). Minimization objectives are negated into maximization.
pub fn parse_lp(text: &str) -> Result<BinaryProgram> {
    let mut section = Section::None;
    let mut minimize = false;
    let mut seen_objective = false;
    let mut name = String::new();
    // Statements may span lines; a statement ends where the next one begins.
    let mut obj_toks: Vec<Tok> = Vec::new();
    let mut rows: Vec<Vec<Tok>> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();

    for raw in text.lines() {
        if let Some(comment) = raw.trim_start().strip_prefix('\\') {
            if let Some(n) = comment.trim().strip_prefix("Problem:") {
                name = n.trim().to_string();
            }
            continue;
        }
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(s) = section_header(line) {
            match s {
                Section::Objective { minimize: m } => {
                    minimize = m;
                    seen_objective = true;
                }
                Section::None => {}
                _ if !seen_objective => return Err(Error::parse("LP text must start with Maximize or Minimize")),
                _ => {}
            }
            section = s;
            continue;
        }
        let toks = tokenize(line)?;
        match section {
            Section::None => return Err(Error::parse("LP text must start with Maximize or Minimize")),
            Section::Objective { .. } => obj_toks.extend(toks),
            Section::Constraints => {
                let starts_new = matches!(toks.as_slice(), [Tok::Name(_), Tok::Colon, ..])
                    || rows.last().is_none_or(|r| r.iter().any(|t| matches!(t, Tok::Cmp(_))) && ends_with_rhs(r));
                if starts_new {
                    rows.push(toks);
                } else if let Some(last) = rows.last_mut() {
                    last.extend(toks);
                }
            }
            Section::Binary => {
                for t in toks {
                    match t {
                        Tok::Name(n) => binaries.push(n),
                        other => return Err(Error::parse(format!("unexpected {other:?} in Binary section"))),
                    }
                }
            }
            Section::Done => break,
        }
    }

    let (_, obj_body) = strip_label(&obj_toks);
    let obj_terms = parse_expr(obj_body)?;

    let mut parsed_rows = Vec::new();
    for toks in &rows {
        let (label, body) = strip_label(toks);
        let pos = body
            .iter()
            .position(|t| matches!(t, Tok::Cmp(_)))
            .ok_or_else(|| Error::parse("constraint without comparison operator"))?;
        let Tok::Cmp(sense) = body[pos] else { unreachable!() };
        let lhs = parse_expr(&body[..pos])?;
        let rhs = match &body[pos + 1..] {
            [Tok::Num(v)] | [Tok::Plus, Tok::Num(v)] => v.clone(),
            [Tok::Minus, Tok::Num(v)] => -v.clone(),
            other => return Err(Error::parse(format!("right-hand side must be a constant, got {other:?}"))),
        };
        parsed_rows.push((label, lhs, sense, rhs));
    }

    let mut order: Vec<String> = binaries.clone();
    let mut index: HashMap<String, usize> = order.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    let mut note = |n: &str| {
        if !index.contains_key(n) {
            index.insert(n.to_string(), order.len());
            order.push(n.to_string());
        }
    };
    for (n, _) in &obj_terms {
        note(n);
    }
    for (_, lhs, _, _) in &parsed_rows {
        for (n, _) in lhs {
            note(n);
        }
    }
    if order.is_empty() {
        return Err(Error::parse("LP text declares no variables"));
    }
    let n = order.len();
    let dense = |terms: &[(String, Rational)]| {
        let mut v = vec![Rational::zero(); n];
        for (name, c) in terms {
            v[index[name]] += c;
        }
        v
    };
    let mut objective = dense(&obj_terms);
    if minimize {
        objective.iter_mut().for_each(|c| *c = -c.clone());
    }
    let mut bp = BinaryProgram::new(order.clone(), objective)?.named(name);
    for (label, lhs, sense, rhs) in parsed_rows {
        let mut c = Constraint::new(dense(&lhs), sense, rhs);
        c.name = label;
        bp.push(c)?;
    }
    Ok(bp)
}

fn ends_with_rhs(toks: &[Tok]) -> bool {
    matches!(toks.last(), Some(Tok::Num(_)))
}
