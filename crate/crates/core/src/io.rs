//! Presentation documents, polynomial parsing and report serialization.
//!
//! A presentation document is a single JSON object describing either a Rees
//! algebra or a bigraded quotient, with generators written as polynomial
//! strings over the declared variables. Parsing validates all grading
//! constraints; emission is deterministic and re-parses to the same value.
//! Rationals are serialized as `"numerator/denominator"` strings; integers
//! as JSON numbers when they fit in i64 and as decimal strings otherwise.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{BigradedRing, ExponentVector, SparsePolynomial};
use crate::closed::{ColonData, ColonEntry, TopCoefficients};
use crate::diagonal::{EmbeddedDegreeCheck, UnivariateFit};
use crate::fit::{BinomialBasisPolynomial, FitRegion, MixedMultReport};
use crate::oracle::{
    AlgebraPresentation, HilbertTable, QuotientPresentation, ReesPresentation,
};
use crate::{Error, Result};

/// One colon ideal entry of a document: generator strings over the
/// x-variables plus the dimension and multiplicity of the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColonEntryDoc {
    pub generators: Vec<String>,
    pub dim: i64,
    pub mult: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColonBlockDoc {
    pub entries: Vec<ColonEntryDoc>,
}

/// Textual description of an algebra presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDocument {
    /// "rees" or "quotient".
    pub kind: String,
    #[serde(default)]
    pub label: Option<String>,
    pub x_vars: Vec<String>,
    #[serde(default)]
    pub y_vars: Vec<String>,
    pub degrees: Vec<i64>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub colon: Option<ColonBlockDoc>,
}

/// Parses a document from JSON text. Errors carry serde's line/column.
pub fn parse_presentation_document(text: &str) -> Result<PresentationDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        position: e.column(),
        message: format!("line {}: {e}", e.line()),
    })
}

/// Serializes a document; `parse_presentation_document` inverts this.
pub fn emit_presentation_document(doc: &PresentationDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

/// Names the generator a polynomial parse error came from.
fn in_generator(which: &str, index: usize, e: Error) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position,
            message: format!("{which} generator {}: {message}", index + 1),
        },
        other => other,
    }
}

/// Resolves a document into a validated presentation plus optional colon
/// data, applying all grading checks.
pub fn resolve_document(
    doc: &PresentationDocument,
) -> Result<(AlgebraPresentation, Option<ColonData>)> {
    let n = doc.x_vars.len();
    let label = doc
        .label
        .clone()
        .unwrap_or_else(|| format!("{}-{}vars", doc.kind, n));

    let pres = match doc.kind.as_str() {
        "rees" => {
            if doc.generators.len() != doc.degrees.len() {
                return Err(Error::InvalidPresentation(format!(
                    "{} generators but {} degrees",
                    doc.generators.len(),
                    doc.degrees.len()
                )));
            }
            let gens = doc
                .generators
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_polynomial(s, &doc.x_vars).map_err(|e| in_generator("ideal", j, e))
                })
                .collect::<Result<Vec<_>>>()?;
            for (j, (g, &d)) in gens.iter().zip(&doc.degrees).enumerate() {
                if g.homogeneous_degree() != Some(d) {
                    return Err(Error::InvalidPresentation(format!(
                        "generator {} is not homogeneous of the declared degree {}",
                        j + 1,
                        d
                    )));
                }
            }
            AlgebraPresentation::Rees(ReesPresentation::new(label, n, gens)?)
        }
        "quotient" => {
            if doc.y_vars.len() != doc.degrees.len() {
                return Err(Error::InvalidPresentation(format!(
                    "{} y-variables but {} degrees",
                    doc.y_vars.len(),
                    doc.degrees.len()
                )));
            }
            let ring = BigradedRing::new(n, doc.degrees.clone())?;
            let all_vars: Vec<String> = doc
                .x_vars
                .iter()
                .chain(&doc.y_vars)
                .cloned()
                .collect();
            let gens = doc
                .generators
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_polynomial(s, &all_vars).map_err(|e| in_generator("relation", j, e))
                })
                .collect::<Result<Vec<_>>>()?;
            AlgebraPresentation::Quotient(QuotientPresentation::new(label, ring, gens)?)
        }
        other => {
            return Err(Error::InvalidPresentation(format!(
                "unknown presentation kind {other:?}"
            )))
        }
    };

    let colon = match &doc.colon {
        None => None,
        Some(block) => {
            let entries = block
                .entries
                .iter()
                .enumerate()
                .map(|(q, e)| {
                    let generators = e
                        .generators
                        .iter()
                        .enumerate()
                        .map(|(j, s)| {
                            parse_polynomial(s, &doc.x_vars)
                                .map_err(|err| in_generator(&format!("colon entry {}", q + 1), j, err))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(ColonEntry {
                        generators,
                        dim: e.dim,
                        mult: BigInt::from(e.mult),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(ColonData::new(n, doc.degrees.clone(), entries)?)
        }
    };
    Ok((pres, colon))
}

// ---------------------------------------------------------------------------
// Polynomial parsing

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Number(BigInt),
    Ident(String),
}

struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.bytes[self.pos];
        let token = match b {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'^' => {
                self.pos += 1;
                Token::Caret
            }
            b'/' => {
                self.pos += 1;
                Token::Slash
            }
            b'0'..=b'9' => {
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = &self.text[start..self.pos];
                Token::Number(digits.parse().expect("digit run parses"))
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Token::Ident(self.text[start..self.pos].to_string())
            }
            other => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character {:?}", other as char),
                })
            }
        };
        Ok(Some((start, token)))
    }
}

/// Parses a polynomial over the named variables. Grammar: a signed sum of
/// terms; a term is an optional rational coefficient (`3`, `1/2`) and
/// variable powers (`x^2`), with `*` optional between factors. No implicit
/// variables: every identifier must be declared.
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<SparsePolynomial> {
    let num_vars = variables.len();
    let var_index = |name: &str, position: usize| -> Result<usize> {
        variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse {
                position,
                message: format!("unknown variable {name:?}"),
            })
    };

    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    if tokens.is_empty() {
        return Err(Error::Parse {
            position: 0,
            message: "empty polynomial".into(),
        });
    }

    let mut poly = SparsePolynomial::zero(num_vars);
    let mut idx = 0;
    loop {
        // Sign prefix of the term.
        let mut negative = false;
        while idx < tokens.len() {
            match tokens[idx].1 {
                Token::Plus => idx += 1,
                Token::Minus => {
                    negative = !negative;
                    idx += 1;
                }
                _ => break,
            }
        }
        if idx >= tokens.len() {
            return Err(Error::Parse {
                position: text.len(),
                message: "expected a term".into(),
            });
        }

        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; num_vars];
        let mut saw_factor = false;
        loop {
            match &tokens.get(idx) {
                Some((_, Token::Number(k))) => {
                    idx += 1;
                    let mut value = BigRational::from_integer(k.clone());
                    if let Some((dpos, Token::Slash)) = tokens.get(idx) {
                        idx += 1;
                        match tokens.get(idx) {
                            Some((_, Token::Number(den))) if !den.is_zero() => {
                                idx += 1;
                                value /= BigRational::from_integer(den.clone());
                            }
                            _ => {
                                return Err(Error::Parse {
                                    position: *dpos,
                                    message: "expected a nonzero denominator".into(),
                                })
                            }
                        }
                    }
                    coeff *= value;
                    saw_factor = true;
                }
                Some((pos, Token::Ident(name))) => {
                    let vi = var_index(name, *pos)?;
                    idx += 1;
                    let mut power = 1u32;
                    if let Some((cpos, Token::Caret)) = tokens.get(idx) {
                        idx += 1;
                        match tokens.get(idx) {
                            Some((_, Token::Number(k))) => {
                                idx += 1;
                                power = k.to_u32().ok_or_else(|| Error::Parse {
                                    position: *cpos,
                                    message: "exponent too large".into(),
                                })?;
                            }
                            _ => {
                                return Err(Error::Parse {
                                    position: *cpos,
                                    message: "expected an integer exponent after ^".into(),
                                })
                            }
                        }
                    }
                    exps[vi] += power;
                    saw_factor = true;
                }
                Some((_, Token::Star)) => {
                    idx += 1;
                    continue;
                }
                _ => break,
            }
        }
        if !saw_factor {
            let pos = tokens.get(idx).map(|(p, _)| *p).unwrap_or(text.len());
            return Err(Error::Parse {
                position: pos,
                message: "expected a coefficient or variable".into(),
            });
        }
        if negative {
            coeff = -coeff;
        }
        poly.add_term(ExponentVector::new(exps), coeff);

        match tokens.get(idx) {
            None => break,
            Some((_, Token::Plus)) | Some((_, Token::Minus)) => continue,
            Some((pos, t)) => {
                return Err(Error::Parse {
                    position: *pos,
                    message: format!("unexpected token {t:?}"),
                })
            }
        }
    }
    Ok(poly)
}

/// Renders a polynomial back to the document syntax.
pub fn format_polynomial(p: &SparsePolynomial, variables: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (m, c) in p.terms() {
        let negative = c < &BigRational::zero();
        let abs = if negative { -c } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.total_degree() == 0 {
            if abs.denom().is_one() {
                factors.push(abs.numer().to_string());
            } else {
                factors.push(format!("{}/{}", abs.numer(), abs.denom()));
            }
        }
        for (vi, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(variables[vi].clone()),
                _ => factors.push(format!("{}^{}", variables[vi], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

// ---------------------------------------------------------------------------
// Report emission

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::InvalidPresentation(format!(
                "unknown format {other:?}"
            ))),
        }
    }
}

/// BigInt as a JSON number when it fits in i64, a decimal string otherwise.
pub fn bigint_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn bigint_from_value(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| Error::Parse {
            position: 0,
            message: format!("not an integer: {s:?}"),
        });
    }
    Err(Error::Parse {
        position: 0,
        message: format!("not an integer value: {v}"),
    })
}

/// Rational as a `"num/den"` string.
pub fn rational_value(x: &BigRational) -> Value {
    json!(format!("{}/{}", x.numer(), x.denom()))
}

pub fn rational_from_value(v: &Value) -> Result<BigRational> {
    let s = v.as_str().ok_or_else(|| Error::Parse {
        position: 0,
        message: format!("not a rational string: {v}"),
    })?;
    let (num, den) = s.split_once('/').ok_or_else(|| Error::Parse {
        position: 0,
        message: format!("missing / in rational {s:?}"),
    })?;
    let num: BigInt = num.parse().map_err(|_| Error::Parse {
        position: 0,
        message: format!("bad numerator in {s:?}"),
    })?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse {
        position: 0,
        message: format!("bad denominator in {s:?}"),
    })?;
    if den.is_zero() {
        return Err(Error::Parse {
            position: 0,
            message: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(num, den))
}

pub fn mixed_report_json(rep: &MixedMultReport) -> Value {
    json!({
        "s": rep.s,
        "deg_u": rep.deg_u,
        "d_max": rep.d_max,
        "rho": rep.rho,
        "e": rep.e.iter().map(bigint_value).collect::<Vec<_>>(),
    })
}

pub fn mixed_report_from_json(v: &Value) -> Result<MixedMultReport> {
    let field = |name: &str| -> Result<&Value> {
        v.get(name).ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("missing field {name:?}"),
        })
    };
    let s = field("s")?.as_i64().ok_or_else(|| Error::Parse {
        position: 0,
        message: "s must be an integer".into(),
    })?;
    let deg_u = field("deg_u")?.as_i64().unwrap_or(s);
    let d_max = field("d_max")?.as_i64().unwrap_or(0);
    let e = field("e")?
        .as_array()
        .ok_or_else(|| Error::Parse {
            position: 0,
            message: "e must be an array".into(),
        })?
        .iter()
        .map(bigint_from_value)
        .collect::<Result<Vec<_>>>()?;
    Ok(MixedMultReport::new(s, deg_u, d_max, e))
}

pub fn emit_mixed_report(rep: &MixedMultReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&mixed_report_json(rep)).expect("json")
        }
        ReportFormat::Csv => {
            let mut out = String::from("i,e_i\n");
            for (i, e) in rep.e.iter().enumerate() {
                out.push_str(&format!("{i},{e}\n"));
            }
            out
        }
        ReportFormat::Text => {
            let es: Vec<String> = rep.e.iter().map(|e| e.to_string()).collect();
            format!(
                "s = {}\ndeg_u = {}\nrho = {}\ne = ({})\n",
                rep.s,
                rep.deg_u,
                rep.rho,
                es.join(", ")
            )
        }
    }
}

pub fn table_json(table: &HilbertTable) -> Value {
    json!({
        "label": table.label,
        "cells": table
            .cells
            .iter()
            .map(|(&(u, v), cell)| {
                json!({"u": u, "v": v, "dim": cell.dim, "method": cell.method.as_str()})
            })
            .collect::<Vec<_>>(),
        "skipped": table
            .skipped
            .iter()
            .map(|s| json!({"u": s.u, "v": s.v, "reason": s.reason}))
            .collect::<Vec<_>>(),
    })
}

pub fn emit_table(table: &HilbertTable, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(&table_json(table)).expect("json"),
        ReportFormat::Csv => {
            let mut out = String::from("u,v,dim\n");
            for (&(u, v), cell) in &table.cells {
                out.push_str(&format!("{u},{v},{}\n", cell.dim));
            }
            out
        }
        ReportFormat::Text => {
            let mut out = format!("table for {}\n", table.label);
            let u_max = table.cells.keys().map(|&(u, _)| u).max().unwrap_or(-1);
            let v_max = table.cells.keys().map(|&(_, v)| v).max().unwrap_or(-1);
            for v in (0..=v_max).rev() {
                let row: Vec<String> = (0..=u_max)
                    .map(|u| {
                        table
                            .get(u, v)
                            .map(|d| d.to_string())
                            .unwrap_or_else(|| "-".into())
                    })
                    .collect();
                out.push_str(&format!("v={v:>3} | {}\n", row.join(" ")));
            }
            if !table.skipped.is_empty() {
                out.push_str(&format!("{} cells skipped\n", table.skipped.len()));
            }
            out
        }
    }
}

/// Parses the CSV form written by `emit_table` back into (u, v, dim) rows.
pub fn table_from_csv(text: &str) -> Result<Vec<(i64, i64, u64)>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != "u,v,dim" {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |name: &str| -> Result<&str> {
            parts.next().ok_or_else(|| Error::Parse {
                position: idx,
                message: format!("missing {name} on line {}", idx + 1),
            })
        };
        let u = next("u")?.parse().map_err(|_| Error::Parse {
            position: idx,
            message: "bad u".into(),
        })?;
        let v = next("v")?.parse().map_err(|_| Error::Parse {
            position: idx,
            message: "bad v".into(),
        })?;
        let dim = next("dim")?.parse().map_err(|_| Error::Parse {
            position: idx,
            message: "bad dim".into(),
        })?;
        rows.push((u, v, dim));
    }
    Ok(rows)
}

pub fn fit_json(
    poly: &BinomialBasisPolynomial,
    region: &FitRegion,
    rep: &MixedMultReport,
) -> Value {
    json!({
        "region": {"d_max": region.d_max, "u0": region.u0, "v0": region.v0},
        "basis": "C(u - d_max*v, i) * C(v, j)",
        "coefficients": poly
            .coeffs()
            .iter()
            .map(|(&(i, j), c)| json!({"i": i, "j": j, "c": rational_value(c)}))
            .collect::<Vec<_>>(),
        "report": mixed_report_json(rep),
    })
}

pub fn emit_fit(
    poly: &BinomialBasisPolynomial,
    region: &FitRegion,
    rep: &MixedMultReport,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&fit_json(poly, region, rep)).expect("json")
        }
        ReportFormat::Csv => {
            let mut out = String::from("i,j,c\n");
            for (&(i, j), c) in poly.coeffs() {
                out.push_str(&format!("{i},{j},{}/{}\n", c.numer(), c.denom()));
            }
            out
        }
        ReportFormat::Text => {
            let mut out = format!(
                "validated on u >= {}*v + {}, v >= {}\n",
                region.d_max, region.u0, region.v0
            );
            let terms: Vec<String> = poly
                .coeffs()
                .iter()
                .map(|(&(i, j), c)| format!("{c} C(w,{i}) C(v,{j})"))
                .collect();
            out.push_str(&format!(
                "P = {}   (w = u - {}v)\n",
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                },
                region.d_max
            ));
            out.push_str(&emit_mixed_report(rep, ReportFormat::Text));
            out
        }
    }
}

pub fn univariate_fit_json(fit: &UnivariateFit, check: Option<&EmbeddedDegreeCheck>) -> Value {
    let mut v = json!({
        "newton_coeffs": fit.newton_coeffs.iter().map(bigint_value).collect::<Vec<_>>(),
        "degree": fit.degree,
        "multiplicity": bigint_value(&fit.multiplicity),
        "v0": fit.v0,
    });
    if let Some(c) = check {
        v["embedded_degree_check"] = json!({
            "c": c.spec.c,
            "e": c.spec.e,
            "diagonal_multiplicity": bigint_value(&c.diagonal_multiplicity),
            "predicted_degree": bigint_value(&c.predicted_degree),
            "multiplicities_equal": c.multiplicities_equal,
            "diagonal_degree": c.diagonal_degree,
            "expected_degree": c.expected_degree,
            "degrees_equal": c.degrees_equal,
        });
    }
    v
}

pub fn emit_univariate_fit(
    fit: &UnivariateFit,
    check: Option<&EmbeddedDegreeCheck>,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&univariate_fit_json(fit, check)).expect("json")
        }
        ReportFormat::Csv => {
            let mut out = String::from("j,c_j\n");
            for (j, c) in fit.newton_coeffs.iter().enumerate() {
                out.push_str(&format!("{j},{c}\n"));
            }
            out
        }
        ReportFormat::Text => {
            let coeffs: Vec<String> =
                fit.newton_coeffs.iter().map(|c| c.to_string()).collect();
            let mut out = format!(
                "degree = {}\nmultiplicity = {}\nnewton coefficients = ({})\nstable from v0 = {}\n",
                fit.degree,
                fit.multiplicity,
                coeffs.join(", "),
                fit.v0
            );
            if let Some(c) = check {
                out.push_str(&format!(
                    "embedded degree at (c,e) = ({},{}): diagonal {} vs predicted {} -> {}\n",
                    c.spec.c,
                    c.spec.e,
                    c.diagonal_multiplicity,
                    c.predicted_degree,
                    if c.multiplicities_equal && c.degrees_equal {
                        "equal"
                    } else {
                        "MISMATCH"
                    }
                ));
            }
            out
        }
    }
}

pub fn top_coefficients_json(top: &TopCoefficients) -> Value {
    json!({
        "total_degree": top.total_degree,
        "entries": top
            .entries
            .iter()
            .map(|(&(i, j), e)| json!({"i": i, "j": j, "e": bigint_value(e)}))
            .collect::<Vec<_>>(),
    })
}

pub fn emit_top_coefficients(top: &TopCoefficients, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(&top_coefficients_json(top)).expect("json")
        }
        ReportFormat::Csv => {
            let mut out = String::from("i,j,e\n");
            for (&(i, j), e) in &top.entries {
                out.push_str(&format!("{i},{j},{e}\n"));
            }
            out
        }
        ReportFormat::Text => {
            let mut out = format!("total degree {}\n", top.total_degree);
            for (&(i, j), e) in &top.entries {
                out.push_str(&format!("e_({i},{j}) = {e}\n"));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_rees_document() {
        let text = r#"{
            "kind": "rees",
            "x_vars": ["x", "y", "z"],
            "degrees": [2, 3],
            "generators": ["x^2", "y^3"]
        }"#;
        let doc = parse_presentation_document(text).unwrap();
        let (pres, colon) = resolve_document(&doc).unwrap();
        assert!(colon.is_none());
        match pres {
            AlgebraPresentation::Rees(p) => {
                assert_eq!(p.n, 3);
                assert_eq!(p.degrees, vec![2, 3]);
            }
            _ => panic!("expected a Rees presentation"),
        }
    }

    #[test]
    fn parses_quotient_document() {
        let text = r#"{
            "kind": "quotient",
            "x_vars": ["X1", "X2"],
            "y_vars": ["Y1"],
            "degrees": [1],
            "generators": ["X1*Y1"]
        }"#;
        let doc = parse_presentation_document(text).unwrap();
        let (pres, _) = resolve_document(&doc).unwrap();
        match pres {
            AlgebraPresentation::Quotient(p) => {
                assert_eq!(p.bidegrees, vec![(2, 1)]);
            }
            _ => panic!("expected a quotient presentation"),
        }
    }

    #[test]
    fn rejects_wrong_declared_degree() {
        let text = r#"{
            "kind": "rees",
            "x_vars": ["x", "y", "z"],
            "degrees": [2, 2],
            "generators": ["x^2", "y^3"]
        }"#;
        let doc = parse_presentation_document(text).unwrap();
        assert!(matches!(
            resolve_document(&doc),
            Err(Error::InvalidPresentation(_))
        ));
    }

    #[test]
    fn rejects_decreasing_colon_degrees() {
        let text = r#"{
            "kind": "rees",
            "x_vars": ["x", "y"],
            "degrees": [3, 2],
            "generators": ["x^3", "y^2"],
            "colon": {"entries": [
                {"generators": [], "dim": 2, "mult": 1},
                {"generators": ["x^3"], "dim": 1, "mult": 3}
            ]}
        }"#;
        let doc = parse_presentation_document(text).unwrap();
        assert!(matches!(
            resolve_document(&doc),
            Err(Error::InvalidColonData(_))
        ));
    }

    #[test]
    fn polynomial_parser_basics() {
        let vs = vars(&["x", "y", "z"]);
        let p = parse_polynomial("x^2 - y*z", &vs).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.homogeneous_degree(), Some(2));

        let q = parse_polynomial("2x^2y + 1/2 z^3", &vs).unwrap();
        assert_eq!(q.num_terms(), 2);
        assert_eq!(q.homogeneous_degree(), Some(3));

        let c = parse_polynomial("-3", &vs).unwrap();
        assert_eq!(c.homogeneous_degree(), Some(0));
    }

    #[test]
    fn polynomial_parser_positions() {
        let vs = vars(&["x", "y"]);
        match parse_polynomial("x + w^2", &vs) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(parse_polynomial("", &vs).is_err());
        assert!(parse_polynomial("x +", &vs).is_err());
        assert!(parse_polynomial("x ^ y", &vs).is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let vs = vars(&["x", "y", "z"]);
        for text in ["x^2 - y*z", "2*x + 3*y - z", "1/3*x^4 + x*y*z", "7"] {
            let p = parse_polynomial(text, &vs).unwrap();
            let rendered = format_polynomial(&p, &vs);
            let q = parse_polynomial(&rendered, &vs).unwrap();
            assert_eq!(p, q, "round trip through {rendered:?}");
        }
    }

    mod randomized {
        use super::*;
        use proptest::prelude::*;

        fn arb_source_poly() -> impl Strategy<Value = SparsePolynomial> {
            proptest::collection::vec(
                (proptest::collection::vec(0u32..4, 3), -6i64..7, 1i64..4),
                1..6,
            )
            .prop_map(|terms| {
                let mut p = SparsePolynomial::zero(3);
                for (exps, num, den) in terms {
                    let c = BigRational::new(BigInt::from(num), BigInt::from(den));
                    p.add_term(crate::algebra::ExponentVector::new(exps), c);
                }
                p
            })
        }

        proptest! {
            #[test]
            fn format_then_parse_is_identity(p in arb_source_poly()) {
                prop_assume!(!p.is_zero());
                let vs = vars(&["x", "y", "z"]);
                let rendered = format_polynomial(&p, &vs);
                let back = parse_polynomial(&rendered, &vs).unwrap();
                prop_assert_eq!(p, back, "through {}", rendered);
            }
        }
    }

    #[test]
    fn document_round_trip() {
        let doc = PresentationDocument {
            kind: "rees".into(),
            label: Some("pair".into()),
            x_vars: vars(&["x", "y", "z"]),
            y_vars: vec![],
            degrees: vec![2, 3],
            generators: vec!["x^2".into(), "y^3".into()],
            colon: Some(ColonBlockDoc {
                entries: vec![
                    ColonEntryDoc {
                        generators: vec![],
                        dim: 3,
                        mult: 1,
                    },
                    ColonEntryDoc {
                        generators: vec!["x^2".into()],
                        dim: 2,
                        mult: 2,
                    },
                ],
            }),
        };
        let text = emit_presentation_document(&doc);
        let back = parse_presentation_document(&text).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn mixed_report_round_trip() {
        let rep = MixedMultReport::new(
            2,
            2,
            3,
            vec![BigInt::from(-6), BigInt::from(0), BigInt::from(1)],
        );
        let v = mixed_report_json(&rep);
        assert_eq!(v["e"], json!([-6, 0, 1]));
        let back = mixed_report_from_json(&v).unwrap();
        assert_eq!(rep, back);
    }

    #[test]
    fn table_csv_round_trip() {
        use crate::oracle::{CellMethod, HilbertTable};
        let table = HilbertTable::from_source("t", 2, 1, CellMethod::Counting, |u, v| {
            Ok((u + 2 * v) as u64)
        })
        .unwrap();
        let csv = emit_table(&table, ReportFormat::Csv);
        let rows = table_from_csv(&csv).unwrap();
        assert_eq!(rows.len(), 6);
        for (u, v, dim) in rows {
            assert_eq!(table.get(u, v), Some(dim));
        }
    }

    #[test]
    fn rational_values_round_trip() {
        let x = BigRational::new(BigInt::from(-7), BigInt::from(3));
        assert_eq!(rational_from_value(&rational_value(&x)).unwrap(), x);
        let big = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        assert_eq!(bigint_from_value(&bigint_value(&big)).unwrap(), big);
    }
}
