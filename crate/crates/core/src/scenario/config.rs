//! Line-oriented scenario configuration.
//!
//! ```text
//! # comment
//! p = 2
//! model = trident
//! c = 0, s = 0, d = 0.5
//! ```
//!
//! Several `key = value` pairs may share a line when separated by `,` or `;`
//! outside parentheses. Repeatable keys: `fp`, `petal_anchor`.

use num_complex::Complex64;

use super::{BuiltIn, ExtComplex, FixedPointDatum, Role, Scenario, Weights};
use crate::error::{Error, Result};
use crate::expr::AnalyticExpr;

struct Entry {
    key: String,
    value: String,
    line: usize,
    /// 1-based column of the first character of `value`.
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits `text` at top-level separators, returning `(offset, piece)` pairs.
fn split_top_level(text: &str, seps: &[char]) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let chars: Vec<char> = text.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ if depth == 0 && seps.contains(&ch) => {
                out.push((start, chars[start..i].iter().collect()));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, chars[start..].iter().collect()));
    out
}

fn leading_ws(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count()
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body: String = raw.chars().take_while(|&c| c != '#').collect();
        if body.trim().is_empty() {
            continue;
        }
        let depth = body.chars().fold(0i32, |d, c| match c {
            '(' => d + 1,
            ')' => d - 1,
            _ => d,
        });
        if depth != 0 {
            return Err(syntax(line, body.chars().count(), "unbalanced parentheses"));
        }
        for (offset, piece) in split_top_level(&body, &[',', ';']) {
            if piece.trim().is_empty() {
                continue;
            }
            let Some(eq) = piece.chars().position(|c| c == '=') else {
                return Err(syntax(
                    line,
                    offset + leading_ws(&piece) + 1,
                    "expected `key = value`",
                ));
            };
            let key_part: String = piece.chars().take(eq).collect();
            let value_part: String = piece.chars().skip(eq + 1).collect();
            let key = key_part.trim().to_string();
            if key.is_empty() || !key.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(syntax(
                    line,
                    offset + leading_ws(&key_part) + 1,
                    format!("malformed key `{key}`"),
                ));
            }
            let value = value_part.trim().to_string();
            let column = offset + eq + 1 + leading_ws(&value_part) + 1;
            if value.is_empty() {
                return Err(syntax(line, column, format!("missing value for `{key}`")));
            }
            out.push(Entry {
                key,
                value,
                line,
                column,
            });
        }
    }
    Ok(out)
}

fn real(e: &Entry) -> Result<f64> {
    let v = complex_at(&e.value, e.line, e.column)?;
    if v.im != 0.0 {
        return Err(Error::Invalid(format!(
            "line {}: `{}` must be real, got {v}",
            e.line, e.key
        )));
    }
    Ok(v.re)
}

/// Constant complex literal, parsed with the expression grammar.
fn complex_at(text: &str, line: usize, column: usize) -> Result<Complex64> {
    let expr = expression_at(text, line, column)?;
    expr.constant_value()
        .filter(|c| c.is_finite())
        .ok_or_else(|| syntax(line, column, format!("`{text}` is not a constant")))
}

fn expression_at(text: &str, line: usize, column: usize) -> Result<AnalyticExpr> {
    AnalyticExpr::parse(text).map_err(|e| match e {
        Error::Syntax {
            column: c, message, ..
        } => syntax(line, column + c - 1, message),
        other => other,
    })
}

fn fixed_point(e: &Entry) -> Result<FixedPointDatum> {
    let inner = e.value.trim();
    if !(inner.starts_with('(') && inner.ends_with(')')) {
        return Err(syntax(e.line, e.column, "fp expects `(zeta, alpha, beta_re, role)`"));
    }
    let body = &inner[1..inner.len() - 1];
    let parts = split_top_level(body, &[',']);
    if parts.len() != 4 {
        return Err(syntax(
            e.line,
            e.column,
            format!("fp expects 4 fields, got {}", parts.len()),
        ));
    }
    let col = |i: usize| e.column + 1 + parts[i].0 + leading_ws(&parts[i].1);
    let zeta = complex_at(parts[0].1.trim(), e.line, col(0))?;
    let alpha = complex_at(parts[1].1.trim(), e.line, col(1))?;
    let beta_text = parts[2].1.trim().replace('\u{2212}', "-");
    let beta = if beta_text == "-inf" {
        ExtComplex::NegInfinity
    } else {
        ExtComplex::Finite(complex_at(&beta_text, e.line, col(2))?)
    };
    let role = match parts[3].1.trim() {
        "dw" | "denjoy_wolff" => Role::DenjoyWolff,
        "rep" | "repelling" => Role::Repelling,
        other => {
            return Err(syntax(
                e.line,
                col(3),
                format!("unknown role `{other}` (expected dw or rep)"),
            ))
        }
    };
    if alpha.im != 0.0 {
        return Err(Error::Invalid(format!("line {}: alpha must be real", e.line)));
    }
    Ok(FixedPointDatum {
        zeta,
        alpha: alpha.re,
        beta,
        role,
    })
}

/// Parses and validates a scenario configuration.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut p = None;
    let mut model: Option<String> = None;
    let mut a = None;
    let mut weights = Weights::default();
    let mut weight_given = false;
    let mut h_expr = None;
    let mut v_expr = None;
    let mut fps = Vec::new();
    let mut anchors = Vec::new();
    let mut seen: Vec<String> = Vec::new();

    for e in entries(text)? {
        let repeatable = matches!(e.key.as_str(), "fp" | "petal_anchor");
        if !repeatable {
            if seen.contains(&e.key) {
                return Err(Error::Invalid(format!(
                    "line {}: duplicate key `{}`",
                    e.line, e.key
                )));
            }
            seen.push(e.key.clone());
        }
        match e.key.as_str() {
            "p" => p = Some(real(&e)?),
            "model" => model = Some(e.value.clone()),
            "a" => a = Some(real(&e)?),
            "c" => {
                weights.c = real(&e)?;
                weight_given = true;
            }
            "s" => {
                weights.s = real(&e)?;
                weight_given = true;
            }
            "d" => {
                weights.d = real(&e)?;
                weight_given = true;
            }
            "h_expr" => h_expr = Some(expression_at(&e.value, e.line, e.column)?),
            "v_expr" => v_expr = Some(expression_at(&e.value, e.line, e.column)?),
            "fp" => fps.push(fixed_point(&e)?),
            "petal_anchor" => anchors.push(complex_at(&e.value, e.line, e.column)?),
            other => {
                return Err(Error::Invalid(format!(
                    "line {}: unknown key `{other}`",
                    e.line
                )))
            }
        }
    }

    let p = p.ok_or_else(|| Error::Invalid("missing `p`".into()))?;
    let model = model.ok_or_else(|| Error::Invalid("missing `model`".into()))?;
    let builtin = match model.as_str() {
        "strip_flow" => Some(BuiltIn::StripFlow {
            a: a.unwrap_or(1.0),
        }),
        "half_strip" => Some(BuiltIn::HalfStrip),
        "trident" => Some(BuiltIn::Trident),
        "expression" | "parametric" => None,
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    if a.is_some() && !matches!(builtin, Some(BuiltIn::StripFlow { .. })) {
        return Err(Error::Invalid(format!("`a` does not apply to model {model}")));
    }

    match builtin {
        Some(kind) => {
            if !fps.is_empty() || h_expr.is_some() || v_expr.is_some() || !anchors.is_empty() {
                return Err(Error::Invalid(format!(
                    "built-in model {model} takes only p, a, c, s, d"
                )));
            }
            Scenario::builtin(kind, p, weights)
        }
        None if model == "parametric" => {
            if weight_given || h_expr.is_some() || v_expr.is_some() || !anchors.is_empty() {
                return Err(Error::Invalid("parametric model takes only p and fp".into()));
            }
            Scenario::parametric(p, fps)
        }
        None => {
            if weight_given {
                return Err(Error::Invalid(
                    "expression model takes v_expr instead of c, s, d".into(),
                ));
            }
            let h = h_expr.ok_or_else(|| Error::Invalid("expression model needs h_expr".into()))?;
            let v = match v_expr {
                Some(v) => v,
                None => AnalyticExpr::Const(Complex64::new(1.0, 0.0)),
            };
            Scenario::expression(p, h, v, fps, anchors)
        }
    }
}
