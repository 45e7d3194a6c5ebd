//! Matrix text format: a header line `n <order> mode <exact|float>
//! [conductor <N>]`, followed by one row per line, entries separated by
//! whitespace. Exact entries are sums of terms `rational` or
//! `rational*z^int` (`z` alone allowed); float entries are `a`, `bi`, or
//! `a+bi`. Serialization uses the same grammar so round-trips are lossless.

use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use num::BigRational;

use crate::mat::Mat;
use crate::scalar::{Ctx, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    BadHeader { line: usize, reason: String },
    BadEntry { line: usize, column: usize, token: String },
    RowLength { line: usize, expected: usize, got: usize },
    MissingRows { expected: usize, got: usize },
    ConductorMismatch { expected: usize, got: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::BadHeader { line, reason } => {
                write!(f, "line {}: bad header: {}", line, reason)
            }
            ParseError::BadEntry { line, column, token } => {
                write!(f, "line {}, entry {}: cannot parse {:?}", line, column, token)
            }
            ParseError::RowLength { line, expected, got } => {
                write!(f, "line {}: expected {} entries, got {}", line, expected, got)
            }
            ParseError::MissingRows { expected, got } => {
                write!(f, "expected {} rows, got {}", expected, got)
            }
            ParseError::ConductorMismatch { expected, got } => {
                write!(f, "conductor {} does not match required {}", got, expected)
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// One exact term: coefficient times z^power.
fn parse_term(term: &str, conductor: usize) -> Option<(BigRational, i64)> {
    let term = term.trim();
    if term.is_empty() {
        return None;
    }
    let (coeff_str, power) = match term.split_once('*') {
        Some((c, z)) => (c.trim(), parse_z(z.trim())?),
        None => {
            if let Some(p) = parse_z(term) {
                return Some((BigRational::from_integer(1.into()), p));
            }
            (term, 0)
        }
    };
    let (neg, body) = match coeff_str.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, coeff_str),
    };
    let mut coeff = if body == "z" || body.starts_with("z^") {
        // forms like -z^3
        return parse_z(body).map(|p| {
            let one = BigRational::from_integer(1.into());
            (if neg { -one } else { one }, p)
        });
    } else {
        BigRational::from_str(body).ok()?
    };
    if neg {
        coeff = -coeff;
    }
    let _ = conductor;
    Some((coeff, power))
}

fn parse_z(z: &str) -> Option<i64> {
    if z == "z" {
        return Some(1);
    }
    z.strip_prefix("z^")?.parse::<i64>().ok()
}

/// Splits an exact entry into signed terms at top-level `+` and `-`,
/// keeping each term's sign with it.
fn split_terms(entry: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    for (idx, ch) in entry.char_indices() {
        if (ch == '+' || ch == '-') && idx > 0 && !current.ends_with(['^', '*', '/']) {
            terms.push(std::mem::take(&mut current));
            if ch == '-' {
                current.push('-');
            }
        } else {
            current.push(ch);
        }
    }
    terms.push(current);
    terms.into_iter().filter(|t| !t.trim().is_empty()).collect()
}

fn parse_exact_entry(entry: &str, ctx: &Ctx) -> Option<Scalar> {
    let conductor = match ctx {
        Ctx::Exact { conductor } => *conductor,
        Ctx::Float => return None,
    };
    let mut total = Scalar::zero(ctx);
    let terms = split_terms(entry);
    if terms.is_empty() {
        return None;
    }
    for term in terms {
        let (coeff, power) = parse_term(&term, conductor)?;
        let t = &Scalar::from_rational(ctx, coeff) * &Scalar::root_of_unity(ctx, power);
        total = &total + &t;
    }
    Some(total)
}

fn parse_float_entry(entry: &str) -> Option<Scalar> {
    let entry: String = entry.chars().filter(|c| !c.is_whitespace()).collect();
    // forms: a, bi, a+bi, a-bi (a and b decimal, possibly signed)
    let parse_re = |s: &str| -> Option<f64> { s.parse::<f64>().ok() };
    if let Some(body) = entry.strip_suffix('i') {
        // find the split between real and imaginary parts, if any
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !body[..idx].ends_with(['e', 'E']) {
                split = Some(idx);
            }
        }
        if let Some(idx) = split {
            let re = parse_re(&body[..idx])?;
            let im_str = &body[idx..];
            let im = if im_str == "+" {
                1.0
            } else if im_str == "-" {
                -1.0
            } else {
                parse_re(im_str)?
            };
            return Some(Scalar::Float(Complex64::new(re, im)));
        }
        let im = if body.is_empty() || body == "+" {
            1.0
        } else if body == "-" {
            -1.0
        } else {
            parse_re(body)?
        };
        return Some(Scalar::Float(Complex64::new(0.0, im)));
    }
    parse_re(&entry).map(|re| Scalar::Float(Complex64::new(re, 0.0)))
}

/// Parses the full matrix text. `required_conductor` rejects files whose
/// declared conductor differs (used when two inputs must share a field).
pub fn parse_matrix(text: &str, required_conductor: Option<usize>) -> Result<Mat, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines
        .next()
        .ok_or(ParseError::BadHeader { line: 1, reason: "empty file".into() })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let bad = |reason: &str| ParseError::BadHeader { line: header_line, reason: reason.into() };
    if tokens.len() < 4 || tokens[0] != "n" || tokens[2] != "mode" {
        return Err(bad("expected `n <order> mode <exact|float> [conductor <N>]`"));
    }
    let n: usize = tokens[1].parse().map_err(|_| bad("bad order"))?;
    if n == 0 {
        return Err(bad("order must be positive"));
    }
    let ctx = match tokens[3] {
        "exact" => {
            if tokens.len() != 6 || tokens[4] != "conductor" {
                return Err(bad("exact mode requires `conductor <N>`"));
            }
            let conductor: usize = tokens[5].parse().map_err(|_| bad("bad conductor"))?;
            if conductor == 0 {
                return Err(bad("conductor must be positive"));
            }
            if let Some(required) = required_conductor {
                if conductor != required {
                    return Err(ParseError::ConductorMismatch {
                        expected: required,
                        got: conductor,
                    });
                }
            }
            Ctx::exact(conductor)
        }
        "float" => Ctx::Float,
        other => return Err(bad(&format!("unknown mode {:?}", other))),
    };

    let mut entries = Vec::with_capacity(n * n);
    let mut rows = 0usize;
    for (line_no, line) in lines {
        if rows == n {
            return Err(ParseError::MissingRows { expected: n, got: rows + 1 });
        }
        let row_tokens: Vec<&str> = line.split_whitespace().collect();
        if row_tokens.len() != n {
            return Err(ParseError::RowLength {
                line: line_no,
                expected: n,
                got: row_tokens.len(),
            });
        }
        for (col, tok) in row_tokens.iter().enumerate() {
            let parsed = match ctx {
                Ctx::Exact { .. } => parse_exact_entry(tok, &ctx),
                Ctx::Float => parse_float_entry(tok),
            };
            let s = parsed.ok_or(ParseError::BadEntry {
                line: line_no,
                column: col + 1,
                token: tok.to_string(),
            })?;
            entries.push(s);
        }
        rows += 1;
    }
    if rows != n {
        return Err(ParseError::MissingRows { expected: n, got: rows });
    }
    Ok(Mat::from_entries(n, ctx, entries))
}

pub fn parse_matrix_file(path: &std::path::Path, required_conductor: Option<usize>) -> Result<Mat, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::BadHeader {
        line: 0,
        reason: format!("cannot read {}: {}", path.display(), e),
    })?;
    parse_matrix(&text, required_conductor)
}

/// Serializes in the same grammar the parser accepts; exact entries use
/// Scalar's display form, which is a sum of `rational*z^k` terms.
pub fn serialize_matrix(m: &Mat) -> String {
    let n = m.order();
    let mut out = match m.ctx() {
        Ctx::Exact { conductor } => format!("n {} mode exact conductor {}\n", n, conductor),
        Ctx::Float => format!("n {} mode float\n", n),
    };
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| m.at(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a standalone scalar in the exact entry grammar.
pub fn parse_scalar(text: &str, ctx: &Ctx) -> Option<Scalar> {
    match ctx {
        Ctx::Exact { .. } => parse_exact_entry(text.trim(), ctx),
        Ctx::Float => parse_float_entry(text.trim()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::scalar::set_float_tolerance;

    #[test]
    fn parses_minimal_file() {
        let m = parse_matrix("n 1 mode exact conductor 1\n1\n", None).unwrap();
        assert_eq!(m.order(), 1);
        assert!(m.at(0, 0).is_one());
    }

    #[test]
    fn parses_term_grammar() {
        let ctx = Ctx::exact(8);
        let cases = [
            (
                "1/2+3*z^2",
                &Scalar::from_ratio(&ctx, 1, 2)
                    + &(&Scalar::from_int(&ctx, 3) * &Scalar::root_of_unity(&ctx, 2)),
            ),
            ("z", Scalar::root_of_unity(&ctx, 1)),
            ("-z^3", -&Scalar::root_of_unity(&ctx, 3)),
            ("2-z", &Scalar::from_int(&ctx, 2) - &Scalar::root_of_unity(&ctx, 1)),
            ("-5/7", Scalar::from_ratio(&ctx, -5, 7)),
            ("0", Scalar::zero(&ctx)),
            ("z^-1", Scalar::root_of_unity(&ctx, -1)),
        ];
        for (text, expect) in cases {
            let got = parse_scalar(text, &ctx).unwrap_or_else(|| panic!("parse {:?}", text));
            assert_eq!(got, expect, "entry {:?}", text);
        }
        assert!(parse_scalar("z^", &ctx).is_none());
        assert!(parse_scalar("1//2", &ctx).is_none());
        assert!(parse_scalar("", &ctx).is_none());
    }

    #[test]
    fn parses_float_entries() {
        set_float_tolerance(1e-9);
        let cases = [
            ("1.5", Complex64::new(1.5, 0.0)),
            ("-2", Complex64::new(-2.0, 0.0)),
            ("3i", Complex64::new(0.0, 3.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("1+2i", Complex64::new(1.0, 2.0)),
            ("1.5-0.25i", Complex64::new(1.5, -0.25)),
            ("1e-3+2e2i", Complex64::new(1e-3, 2e2)),
        ];
        for (text, expect) in cases {
            match parse_scalar(text, &Ctx::Float) {
                Some(Scalar::Float(z)) => assert_eq!(z, expect, "entry {:?}", text),
                other => panic!("entry {:?} parsed to {:?}", text, other),
            }
        }
    }

    #[test]
    fn roundtrips_exact_matrices() {
        let (a, b, _) = builtin::derived_pair_2x2();
        for m in [&a, &b, &builtin::sylvester_hadamard(4, Ctx::exact(8))] {
            let text = serialize_matrix(m);
            let back = parse_matrix(&text, None).unwrap();
            assert_eq!(&back, m, "roundtrip failed for\n{}", text);
        }
    }

    #[test]
    fn reports_located_errors() {
        assert!(matches!(
            parse_matrix("n 2 mode exact conductor 4\n1 0\n1\n", None),
            Err(ParseError::RowLength { line: 3, expected: 2, got: 1 })
        ));
        assert!(matches!(
            parse_matrix("n 2 mode exact conductor 4\n1 quux\n0 1\n", None),
            Err(ParseError::BadEntry { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("n 2 mode exact conductor 4\n1 0\n", None),
            Err(ParseError::MissingRows { expected: 2, got: 1 })
        ));
        assert!(matches!(
            parse_matrix("n 2 mode exact\n1 0\n0 1\n", None),
            Err(ParseError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_matrix("n 2 mode exact conductor 4\n1 0\n0 1\n", Some(8)),
            Err(ParseError::ConductorMismatch { expected: 8, got: 4 })
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# identity\nn 2 mode exact conductor 4\n\n1 0\n# middle\n0 1\n";
        let m = parse_matrix(text, None).unwrap();
        assert_eq!(m, Mat::identity(2, Ctx::exact(4)));
    }
}
