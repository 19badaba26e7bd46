//! The model-file grammar and expression parsers.
//!
//! Line-oriented, `#` starts a comment, `;` separates statements on one line:
//!
//! ```text
//! model <ident>
//! dim <n>
//! d w<k> = <2form>        # e.g.  d w2 = - w1^w3
//! pi = <bivector>         # e.g.  pi = X1^X2 + X2^X3
//! ```
//!
//! A 2-form is a signed sum of terms `coef w<i>^w<j>` with `i < j`; the
//! coefficient is an integer or rational, optionally with an `i` suffix
//! (`1`, `-3/2`, `i`, `2i`, `3/2i`), defaulting to 1; complex `a+bi`
//! coefficients are written as two terms. Omitted generators are closed.
//! The literal `0` is an empty sum.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::exterior::{Form, IndexSet, Monomial, Polyvector};
use crate::homology::{DimVector, HodgeDiamond};
use crate::model::LieModel;
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Scan {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Scan {
    fn new(segment: &str, line: usize, col0: usize) -> Self {
        Scan { chars: segment.chars().collect(), pos: 0, line, col0 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col0 + self.pos + 1, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn take_digits(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn take_ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '-') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

/// Optional coefficient in front of an atom: `3`, `3/2`, `i`, `2i`, `3/2i`.
/// Returns 1 when the next token starts the atom itself.
fn parse_coefficient(scan: &mut Scan, atom_start: char) -> Result<GaussianRational, ParseError> {
    scan.skip_ws();
    match scan.peek() {
        Some(c) if c == atom_start => Ok(GaussianRational::one()),
        Some('i') => {
            scan.bump();
            if matches!(scan.peek(), Some(c) if c.is_alphanumeric()) {
                return Err(scan.err("malformed coefficient"));
            }
            Ok(GaussianRational::i())
        }
        Some(c) if c.is_ascii_digit() => {
            let numer: BigInt = scan.take_digits()?.parse().expect("digits");
            let denom: BigInt = if scan.peek() == Some('/') {
                scan.bump();
                let d_pos = scan.pos;
                let d: BigInt = scan.take_digits()?.parse().expect("digits");
                if d.is_zero() {
                    return Err(ParseError {
                        line: scan.line,
                        col: scan.col0 + d_pos + 1,
                        msg: "zero denominator".into(),
                    });
                }
                d
            } else {
                BigInt::one()
            };
            let r = BigRational::new(numer, denom);
            if scan.peek() == Some('i') {
                scan.bump();
                if matches!(scan.peek(), Some(c) if c.is_alphanumeric()) {
                    return Err(scan.err("malformed coefficient"));
                }
                Ok(GaussianRational::new(BigRational::zero(), r))
            } else {
                Ok(GaussianRational::new(r, BigRational::zero()))
            }
        }
        _ => Err(scan.err("malformed coefficient")),
    }
}

/// `w<i>^w<j>` or `X<i>^X<j>` with `i < j`, indices within `1..=n`.
fn parse_atom(scan: &mut Scan, letter: char, n: u8) -> Result<(u8, u8), ParseError> {
    let index = |scan: &mut Scan| -> Result<u8, ParseError> {
        let pos = scan.pos;
        let digits = scan.take_digits()?;
        let v: u32 = digits.parse().map_err(|_| scan.err("malformed index"))?;
        if v < 1 || v > n as u32 {
            return Err(ParseError {
                line: scan.line,
                col: scan.col0 + pos + 1,
                msg: format!("unknown generator {letter}{digits} (dim {n})"),
            });
        }
        Ok(v as u8)
    };
    scan.skip_ws();
    let atom_pos = scan.pos;
    scan.expect(letter)?;
    let i = index(scan)?;
    scan.skip_ws();
    scan.expect('^')?;
    scan.skip_ws();
    scan.expect(letter)?;
    let j = index(scan)?;
    if i >= j {
        return Err(ParseError {
            line: scan.line,
            col: scan.col0 + atom_pos + 1,
            msg: format!("wedge indices must be increasing, got {i} >= {j}"),
        });
    }
    Ok((i, j))
}

/// A signed sum of `coef atom` terms; the literal `0` is the empty sum.
fn parse_sum(scan: &mut Scan, letter: char, n: u8) -> Result<Vec<(u8, u8, GaussianRational)>, ParseError> {
    scan.skip_ws();
    if scan.peek() == Some('0') {
        scan.bump();
        if !scan.at_end() {
            return Err(scan.err("unexpected input after '0'"));
        }
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        scan.skip_ws();
        let sign = match scan.peek() {
            Some('-') => {
                scan.bump();
                -1i64
            }
            Some('+') => {
                if first {
                    return Err(scan.err("unexpected leading '+'"));
                }
                scan.bump();
                1
            }
            Some(_) if first => 1,
            Some(_) => return Err(scan.err("expected '+' or '-' between terms")),
            None if first => return Err(scan.err("expected a term")),
            None => break,
        };
        let mut coef = parse_coefficient(scan, letter)?;
        if sign < 0 {
            coef = -coef;
        }
        scan.skip_ws();
        let (i, j) = parse_atom(scan, letter, n)?;
        terms.push((i, j, coef));
        first = false;
        scan.skip_ws();
        if scan.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

/// Statements of a model file, with their source positions.
enum Statement {
    Model(String),
    Dim(u8),
    Structure(u8, Vec<(u8, u8, GaussianRational)>),
    Pi(Vec<(u8, u8, GaussianRational)>),
}

fn parse_statement(scan: &mut Scan, n_opt: Option<u8>) -> Result<Statement, ParseError> {
    scan.skip_ws();
    let kw_pos = scan.pos;
    let kw = scan.take_ident()?;
    match kw.as_str() {
        "model" => {
            scan.skip_ws();
            let name = scan.take_ident()?;
            if !scan.at_end() {
                return Err(scan.err("unexpected input after model name"));
            }
            Ok(Statement::Model(name))
        }
        "dim" => {
            scan.skip_ws();
            let pos = scan.pos;
            let digits = scan.take_digits()?;
            let n: u8 = digits.parse().map_err(|_| scan.err("malformed dimension"))?;
            if !(1..=8).contains(&n) {
                return Err(ParseError {
                    line: scan.line,
                    col: scan.col0 + pos + 1,
                    msg: format!("dimension {n} out of range 1..=8"),
                });
            }
            if !scan.at_end() {
                return Err(scan.err("unexpected input after dimension"));
            }
            Ok(Statement::Dim(n))
        }
        "d" => {
            let n = n_opt.ok_or_else(|| ParseError {
                line: scan.line,
                col: scan.col0 + kw_pos + 1,
                msg: "dim must precede structure equations".into(),
            })?;
            scan.skip_ws();
            scan.expect('w')?;
            let pos = scan.pos;
            let digits = scan.take_digits()?;
            let k: u32 = digits.parse().map_err(|_| scan.err("malformed index"))?;
            if k < 1 || k > n as u32 {
                return Err(ParseError {
                    line: scan.line,
                    col: scan.col0 + pos + 1,
                    msg: format!("unknown generator w{digits} (dim {n})"),
                });
            }
            scan.skip_ws();
            scan.expect('=')?;
            let terms = parse_sum(scan, 'w', n)?;
            Ok(Statement::Structure(k as u8, terms))
        }
        "pi" => {
            let n = n_opt.ok_or_else(|| ParseError {
                line: scan.line,
                col: scan.col0 + kw_pos + 1,
                msg: "dim must precede the Poisson bivector".into(),
            })?;
            scan.skip_ws();
            scan.expect('=')?;
            let terms = parse_sum(scan, 'X', n)?;
            Ok(Statement::Pi(terms))
        }
        other => Err(ParseError {
            line: scan.line,
            col: scan.col0 + kw_pos + 1,
            msg: format!("unknown statement '{other}'"),
        }),
    }
}

/// Splits a line into `;`-separated statement segments with column offsets,
/// after stripping `#` comments.
fn segments(line: &str) -> Vec<(usize, String)> {
    let stripped: String = match line.find('#') {
        Some(idx) => line[..idx].to_string(),
        None => line.to_string(),
    };
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut start = 0usize;
    let chars: Vec<char> = stripped.chars().collect();
    for (i, c) in chars.iter().enumerate() {
        if *c == ';' {
            out.push((start, chars[start..i].iter().collect()));
            start = i + 1;
        }
    }
    out.push((start, chars[start..].iter().collect()));
    out.into_iter().filter(|(_, s)| !s.trim().is_empty()).collect()
}

/// Parses a model file into the model and its optional Poisson bivector.
pub fn parse_model(text: &str) -> Result<(LieModel, Option<Polyvector>), ParseError> {
    let mut name: Option<String> = None;
    let mut dim: Option<u8> = None;
    let mut structure: Vec<(u8, Form)> = Vec::new();
    let mut seen_structure: Vec<u8> = Vec::new();
    let mut pi: Option<Polyvector> = None;
    let mut last_line = 0usize;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        last_line = line_no;
        for (col0, segment) in segments(line) {
            let mut scan = Scan::new(&segment, line_no, col0);
            match parse_statement(&mut scan, dim)? {
                Statement::Model(m) => {
                    if name.is_some() {
                        return Err(scan.err("duplicate model statement"));
                    }
                    name = Some(m);
                }
                Statement::Dim(n) => {
                    if dim.is_some() {
                        return Err(scan.err("duplicate dim statement"));
                    }
                    dim = Some(n);
                }
                Statement::Structure(k, terms) => {
                    let n = dim.expect("checked in parse_statement");
                    if seen_structure.contains(&k) {
                        return Err(ParseError {
                            line: line_no,
                            col: col0 + 1,
                            msg: format!("duplicate structure equation for w{k}"),
                        });
                    }
                    seen_structure.push(k);
                    let mut form = Form::zero(n);
                    for (i, j, c) in terms {
                        form.add_term(Monomial::hol_from(&[i, j]), c);
                    }
                    structure.push((k, form));
                }
                Statement::Pi(terms) => {
                    let n = dim.expect("checked in parse_statement");
                    if pi.is_some() {
                        return Err(ParseError {
                            line: line_no,
                            col: col0 + 1,
                            msg: "duplicate pi statement".into(),
                        });
                    }
                    let mut pv = Polyvector::zero(n);
                    for (i, j, c) in terms {
                        pv.add_term(IndexSet::from_indices(&[i, j]), c);
                    }
                    pi = Some(pv);
                }
            }
        }
    }

    let name = name.ok_or(ParseError {
        line: last_line + 1,
        col: 1,
        msg: "missing model statement".into(),
    })?;
    let n = dim.ok_or(ParseError {
        line: last_line + 1,
        col: 1,
        msg: "missing dim statement".into(),
    })?;
    let model = LieModel::new(name, n, structure).map_err(|e| ParseError {
        line: last_line,
        col: 1,
        msg: e.to_string(),
    })?;
    Ok((model, pi))
}

/// Parses a standalone Poisson bivector expression like `X1^X2 + X2^X3`.
pub fn parse_pi_expr(n: u8, text: &str) -> Result<Polyvector, ParseError> {
    let mut scan = Scan::new(text, 1, 0);
    let terms = parse_sum(&mut scan, 'X', n)?;
    if !scan.at_end() {
        return Err(scan.err("unexpected trailing input"));
    }
    let mut pv = Polyvector::zero(n);
    for (i, j, c) in terms {
        pv.add_term(IndexSet::from_indices(&[i, j]), c);
    }
    Ok(pv)
}

/// Parses a dimension table: integers separated by commas or whitespace,
/// `#` comments allowed; the length must be odd (`2n + 1`).
pub fn parse_dims(text: &str) -> Result<DimVector, ParseError> {
    let mut dims = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let stripped = match line.find('#') {
            Some(idx) => &line[..idx],
            None => line,
        };
        for tok in stripped.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok.parse().map_err(|_| ParseError {
                line: line_idx + 1,
                col: 1,
                msg: format!("malformed count '{tok}'"),
            })?;
            dims.push(v);
        }
    }
    if dims.is_empty() || dims.len() % 2 == 0 {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: format!("dimension table must have odd length 2n+1, got {}", dims.len()),
        });
    }
    Ok(DimVector::new(dims))
}

/// Parses a Hodge diamond in pyramid form: rows separated by `;` or
/// newlines, row `d` listing `h^{p,q}` with `p + q = d` and `p` descending.
pub fn parse_diamond(text: &str) -> Result<HodgeDiamond, ParseError> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let stripped = match line.find('#') {
            Some(idx) => &line[..idx],
            None => line,
        };
        for part in stripped.split(';') {
            if part.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in part.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok.parse().map_err(|_| ParseError {
                    line: line_idx + 1,
                    col: 1,
                    msg: format!("malformed count '{tok}'"),
                })?;
                row.push(v);
            }
            rows.push(row);
        }
    }
    let bad_shape = |msg: &str| ParseError { line: 1, col: 1, msg: msg.into() };
    if rows.is_empty() || rows.len().is_multiple_of(2) {
        return Err(bad_shape("diamond must have 2n+1 pyramid rows"));
    }
    let n = rows.len() / 2;
    let mut h = vec![vec![0usize; n + 1]; n + 1];
    for (d, row) in rows.iter().enumerate() {
        let expected = (d.min(2 * n - d) + 1).min(n + 1);
        if row.len() != expected {
            return Err(bad_shape(&format!(
                "pyramid row {d} has {} entries, expected {expected}",
                row.len()
            )));
        }
        for (idx, v) in row.iter().enumerate() {
            let p = d.min(n) - idx;
            let q = d - p;
            h[p][q] = *v;
        }
    }
    Ok(HodgeDiamond::new(n as u8, h))
}

/// Renders a signed sum in the grammar's canonical form; complex
/// coefficients split into a real and an imaginary term.
fn render_sum(terms: Vec<(String, GaussianRational)>) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (atom, c) in terms {
        let re = c.re.clone();
        let im = c.im.clone();
        if !re.is_zero() {
            let mag = num::abs(re.clone());
            let mag_str = if mag.is_one() {
                String::new()
            } else if mag.denom().is_one() {
                format!("{} ", mag.numer())
            } else {
                format!("{}/{} ", mag.numer(), mag.denom())
            };
            pieces.push((re < BigRational::zero(), format!("{mag_str}{atom}")));
        }
        if !im.is_zero() {
            let mag = num::abs(im.clone());
            let mag_str = if mag.is_one() {
                "i ".to_string()
            } else if mag.denom().is_one() {
                format!("{}i ", mag.numer())
            } else {
                format!("{}/{}i ", mag.numer(), mag.denom())
            };
            pieces.push((im < BigRational::zero(), format!("{mag_str}{atom}")));
        }
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *neg {
                out.push_str("- ");
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

/// Canonical model-file rendering; parsing it back reproduces the model.
pub fn render_model(model: &LieModel, pi: Option<&Polyvector>) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", model.name()));
    out.push_str(&format!("dim {}\n", model.n()));
    for (k, form) in model.structure() {
        let terms: Vec<(String, GaussianRational)> = form
            .terms()
            .map(|(m, c)| {
                let idx: Vec<u8> = m.hol.iter().collect();
                (format!("w{}^w{}", idx[0], idx[1]), c.clone())
            })
            .collect();
        out.push_str(&format!("d w{} = {}\n", k, render_sum(terms)));
    }
    if let Some(pv) = pi {
        out.push_str(&format!("pi = {}\n", render_pi(pv)));
    }
    out
}

/// Canonical bivector expression, e.g. `X1^X2 + X2^X3`.
pub fn render_pi(pi: &Polyvector) -> String {
    let terms: Vec<(String, GaussianRational)> = pi
        .terms()
        .map(|(s, c)| {
            let idx: Vec<u8> = s.iter().collect();
            (format!("X{}^X{}", idx[0], idx[1]), c.clone())
        })
        .collect();
    render_sum(terms)
}
