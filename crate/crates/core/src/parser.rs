//! Map files.
//!
//! ```text
//! vars: x1 x2
//! targets: a1 a2      # optional, defaults to a1..an
//! map:
//!   (x1*x2)^2
//!   (x1*x2)^3 + x1
//! ```
//!
//! One expression per line after `map:`; `;` may also separate expressions
//! on a single line. Other `key: value` header lines are kept as options.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Arena, ArenaRef, Polynomial, PolynomialMap, Rational};

const MAX_EXPONENT: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDocument {
    pub source_vars: Vec<String>,
    pub target_vars: Vec<String>,
    pub component_exprs: Vec<String>,
    pub options: BTreeMap<String, String>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(i) => &s[..i],
        None => s,
    }
}

fn parse_names(rest: &str, line: usize, col0: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut col = col0;
    for tok in rest.split(|c: char| c.is_whitespace() || c == ',') {
        if !tok.is_empty() {
            if !crate::poly::is_valid_name(tok) {
                let off = rest.find(tok).unwrap_or(0);
                return Err(perr(line, col0 + rest[..off].chars().count(), format!("invalid variable name `{tok}`")));
            }
            if out.iter().any(|n| n == tok) {
                return Err(perr(line, col, format!("duplicate variable name `{tok}`")));
            }
            out.push(tok.to_string());
        }
        col += tok.chars().count() + 1;
    }
    Ok(out)
}

/// Parse a map file into its document and the expanded map.
pub fn parse_map(text: &str) -> Result<(MapDocument, PolynomialMap)> {
    let mut source: Option<Vec<String>> = None;
    let mut targets: Option<(Vec<String>, usize)> = None;
    let mut options = BTreeMap::new();
    let mut exprs: Vec<(String, usize, usize)> = Vec::new();
    let mut in_map = false;
    let mut map_line = 0;

    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        if in_map {
            push_exprs(body, line, 1, &mut exprs);
            continue;
        }
        let Some(colon) = body.find(':') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(perr(line, col, "expected `key: value` header line"));
        };
        let key = body[..colon].trim();
        let rest = &body[colon + 1..];
        let rest_col = body[..colon + 1].chars().count() + 1;
        match key {
            "vars" => {
                if source.is_some() {
                    return Err(perr(line, 1, "`vars:` given twice"));
                }
                source = Some(parse_names(rest, line, rest_col)?);
            }
            "targets" => {
                if targets.is_some() {
                    return Err(perr(line, 1, "`targets:` given twice"));
                }
                targets = Some((parse_names(rest, line, rest_col)?, line));
            }
            "map" => {
                in_map = true;
                map_line = line;
                push_exprs(rest, line, rest_col, &mut exprs);
            }
            _ => {
                if !crate::poly::is_valid_name(key) {
                    return Err(perr(line, 1, format!("invalid header key `{key}`")));
                }
                options.insert(key.to_string(), rest.trim().to_string());
            }
        }
    }

    let source = source.ok_or_else(|| perr(1, 1, "missing `vars:` line"))?;
    if !in_map {
        return Err(perr(text.lines().count().max(1), 1, "missing `map:` section"));
    }
    if source.is_empty() {
        return Err(perr(1, 1, "no source variables declared"));
    }
    let n = source.len();
    let target_vars = match targets {
        Some((t, line)) => {
            if t.len() != n {
                return Err(perr(line, 1, format!("expected {n} target names, found {}", t.len())));
            }
            t
        }
        None => (1..=n).map(|i| format!("a{i}")).collect(),
    };
    if exprs.len() != n {
        let (line, col) = exprs.last().map(|e| (e.1, e.2)).unwrap_or((map_line, 1));
        return Err(perr(line, col, format!("expected {n} map components, found {}", exprs.len())));
    }
    let src_arena = Arena::new(source.clone()).map_err(|e| perr(1, 1, e.to_string()))?;
    let tgt_arena = Arena::new(target_vars.clone()).map_err(|e| perr(1, 1, e.to_string()))?;
    let mut comps = Vec::with_capacity(n);
    for (e, line, col) in &exprs {
        comps.push(parse_expr(e, &src_arena, *line, *col)?);
    }
    let map = PolynomialMap::new(src_arena, tgt_arena, comps).map_err(|e| perr(map_line, 1, e.to_string()))?;
    let doc = MapDocument {
        source_vars: source,
        target_vars,
        component_exprs: exprs.into_iter().map(|e| e.0).collect(),
        options,
    };
    Ok((doc, map))
}

fn push_exprs(body: &str, line: usize, col0: usize, out: &mut Vec<(String, usize, usize)>) {
    let mut col = col0;
    for piece in body.split(';') {
        let lead = piece.len() - piece.trim_start().len();
        if !piece.trim().is_empty() {
            out.push((
                piece.trim().to_string(),
                line,
                col + piece[..lead].chars().count(),
            ));
        }
        col += piece.chars().count() + 1;
    }
}

/// Parse one expression over `arena`. `line`/`col` locate its first
/// character for diagnostics.
pub fn parse_expr(src: &str, arena: &ArenaRef, line: usize, col: usize) -> Result<Polynomial> {
    let mut p = ExprParser {
        chars: src.chars().collect(),
        pos: 0,
        arena,
        line,
        col,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(e)
}

struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    arena: &'a ArenaRef,
    line: usize,
    col: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    return Err(self.err("implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some('-') => return Err(self.err("negative exponent")),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.err("expected a nonnegative integer exponent")),
        }
        let start = self.pos;
        let digits = self.digits();
        let e: u32 = match digits.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                self.pos = start;
                return Err(self.err(format!("exponent larger than {MAX_EXPONENT}")));
            }
        };
        if self.peek() == Some('^') {
            return Err(self.err("ambiguous `^` chain; add parentheses"));
        }
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit string");
                if self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
                    return Err(self.err("implicit multiplication is not allowed; use `*`"));
                }
                let mut den = BigInt::from(1);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if c.is_ascii_digit() => {}
                        _ => return Err(self.err("expected an integer denominator")),
                    }
                    let at = self.pos;
                    den = self.digits().parse().expect("digit string");
                    if den.is_zero() {
                        self.pos = at;
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(Polynomial::constant(self.arena, Rational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.arena.index_of(&name) {
                    Some(i) => Ok(Polynomial::var(self.arena, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(format!("unknown variable `{name}`")))
                    }
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}
