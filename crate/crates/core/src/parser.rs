//! Text input: polynomial germs and the structured germ descriptors.
//!
//! The polynomial grammar is a small arithmetic-expression language with the
//! usual precedence (`^` over `*`/`/` over binary `+`/`-`), parsed by
//! recursive descent:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor | <implicit after a number> factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom ('^' UINT)?
//! atom   := NUMBER | IDENT | '(' expr ')'
//! ```
//!
//! Implicit multiplication is only accepted right after a numeric literal
//! (`3x^2`, `2(x+y)`); `xy` is a single identifier and therefore an unknown
//! variable unless it was declared.

use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::invariants::{Dim1Kind, PuiseuxChain};
use crate::rational::Rational;
use crate::MAX_VARS;

const MAX_EXPONENT: u32 = 4096;

/// Exponent vectors of the monomials of a germ in `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialSupport {
    vars: usize,
    points: Vec<Vec<u32>>,
}

impl MonomialSupport {
    /// Validates and sorts the points. Duplicates are merged.
    pub fn new(vars: usize, mut points: Vec<Vec<u32>>) -> Result<Self> {
        if vars == 0 || vars > MAX_VARS {
            return Err(Error::TooManyVariables(vars));
        }
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        for p in &points {
            if p.len() != vars {
                return Err(Error::Validation(format!(
                    "point {p:?} does not have {vars} coordinates"
                )));
            }
            if p.iter().all(|&c| c == 0) {
                return Err(Error::ConstantTerm);
            }
        }
        points.sort();
        points.dedup();
        Ok(MonomialSupport { vars, points })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Dimension `n` of the hypersurface (`vars - 1`).
    pub fn dim(&self) -> usize {
        self.vars - 1
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    /// Support of `x_0^d + ... + x_n^d`.
    pub fn homogeneous_diagonal(vars: usize, d: u32) -> Result<Self> {
        let points = (0..vars)
            .map(|i| {
                let mut p = vec![0; vars];
                p[i] = d;
                p
            })
            .collect();
        MonomialSupport::new(vars, points)
    }

    /// Support of `f(x_0^k, ..., x_n^k)`.
    pub fn scale(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("scale factor must be at least 1".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(|&c| c * k).collect())
            .collect();
        MonomialSupport::new(self.vars, points)
    }
}

/// Support of `f(x_0^k, ..., x_n^k)`.
pub fn scale_support(support: &MonomialSupport, k: u32) -> Result<MonomialSupport> {
    support.scale(k)
}

/// Polynomial with rational coefficients, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    fn constant(c: Rational) -> Self {
        let mut p = Polynomial::default();
        if !c.is_zero() {
            p.terms.insert(vec![0; MAX_VARS], c);
        }
        p
    }

    fn variable(index: usize) -> Self {
        let mut e = vec![0; MAX_VARS];
        e[index] = 1;
        let mut p = Polynomial::default();
        p.terms.insert(e, Rational::one());
        p
    }

    fn add_term(&mut self, exponent: Vec<u32>, coeff: Rational) {
        let slot = self
            .terms
            .entry(exponent.clone())
            .or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    fn add(mut self, other: Polynomial) -> Self {
        for (e, c) in other.terms {
            self.add_term(e, c);
        }
        self
    }

    fn neg(self) -> Self {
        Polynomial {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }

    /// Term-by-term product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(Rational::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Nonzero terms as (exponent vector of length `MAX_VARS`, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// Highest variable index used, plus one.
    pub fn used_vars(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .max()
            .map_or(0, |i| i + 1)
    }

    /// Converts to a support with `vars` variables.
    pub fn support(&self, vars: usize) -> Result<MonomialSupport> {
        if self.terms.is_empty() {
            return Err(Error::EmptySupport);
        }
        if self.terms.keys().any(|e| e.iter().all(|&x| x == 0)) {
            return Err(Error::ConstantTerm);
        }
        let vars = vars.max(self.used_vars());
        let points = self.terms.keys().map(|e| e[..vars].to_vec()).collect();
        MonomialSupport::new(vars, points)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse().map_err(|_| Error::Syntax {
                    pos: start,
                    message: "integer literal too large".into(),
                })?;
                out.push((Tok::Num(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(Error::Syntax {
                    pos: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Maps identifiers to variable indices.
#[derive(Debug)]
enum Names {
    Declared(Vec<String>),
    /// `x, y, z, w` or `x0 .. x7`; the first style seen wins.
    Default(Option<bool>),
}

impl Names {
    fn resolve(&mut self, name: &str, pos: usize) -> Result<usize> {
        let unknown = |msg: String| Error::Syntax { pos, message: msg };
        match self {
            Names::Declared(names) => names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| unknown(format!("unknown variable {name:?}"))),
            Names::Default(style) => {
                let letter = ["x", "y", "z", "w"].iter().position(|&n| n == name);
                let indexed = name
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|rest| rest.parse::<usize>().ok());
                let (idx, is_indexed) = match (letter, indexed) {
                    (Some(i), _) => (i, false),
                    (None, Some(i)) if i < MAX_VARS => (i, true),
                    (None, Some(i)) => {
                        return Err(unknown(format!(
                            "variable index {i} exceeds the limit of {MAX_VARS} variables"
                        )))
                    }
                    _ => return Err(unknown(format!("unknown variable {name:?}"))),
                };
                match style {
                    Some(s) if *s != is_indexed => Err(unknown(
                        "cannot mix x,y,z,w with indexed names x0..x7".into(),
                    )),
                    _ => {
                        *style = Some(is_indexed);
                        Ok(idx)
                    }
                }
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    names: Names,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let (mut acc, mut after_number) = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let (f, num) = self.factor()?;
                    acc = acc.mul(&f);
                    after_number = num;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let (f, num) = self.factor()?;
                    let c = f.as_constant().ok_or(Error::Syntax {
                        pos,
                        message: "division is only allowed by a constant".into(),
                    })?;
                    if c.is_zero() {
                        return Err(Error::Syntax {
                            pos,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.mul(&Polynomial::constant(c.recip()?));
                    after_number = num;
                }
                Tok::Ident(_) | Tok::LParen if after_number => {
                    let (f, num) = self.factor()?;
                    acc = acc.mul(&f);
                    after_number = num;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Returns the factor and whether it ended with a bare numeric literal.
    fn factor(&mut self) -> Result<(Polynomial, bool)> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let (f, num) = self.factor()?;
                Ok((f.neg(), num))
            }
            Tok::Plus => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<(Polynomial, bool)> {
        let (base, is_number) = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok((base, is_number));
        }
        self.bump();
        match self.bump() {
            Tok::Num(e) if e <= MAX_EXPONENT as u64 => Ok((base.pow(e as u32), is_number)),
            Tok::Num(_) => {
                self.at -= 1;
                self.err(format!("exponent exceeds {MAX_EXPONENT}"))
            }
            _ => {
                self.at -= 1;
                self.err("expected a nonnegative integer exponent after '^'")
            }
        }
    }

    fn atom(&mut self) -> Result<(Polynomial, bool)> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok((Polynomial::constant(Rational::from_int(n)), true)),
            Tok::Ident(name) => {
                let idx = self.names.resolve(&name, pos)?;
                Ok((Polynomial::variable(idx), false))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok((inner, false))
            }
            Tok::End => {
                self.at = self.toks.len() - 1;
                self.err("unexpected end of input")
            }
            other => {
                self.at -= 1;
                self.err(format!("unexpected token {other:?}"))
            }
        }
    }
}

/// Parses and expands a polynomial, keeping coefficients.
pub fn parse_polynomial_terms(text: &str, variable_names: Option<&[&str]>) -> Result<Polynomial> {
    if let Some(names) = variable_names {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
    }
    let toks = tokenize(text)?;
    let names = match variable_names {
        Some(v) => Names::Declared(v.iter().map(|s| s.to_string()).collect()),
        None => Names::Default(None),
    };
    let mut p = Parser {
        toks,
        at: 0,
        names,
    };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(poly)
}

/// Parses a polynomial into its monomial support.
///
/// With declared names the germ has exactly that many variables; otherwise
/// the dimension is inferred from the highest variable index used.
pub fn parse_polynomial(text: &str, variable_names: Option<&[&str]>) -> Result<MonomialSupport> {
    let poly = parse_polynomial_terms(text, variable_names)?;
    let vars = variable_names.map_or(0, |v| v.len());
    poly.support(vars)
}

/// Parses a polynomial file: an optional first line `vars: x,y,z`, then the
/// expression (which may span several lines). Lines starting with `#` are
/// ignored.
pub fn parse_polynomial_file(contents: &str) -> Result<MonomialSupport> {
    let blanked: String = contents
        .split_inclusive('\n')
        .map(|line| {
            if line.trim_start().starts_with('#') {
                let body = line.trim_end_matches('\n');
                " ".repeat(body.len()) + &line[body.len()..]
            } else {
                line.to_string()
            }
        })
        .collect();
    let contents = blanked.as_str();
    let trimmed = contents.trim_start();
    let offset = contents.len() - trimmed.len();
    if let Some(rest) = trimmed.strip_prefix("vars:") {
        let (header, body) = rest.split_once('\n').unwrap_or((rest, ""));
        let names: Vec<&str> = header
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if names.is_empty() {
            return Err(Error::Syntax {
                pos: offset,
                message: "empty vars header".into(),
            });
        }
        let body_offset = contents.len() - body.len();
        parse_polynomial(body, Some(&names)).map_err(|e| shift_pos(e, body_offset))
    } else {
        parse_polynomial(contents, None)
    }
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, message } => Error::Syntax {
            pos: pos + by,
            message,
        },
        other => other,
    }
}

/// A germ described in one of the supported input forms.
#[derive(Debug, Clone, PartialEq)]
pub enum GermSpec {
    Polynomial(MonomialSupport),
    QuasiHomogeneous(Vec<Rational>),
    Homogeneous { n: u32, d: u32 },
    PuiseuxCurve(PuiseuxChain),
    Dim1Family { kind: Dim1Kind, a: u32, b: u32 },
}

impl GermSpec {
    /// Dimension `n` of the hypersurface.
    pub fn dim(&self) -> usize {
        match self {
            GermSpec::Polynomial(s) => s.dim(),
            GermSpec::QuasiHomogeneous(w) => w.len() - 1,
            GermSpec::Homogeneous { n, .. } => *n as usize,
            GermSpec::PuiseuxCurve(_) | GermSpec::Dim1Family { .. } => 1,
        }
    }
}

/// Parses `"1/2,1/3,1/7"`; each weight must lie in `(0, 1)`.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>> {
    let weights: Vec<Rational> = text
        .split(',')
        .map(str::parse)
        .collect::<Result<_>>()?;
    validate_weights(&weights)?;
    Ok(weights)
}

pub(crate) fn validate_weights(weights: &[Rational]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Validation("at least one weight is required".into()));
    }
    if weights.len() > MAX_VARS {
        return Err(Error::TooManyVariables(weights.len()));
    }
    let one = Rational::one();
    match weights.iter().find(|w| !w.is_positive() || **w >= one) {
        Some(w) => Err(Error::InvalidWeight(w.to_string())),
        None => Ok(()),
    }
}

/// Parses `"k1:n1,k2:n2"` into a validated chain.
pub fn parse_puiseux(text: &str) -> Result<PuiseuxChain> {
    let pairs = text
        .split(',')
        .map(|pair| {
            let (k, n) = pair
                .split_once(':')
                .ok_or_else(|| Error::Validation(format!("expected k:n, got {pair:?}")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Validation(format!("not a positive integer: {s:?}")))
            };
            Ok((parse(k)?, parse(n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    PuiseuxChain::new(pairs)
}

/// Builds a germ descriptor from CLI-style key/value pairs. Exactly one of
/// `poly`, `weights`, `homog` (`"N D"`), `puiseux` or `family`
/// (`"plain|x|xy A B"`) must be present; `vars` optionally declares the
/// variable names of `poly`.
pub fn parse_germ_spec(args: &BTreeMap<String, String>) -> Result<GermSpec> {
    const FORMS: [&str; 5] = ["poly", "weights", "homog", "puiseux", "family"];
    let given: Vec<&str> = FORMS
        .iter()
        .copied()
        .filter(|k| args.contains_key(*k))
        .collect();
    let form = match given.as_slice() {
        [one] => *one,
        [] => {
            return Err(Error::Validation(
                "one of poly, weights, homog, puiseux, family is required".into(),
            ))
        }
        many => {
            return Err(Error::Validation(format!(
                "conflicting germ descriptions: {}",
                many.join(", ")
            )))
        }
    };
    let value = args[form].as_str();
    match form {
        "poly" => {
            let names: Option<Vec<&str>> = args
                .get("vars")
                .map(|v| v.split(',').map(str::trim).collect());
            Ok(GermSpec::Polynomial(parse_polynomial(
                value,
                names.as_deref(),
            )?))
        }
        "weights" => Ok(GermSpec::QuasiHomogeneous(parse_weights(value)?)),
        "homog" => {
            let nums = parse_uints(value, 2)?;
            let (n, d) = (nums[0], nums[1]);
            if n < 1 || d < 2 {
                return Err(Error::Validation(format!(
                    "homogeneous germs need n >= 1 and d >= 2, got n={n}, d={d}"
                )));
            }
            if n as usize + 1 > MAX_VARS {
                return Err(Error::TooManyVariables(n as usize + 1));
            }
            Ok(GermSpec::Homogeneous { n, d })
        }
        "puiseux" => Ok(GermSpec::PuiseuxCurve(parse_puiseux(value)?)),
        _ => {
            let mut parts = value.split_whitespace();
            let kind: Dim1Kind = parts
                .next()
                .ok_or_else(|| Error::Validation("family kind missing".into()))?
                .parse()?;
            let rest: Vec<&str> = parts.collect();
            let nums = parse_uints(&rest.join(" "), 2)?;
            let (a, b) = (nums[0], nums[1]);
            if a < 2 || b < 2 {
                return Err(Error::Validation(format!(
                    "family parameters need a, b >= 2, got a={a}, b={b}"
                )));
            }
            Ok(GermSpec::Dim1Family { kind, a, b })
        }
    }
}

fn parse_uints(text: &str, count: usize) -> Result<Vec<u32>> {
    let nums: Vec<u32> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Validation(format!("not a nonnegative integer: {s:?}")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != count {
        return Err(Error::Validation(format!(
            "expected {count} integers, got {:?}",
            text
        )));
    }
    Ok(nums)
}
