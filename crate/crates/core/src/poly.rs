//! Sparse Laurent polynomials in one to three complex variables.
//!
//! A polynomial is a finite map from integer exponent vectors (negative entries
//! allowed) to nonzero complex coefficients. Terms are kept in graded
//! lexicographic order so printing and hashing are deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported number of variables.
pub const MAX_ARITY: usize = 3;

/// Coefficients whose modulus falls below this fraction of the largest one
/// are treated as zero when a slice is formed.
pub const SLICE_ZERO_REL: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {index} exceeds the supported arity {max}")]
    ArityTooLarge { index: usize, max: usize },
    #[error("polynomial is empty after combining like terms")]
    Empty,
    #[error("coordinate {index} is zero but the polynomial has a negative exponent in it")]
    ZeroCoordinate { index: usize },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("coordinate {index} is not a point of the complex torus")]
    NotOnTorus { index: usize },
}

/// An integer exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<i32>);

impl Exponent {
    pub fn new(coords: impl Into<Vec<i32>>) -> Self {
        Exponent(coords.into())
    }

    pub fn zero(arity: usize) -> Self {
        Exponent(vec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    /// `<self, x>` for a real point.
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
    }

    pub fn shifted(&self, by: &[i32]) -> Exponent {
        Exponent(self.0.iter().zip(by).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    /// Graded lexicographic: total degree first, then coordinates.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<i32>> for Exponent {
    fn from(v: Vec<i32>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[i32; N]> for Exponent {
    fn from(v: [i32; N]) -> Self {
        Exponent(v.to_vec())
    }
}

/// A point of `(C*)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PolyError> {
        if let Some(index) = coords.iter().position(|z| z.norm() == 0.0 || !z.is_finite()) {
            return Err(PolyError::NotOnTorus { index });
        }
        Ok(ComplexPoint(coords))
    }

    /// The point `exp(x + i*theta)` coordinatewise.
    pub fn from_log_polar(x: &[f64], theta: &[f64]) -> Self {
        ComplexPoint(
            x.iter()
                .zip(theta)
                .map(|(&r, &t)| Complex64::from_polar(r.exp(), t))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Image under the Log map.
    pub fn log(&self) -> LogPoint {
        LogPoint(self.0.iter().map(|z| z.norm().ln()).collect())
    }

    /// Image under the Arg map, reduced to `[0, 2*pi)`.
    pub fn arg(&self) -> Vec<f64> {
        self.0.iter().map(|z| reduce_angle(z.arg())).collect()
    }
}

/// Reduce an angle into `[0, 2*pi)`.
pub fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of `R^n` in logarithmic coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogPoint(pub Vec<f64>);

impl LogPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        LogPoint(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<f64>> for LogPoint {
    fn from(v: Vec<f64>) -> Self {
        LogPoint(v)
    }
}

/// Dense univariate restriction `q(w) = sum_k coeffs[k] * w^(min_exp + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub min_exp: i32,
    pub coeffs: Vec<Complex64>,
    /// Every coefficient vanished (below [`SLICE_ZERO_REL`] of the
    /// polynomial's coefficient scale).
    pub degenerate: bool,
}

impl Slice {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w.powi(self.min_exp)
    }
}

/// A sparse Laurent polynomial with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    arity: usize,
    terms: BTreeMap<Exponent, Complex64>,
    min_exp: Vec<i32>,
    max_exp: Vec<i32>,
}

impl LaurentPolynomial {
    /// Build from (exponent, coefficient) pairs, combining like terms and
    /// dropping exact zeros.
    pub fn new<I, E>(arity: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (E, Complex64)>,
        E: Into<Exponent>,
    {
        if arity == 0 || arity > MAX_ARITY {
            return Err(PolyError::ArityTooLarge { index: arity, max: MAX_ARITY });
        }
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            let e = e.into();
            if e.arity() != arity {
                return Err(PolyError::ArityMismatch { expected: arity, got: e.arity() });
            }
            *map.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        if map.is_empty() {
            return Err(PolyError::Empty);
        }
        let mut min_exp = vec![i32::MAX; arity];
        let mut max_exp = vec![i32::MIN; arity];
        for e in map.keys() {
            for (j, &a) in e.0.iter().enumerate() {
                min_exp[j] = min_exp[j].min(a);
                max_exp[j] = max_exp[j].max(a);
            }
        }
        Ok(LaurentPolynomial { arity, terms: map, min_exp, max_exp })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real<E: Into<Exponent>>(
        arity: usize,
        terms: impl IntoIterator<Item = (E, f64)>,
    ) -> Result<Self, PolyError> {
        Self::new(arity, terms.into_iter().map(|(e, c)| (e, Complex64::new(c, 0.0))))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Option<Complex64> {
        self.terms.get(e).copied()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Smallest and largest exponent of variable `j` over the support.
    pub fn exponent_range(&self, j: usize) -> (i32, i32) {
        (self.min_exp[j], self.max_exp[j])
    }

    /// Largest coefficient modulus.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    /// Total degree span used in residual bounds.
    pub fn degree_span(&self) -> i32 {
        (0..self.arity).map(|j| self.max_exp[j] - self.min_exp[j]).sum()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64, PolyError> {
        if z.len() != self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: z.len() });
        }
        for (j, zj) in z.iter().enumerate() {
            if zj.norm() == 0.0 && self.min_exp[j] < 0 {
                return Err(PolyError::ZeroCoordinate { index: j });
            }
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the zero-coordinate check.
    pub fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = *c;
            for (zj, &a) in z.iter().zip(&e.0) {
                if a != 0 {
                    m *= zj.powi(a);
                }
            }
            acc += m;
        }
        acc
    }

    /// Evaluate at `exp(x + i*theta)` without forming the point.
    pub fn eval_log_polar(&self, x: &[f64], theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let (mut lr, mut ph) = (0.0, 0.0);
            for j in 0..self.arity {
                let a = e.0[j] as f64;
                lr += a * x[j];
                ph += a * theta[j];
            }
            acc += c * Complex64::from_polar(lr.exp(), ph);
        }
        acc
    }

    /// `z_j * dp/dz_j`.
    pub fn log_derivative(&self, j: usize) -> Option<LaurentPolynomial> {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.0[j] != 0)
            .map(|(e, c)| (e.clone(), c * e.0[j] as f64));
        LaurentPolynomial::new(self.arity, terms).ok()
    }

    /// Multiply by the monomial `z^shift`.
    pub fn shift(&self, shift: &[i32]) -> LaurentPolynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.shifted(shift), *c));
        LaurentPolynomial::new(self.arity, terms).expect("shift preserves nonemptiness")
    }

    /// Keep only the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponent) -> bool) -> Option<LaurentPolynomial> {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), *c));
        LaurentPolynomial::new(self.arity, terms).ok()
    }

    /// Restrict to variable `j`, fixing every other coordinate to `point[i]`.
    /// `point[j]` is ignored.
    pub fn restrict(&self, j: usize, point: &[Complex64]) -> Slice {
        let m = self.min_exp[j];
        let len = (self.max_exp[j] - m + 1) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (e, c) in &self.terms {
            let mut v = *c;
            for (i, (&zi, &a)) in point.iter().zip(&e.0).enumerate() {
                if i != j && a != 0 {
                    v *= zi.powi(a);
                }
            }
            coeffs[(e.0[j] - m) as usize] += v;
        }
        self.finish_slice(m, coeffs)
    }

    /// Restrict to variable `j` with every other coordinate at
    /// `exp(x[i] + i*theta[i])`. Entries at index `j` are ignored.
    pub fn restrict_log_polar(&self, j: usize, x: &[f64], theta: &[f64]) -> Slice {
        let m = self.min_exp[j];
        let len = (self.max_exp[j] - m + 1) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (e, c) in &self.terms {
            let (mut lr, mut ph) = (0.0, 0.0);
            for i in 0..self.arity {
                if i != j {
                    let a = e.0[i] as f64;
                    lr += a * x[i];
                    ph += a * theta[i];
                }
            }
            coeffs[(e.0[j] - m) as usize] += c * Complex64::from_polar(lr.exp(), ph);
        }
        self.finish_slice(m, coeffs)
    }

    fn finish_slice(&self, m: i32, coeffs: Vec<Complex64>) -> Slice {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // Scale reference: the polynomial's own coefficient magnitude keeps
        // the degeneracy test meaningful when every slice coefficient cancels.
        let floor = SLICE_ZERO_REL * self.coefficient_scale().max(f64::MIN_POSITIVE);
        let degenerate = !(max > floor) || !max.is_finite();
        Slice { min_exp: m, coeffs, degenerate }
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Canonical text form, parseable by [`parse_polynomial`]. Terms appear in
    /// descending graded lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let has_vars = e.0.iter().any(|&a| a != 0);
            let (negative, body) = format_coefficient(*c, has_vars);
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !body.is_empty() {
                write!(f, "{body}")?;
                first = false;
            }
            for (j, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "z{}", j + 1)?;
                if a != 1 {
                    write!(f, "^{a}")?;
                }
            }
        }
        Ok(())
    }
}

/// Returns (leading minus, coefficient text). Empty text means an implicit 1.
fn format_coefficient(c: Complex64, has_vars: bool) -> (bool, String) {
    if c.im == 0.0 {
        let neg = c.re < 0.0;
        let a = c.re.abs();
        if a == 1.0 && has_vars {
            (neg, String::new())
        } else {
            (neg, format!("{a}"))
        }
    } else if c.re == 0.0 {
        let neg = c.im < 0.0;
        (neg, format!("{}i", c.im.abs()))
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        (false, format!("({}{}{}i)", c.re, sign, c.im.abs()))
    }
}

/// Parse a polynomial; the arity is the largest variable index used.
pub fn parse_polynomial(text: &str) -> Result<LaurentPolynomial, PolyError> {
    parse_with_arity(text, None)
}

/// Parse a polynomial in exactly `arity` variables.
pub fn parse_polynomial_with_arity(text: &str, arity: usize) -> Result<LaurentPolynomial, PolyError> {
    if arity == 0 || arity > MAX_ARITY {
        return Err(PolyError::ArityTooLarge { index: arity, max: MAX_ARITY });
    }
    parse_with_arity(text, Some(arity))
}

fn parse_with_arity(text: &str, arity: Option<usize>) -> Result<LaurentPolynomial, PolyError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let terms = parser.polynomial()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected character"));
    }
    let used = terms
        .iter()
        .flat_map(|(e, _)| e.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, _)| j + 1))
        .max()
        .unwrap_or(1);
    let n = match arity {
        Some(n) if used > n => return Err(PolyError::ArityTooLarge { index: used, max: n }),
        Some(n) => n,
        None => used,
    };
    LaurentPolynomial::new(
        n,
        terms.into_iter().map(|(e, c)| (Exponent(e[..n].to_vec()), c)),
    )
}

type RawTerm = ([i32; MAX_ARITY], Complex64);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn polynomial(&mut self) -> Result<Vec<RawTerm>, PolyError> {
        let mut out = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                sign = -1.0;
            }
            None => return Err(self.error("empty expression")),
            _ => {}
        }
        loop {
            let (e, c) = self.term()?;
            out.push((e, c * sign));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                _ => return Ok(out),
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm, PolyError> {
        let mut exps = [0i32; MAX_ARITY];
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(b'*') if factors > 0 => {
                    self.pos += 1;
                    if !self.factor(&mut exps, &mut coeff)? {
                        return Err(self.error("expected a factor after '*'"));
                    }
                }
                _ => {
                    if !self.factor(&mut exps, &mut coeff)? {
                        if factors == 0 {
                            return Err(self.error("expected a term"));
                        }
                        return Ok((exps, coeff));
                    }
                }
            }
            factors += 1;
        }
    }

    /// Parse one factor into the running term; false if none is present.
    fn factor(&mut self, exps: &mut [i32; MAX_ARITY], coeff: &mut Complex64) -> Result<bool, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') && !self.ident_follows(self.pos + 1) {
                    self.pos += 1;
                    *coeff *= Complex64::new(0.0, v);
                } else {
                    *coeff *= v;
                }
                Ok(true)
            }
            Some(b'i') => {
                self.pos += 1;
                *coeff *= Complex64::new(0.0, 1.0);
                Ok(true)
            }
            Some(b'(') => {
                let start = self.pos;
                self.pos += 1;
                let inner = self.polynomial()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                let mut sum = Complex64::new(0.0, 0.0);
                for (e, c) in inner {
                    if e.iter().any(|&a| a != 0) {
                        return Err(PolyError::Syntax {
                            pos: start,
                            msg: "parenthesised coefficient must be constant".into(),
                        });
                    }
                    sum += c;
                }
                *coeff *= sum;
                Ok(true)
            }
            Some(b'x') | Some(b'y') | Some(b'z') => {
                let index = self.variable()?;
                let mut e = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self.integer()?;
                }
                exps[index - 1] += e;
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn ident_follows(&self, at: usize) -> bool {
        self.src.get(at).is_some_and(|c| c.is_ascii_alphanumeric())
            && !matches!(self.src.get(at), Some(b'x' | b'y' | b'z'))
    }

    fn variable(&mut self) -> Result<usize, PolyError> {
        let c = self.src[self.pos];
        self.pos += 1;
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        match (c, digits.is_empty()) {
            (b'x', true) => Ok(1),
            (b'y', true) => Ok(2),
            (b'z', true) => Ok(3),
            (b'z', false) => {
                let index: usize = digits
                    .parse()
                    .map_err(|_| PolyError::Syntax { pos: digits_start, msg: "bad variable index".into() })?;
                if index == 0 {
                    return Err(PolyError::Syntax { pos: digits_start, msg: "variables start at z1".into() });
                }
                if index > MAX_ARITY {
                    return Err(PolyError::ArityTooLarge { index, max: MAX_ARITY });
                }
                Ok(index)
            }
            _ => Err(PolyError::Syntax { pos: digits_start - 1, msg: "unknown variable".into() }),
        }
    }

    fn number(&mut self) -> Result<f64, PolyError> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
                p += 1;
            }
            if p < s.len() && s[p].is_ascii_digit() {
                while p < s.len() && s[p].is_ascii_digit() {
                    p += 1;
                }
                self.pos = p;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|_| PolyError::Syntax { pos: start, msg: format!("malformed number '{text}'") })
    }

    fn integer(&mut self) -> Result<i32, PolyError> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let v: i32 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PolyError::Syntax { pos: start, msg: "exponent out of range".into() })?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }
}
