//! Exponential polynomials `Σ c·tᵏ·e^{λt}` with complex `c`, `λ`.
//!
//! This is the function class produced by inverting rational Laplace-domain
//! expressions with residues: a pole of order `k+1` at `λ` contributes
//! `tᵏ·e^{λt}`. It is closed under addition, multiplication by `e^{μt}` and
//! integration, which is all the perturbation recursion needs.
//!
//! Values are kept in canonical form: at most one term per `(k, λ)`, rates
//! closer than [`RATE_MERGE_TOL`] (relative) are treated as the same rate, and
//! coefficients below [`PRUNE_REL`] of the largest one sharing their rate are
//! dropped.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::{Float, Zero};

/// Two rates are the same when `|λ₁ − λ₂| < RATE_MERGE_TOL · max(1, |λ₁|)`.
pub const RATE_MERGE_TOL: f64 = 1e-12;

/// Terms with `|c| < PRUNE_REL · max|c|` over the terms of the same rate are removed.
pub const PRUNE_REL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub power: u32,
    pub rate: Complex64,
}

impl Term {
    pub fn new(coeff: Complex64, power: u32, rate: Complex64) -> Self {
        Term { coeff, power, rate }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeff * Float::powi(t, self.power as i32) * (self.rate * t).exp()
    }
}

fn same_rate(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < RATE_MERGE_TOL * a.norm().max(1.0)
}

fn is_zero_rate(a: Complex64) -> bool {
    a.norm() < RATE_MERGE_TOL
}

fn term_order(a: &Term, b: &Term) -> Ordering {
    a.rate.re.total_cmp(&b.rate.re).then(a.rate.im.total_cmp(&b.rate.im)).then(a.power.cmp(&b.power))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms([Term::new(c, 0, Complex64::zero())])
    }

    /// `c·e^{λt}`.
    pub fn exp(c: Complex64, rate: Complex64) -> Self {
        Self::from_terms([Term::new(c, 0, rate)])
    }

    /// `c·tᵏ·e^{λt}`.
    pub fn monomial(c: Complex64, power: u32, rate: Complex64) -> Self {
        Self::from_terms([Term::new(c, power, rate)])
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut p = ExpPoly { terms: terms.into_iter().collect() };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        // snap near-degenerate rates onto the first representative seen
        let mut reps: Vec<Complex64> = Vec::new();
        for term in self.terms.iter_mut() {
            if is_zero_rate(term.rate) {
                term.rate = Complex64::zero();
            }
            match reps.iter().find(|r| same_rate(**r, term.rate)) {
                Some(r) => term.rate = *r,
                None => reps.push(term.rate),
            }
        }
        self.terms.sort_by(term_order);
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.power == term.power && last.rate == term.rate => last.coeff += term.coeff,
                _ => merged.push(term),
            }
        }
        // sorted by rate, so each rate's powers form one contiguous run
        let mut kept = Vec::with_capacity(merged.len());
        for group in merged.chunk_by(|a, b| a.rate == b.rate) {
            let scale = group.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
            kept.extend(group.iter().filter(|t| {
                let c = t.coeff.norm();
                c != 0.0 && c >= PRUNE_REL * scale
            }));
        }
        self.terms = kept;
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `t` present (0 for the zero function).
    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn scale(&self, c: Complex64) -> ExpPoly {
        Self::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff * c, ..*t }))
    }

    /// `a(t)·e^{μt}`: every rate shifts by `μ`.
    pub fn mul_exp(&self, mu: Complex64) -> ExpPoly {
        Self::from_terms(self.terms.iter().map(|t| Term { rate: t.rate + mu, ..*t }))
    }

    /// Antiderivative `F` with `F(t0) = 0`.
    ///
    /// For `λ ≠ 0`, `∫ tᵏe^{λt} dt = e^{λt} Σ_{m=0}^{k} (−1)^m k!/(k−m)! · t^{k−m}/λ^{m+1}`;
    /// for `λ = 0` it is `t^{k+1}/(k+1)`. The integration constant `−F(t0)`
    /// becomes a single `(k = 0, λ = 0)` term.
    pub fn integrate_from(&self, t0: f64) -> ExpPoly {
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len() * 2 + 1);
        let mut offset = Complex64::zero();
        for term in &self.terms {
            let k = term.power;
            if is_zero_rate(term.rate) {
                let c = term.coeff / (k + 1) as f64;
                out.push(Term::new(c, k + 1, Complex64::zero()));
                offset += c * Float::powi(t0, (k + 1) as i32);
                continue;
            }
            let inv = term.rate.inv();
            // running factor (−1)^m k!/(k−m)! / λ^{m+1}
            let mut factor = term.coeff * inv;
            let e0 = (term.rate * t0).exp();
            for m in 0..=k {
                let p = k - m;
                out.push(Term::new(factor, p, term.rate));
                offset += factor * Float::powi(t0, p as i32) * e0;
                factor = -factor * p as f64 * inv;
            }
        }
        out.push(Term::new(-offset, 0, Complex64::zero()));
        Self::from_terms(out)
    }

    pub fn derivative(&self) -> ExpPoly {
        Self::from_terms(self.terms.iter().flat_map(|t| {
            let lower = (t.power > 0).then(|| Term::new(t.coeff * t.power as f64, t.power - 1, t.rate));
            core::iter::once(Term::new(t.coeff * t.rate, t.power, t.rate)).chain(lower)
        }))
    }

    /// Same term structure (powers, rates up to the merge tolerance) and
    /// coefficients within `rel_tol` of the largest coefficient.
    pub fn same_form(&self, other: &ExpPoly, rel_tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let scale = self.terms.iter().chain(other.terms.iter()).map(|t| t.coeff.norm()).fold(0.0, f64::max);
        self.terms.iter().zip(other.terms.iter()).all(|(a, b)| {
            a.power == b.power && same_rate(a.rate, b.rate) && (a.coeff - b.coeff).norm() <= rel_tol * scale
        })
    }

    /// Debug rows `(c_re, c_im, k, λ_re, λ_im)`.
    pub fn rows(&self) -> Vec<TermRow> {
        self.terms
            .iter()
            .map(|t| TermRow {
                c_re: t.coeff.re,
                c_im: t.coeff.im,
                power: t.power,
                rate_re: t.rate.re,
                rate_im: t.rate.im,
            })
            .collect()
    }

    pub fn from_rows(rows: &[TermRow]) -> ExpPoly {
        Self::from_terms(
            rows.iter()
                .map(|r| Term::new(Complex64::new(r.c_re, r.c_im), r.power, Complex64::new(r.rate_re, r.rate_im))),
        )
    }

    pub fn to_rows_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        write!(s, "{self}").expect("writing to a String");
        s
    }
}

/// Serialized term. Text form: `c_re,c_im,k,rate_re,rate_im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermRow {
    pub c_re: f64,
    pub c_im: f64,
    pub power: u32,
    pub rate_re: f64,
    pub rate_im: f64,
}

impl fmt::Display for TermRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?},{:?},{},{:?},{:?}", self.c_re, self.c_im, self.power, self.rate_re, self.rate_im)
    }
}

/// One row per term, newline terminated.
impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed term row at line {line}")]
pub struct ParseRowsError {
    pub line: usize,
}

impl FromStr for ExpPoly {
    type Err = ParseRowsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for (i, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = ParseRowsError { line: i + 1 };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(err);
            }
            let num = |k: usize| fields[k].parse::<f64>().map_err(|_| err.clone());
            rows.push(TermRow {
                c_re: num(0)?,
                c_im: num(1)?,
                power: fields[2].parse().map_err(|_| err.clone())?,
                rate_re: num(3)?,
                rate_im: num(4)?,
            });
        }
        Ok(ExpPoly::from_rows(&rows))
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;

    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::add(self, rhs)
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;

    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::add(self, &-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;

    fn neg(self) -> ExpPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &ExpPoly {
    type Output = ExpPoly;

    fn mul(self, rhs: Complex64) -> ExpPoly {
        self.scale(rhs)
    }
}
