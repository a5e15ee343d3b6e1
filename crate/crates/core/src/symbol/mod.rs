//! Constant-coefficient symbols `P(ξ) = Σ a_α ξ^α` and their admissibility analysis.
//!
//! Terms are kept in a `BTreeMap` keyed by multi-index, so every sum over the
//! terms runs in lexicographic order of `α` and is bit-reproducible.

pub(crate) mod classify;
mod lineality;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::{classify_symbol, AnchorSide, GrowthSample, ProbeConfig, SymbolReport, TriState, Verdict, Witness};
pub use lineality::lineality_space;

/// A multi-index `α`, one exponent per coordinate.
pub type MultiIndex = Vec<u32>;

/// Exact real polynomial in `dim` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

/// Inline JSON form: `{"dim": n, "terms": [[coeff, [α...]], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub dim: usize,
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl PolySymbol {
    /// Builds a symbol, summing repeated multi-indices and dropping zero coefficients.
    pub fn new<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("symbol dimension must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (alpha, coeff) in terms {
            if alpha.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: alpha.len() });
            }
            if !coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient {coeff}")));
            }
            *map.entry(alpha).or_insert(0.0) += coeff;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self { dim, terms: map })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut s = Self::zero(dim);
        if c != 0.0 {
            s.terms.insert(vec![0; dim], c);
        }
        s
    }

    /// `ξ_i` as a polynomial.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut alpha = vec![0; dim];
        alpha[i] = 1;
        Self { dim, terms: BTreeMap::from([(alpha, 1.0)]) }
    }

    /// `|ξ|²`, the symbol of `-Δ`.
    pub fn neg_laplacian(dim: usize) -> Self {
        let terms = (0..dim).map(|i| {
            let mut a = vec![0; dim];
            a[i] = 2;
            (a, 1.0)
        });
        Self::new(dim, terms).expect("well-formed")
    }

    /// `|ξ|⁴`, the symbol of `Δ²`.
    pub fn bilaplacian(dim: usize) -> Self {
        let l = Self::neg_laplacian(dim);
        l.mul(&l)
    }

    pub fn from_json(json: &SymbolJson) -> Result<Self> {
        Self::new(json.dim, json.terms.iter().map(|(c, a)| (a.clone(), *c)))
    }

    pub fn to_json(&self) -> SymbolJson {
        SymbolJson { dim: self.dim, terms: self.terms.iter().map(|(a, c)| (*c, a.clone())).collect() }
    }

    /// Parses the line format `coeff alpha_1 ... alpha_n` with `#` comments.
    pub fn from_text(src: &str) -> Result<Self> {
        text::parse(src)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(a, c)| (a, *c))
    }

    pub fn coeff(&self, alpha: &[u32]) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: len });
        }
        Ok(())
    }

    /// `P(ξ)`, summed in lexicographic order of `α`.
    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        self.check_dim(xi.len())?;
        Ok(self.eval_unchecked(xi))
    }

    pub(crate) fn eval_unchecked(&self, xi: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c * monomial(alpha, xi))
            .sum()
    }

    /// Formal partial derivative `∂^α P`.
    pub fn derivative(&self, alpha: &[u32]) -> Result<Self> {
        self.check_dim(alpha.len())?;
        let mut out = BTreeMap::new();
        for (beta, c) in &self.terms {
            if beta.iter().zip(alpha).any(|(b, a)| b < a) {
                continue;
            }
            let mut factor = *c;
            let mut reduced = Vec::with_capacity(self.dim);
            for (&b, &a) in beta.iter().zip(alpha) {
                factor *= falling_factorial(b, a);
                reduced.push(b - a);
            }
            *out.entry(reduced).or_insert(0.0) += factor;
        }
        out.retain(|_, c| *c != 0.0);
        Ok(Self { dim: self.dim, terms: out })
    }

    /// Homogeneous part of top degree.
    pub fn principal_part(&self) -> Self {
        let m = self.degree();
        let terms = self
            .terms
            .iter()
            .filter(|(a, _)| a.iter().sum::<u32>() == m)
            .map(|(a, c)| (a.clone(), *c))
            .collect();
        Self { dim: self.dim, terms }
    }

    /// `P̃(ξ)² = Σ_α |∂^α P(ξ)|²` over all `|α| ≤ deg P`.
    pub fn p_tilde_sq(&self, xi: &[f64]) -> Result<f64> {
        self.check_dim(xi.len())?;
        let mut total = 0.0;
        for alpha in multi_indices_up_to(self.dim, self.degree()) {
            let d = self.derivative(&alpha)?;
            let v = d.eval_unchecked(xi);
            total += v * v;
        }
        Ok(total)
    }

    pub fn scale(&self, s: f64) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (a.clone(), c * s));
        Self::new(self.dim, terms).expect("same dimension")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let terms = self.terms().chain(other.terms()).map(|(a, c)| (a.clone(), c));
        Self::new(self.dim, terms).expect("same dimension")
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let ab = a.iter().zip(b).map(|(x, y)| x + y).collect();
                terms.push((ab, ca * cb));
            }
        }
        Self::new(self.dim, terms).expect("same dimension")
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dim, 1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `ξ = Q η` where `Q` is `dim × r`; the result lives in `r` variables.
    /// Coefficients below `1e-12 · max|coeff|` are dropped as rounding debris.
    pub fn compose_linear(&self, q: &DMatrix<f64>) -> Result<Self> {
        self.check_dim(q.nrows())?;
        let r = q.ncols();
        if r == 0 {
            return Err(Error::InvalidArgument("substitution onto zero variables".into()));
        }
        let images: Vec<Self> = (0..self.dim)
            .map(|i| {
                let terms = (0..r).map(|j| {
                    let mut a = vec![0; r];
                    a[j] = 1;
                    (a, q[(i, j)])
                });
                Self::new(r, terms).expect("well-formed")
            })
            .collect();
        let mut acc = Self::zero(r);
        for (alpha, c) in &self.terms {
            let mut term = Self::constant(r, *c);
            for (i, &e) in alpha.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        let cutoff = 1e-12 * acc.max_abs_coeff();
        acc.terms.retain(|_, c| c.abs() > cutoff);
        Ok(acc)
    }

    /// Coefficients of the univariate restriction `t ↦ P(t θ)`, index = power of `t`.
    pub fn ray_coefficients(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(theta.len())?;
        let mut coeffs = vec![0.0; self.degree() as usize + 1];
        for (alpha, c) in &self.terms {
            let k = alpha.iter().sum::<u32>() as usize;
            coeffs[k] += c * monomial(alpha, theta);
        }
        Ok(coeffs)
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, e) in alpha.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·ξ{}", i + 1)?,
                    _ => write!(f, "·ξ{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

fn monomial(alpha: &[u32], xi: &[f64]) -> f64 {
    alpha.iter().zip(xi).fold(1.0, |acc, (&e, &x)| acc * x.powi(e as i32))
}

fn falling_factorial(b: u32, a: u32) -> f64 {
    ((b - a + 1)..=b).fold(1.0, |acc, k| acc * k as f64)
}

/// All multi-indices of length `dim` with `|α| ≤ max_degree`, lexicographically sorted.
pub fn multi_indices_up_to(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    fn rec(prefix: &mut Vec<u32>, dim: usize, budget: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, dim, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(dim), dim, max_degree, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: usize, terms: &[(f64, &[u32])]) -> PolySymbol {
        PolySymbol::new(dim, terms.iter().map(|(c, a)| (a.to_vec(), *c))).unwrap()
    }

    #[test]
    fn eval_laplacian_symbol() {
        let lap = PolySymbol::neg_laplacian(2);
        assert_eq!(lap.eval(&[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn eval_at_origin_is_constant_term() {
        let s = p(2, &[(7.5, &[0, 0]), (2.0, &[1, 3]), (-1.0, &[2, 0])]);
        assert_eq!(s.eval(&[0.0, 0.0]).unwrap(), 7.5);
    }

    #[test]
    fn eval_bilaplacian_symbol() {
        let b = PolySymbol::bilaplacian(3);
        assert_eq!(b.eval(&[1.0, 1.0, 1.0]).unwrap(), 9.0);
    }

    #[test]
    fn eval_rejects_wrong_length() {
        let lap = PolySymbol::neg_laplacian(3);
        assert!(matches!(lap.eval(&[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 3, found: 2 })));
    }

    #[test]
    fn derivative_power_rule() {
        let d = PolySymbol::neg_laplacian(2).derivative(&[1, 0]).unwrap();
        assert_eq!(d, p(2, &[(2.0, &[1, 0])]));
    }

    #[test]
    fn derivative_past_degree_vanishes() {
        let d = PolySymbol::neg_laplacian(2).derivative(&[2, 1]).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn mixed_partial() {
        let d = p(2, &[(1.0, &[1, 1])]).derivative(&[1, 1]).unwrap();
        assert_eq!(d, PolySymbol::constant(2, 1.0));
    }

    #[test]
    fn p_tilde_one_dimensional() {
        let s = p(1, &[(1.0, &[2])]);
        assert_eq!(s.p_tilde_sq(&[0.0]).unwrap(), 4.0);
        assert_eq!(s.p_tilde_sq(&[1.0]).unwrap(), 9.0);
    }

    #[test]
    fn p_tilde_laplacian_at_origin() {
        // brute force: every α with |α| ≤ 2, by hand
        let lap = PolySymbol::neg_laplacian(2);
        let mut brute = 0.0;
        for a1 in 0..=2u32 {
            for a2 in 0..=(2 - a1) {
                let v = lap.derivative(&[a1, a2]).unwrap().eval(&[0.0, 0.0]).unwrap();
                brute += v * v;
            }
        }
        assert_eq!(brute, 8.0);
        assert_eq!(lap.p_tilde_sq(&[0.0, 0.0]).unwrap(), 8.0);
    }

    #[test]
    fn multi_indices_are_lexicographic() {
        let idx = multi_indices_up_to(2, 2);
        let mut sorted = idx.clone();
        sorted.sort();
        assert_eq!(idx, sorted);
        assert_eq!(idx.len(), 6);
    }

    #[test]
    fn compose_rotation_preserves_laplacian() {
        let (c, s) = (0.6, 0.8);
        let q = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let rotated = PolySymbol::neg_laplacian(2).compose_linear(&q).unwrap();
        assert!((rotated.coeff(&[2, 0]) - 1.0).abs() < 1e-15);
        assert!((rotated.coeff(&[0, 2]) - 1.0).abs() < 1e-15);
        assert_eq!(rotated.coeff(&[1, 1]), 0.0);
    }
}
