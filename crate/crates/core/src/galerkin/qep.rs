use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use super::forms::{FormMatrices, WhitenedPencil};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, congruence, sym_eigenvalues};

const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QepEigenvalue {
    pub re: f64,
    pub im: f64,
    /// `σ_min(A - λB + λ²C)`, i.e. `min ‖T(λ)x‖/‖x‖`.
    pub residual: f64,
    /// Real eigenvalue refined on the symmetric pencil.
    pub polished: bool,
}

impl QepEigenvalue {
    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }

    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QepResult {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<QepEigenvalue>,
    /// Eigenvalues dropped for residual above `1e-8 ‖A‖`.
    pub filtered: usize,
    pub norm_a: f64,
}

impl QepResult {
    pub fn real_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.eigenvalues.iter().filter(|e| e.is_real() && e.re >= lo && e.re <= hi).map(|e| e.re).collect()
    }

    /// Largest relative distance from a non-real eigenvalue to the conjugate of its
    /// nearest partner.
    pub fn conjugate_pairing_defect(&self) -> f64 {
        let complex: Vec<Complex<f64>> = self.eigenvalues.iter().filter(|e| !e.is_real()).map(|e| e.value()).collect();
        complex
            .iter()
            .map(|z| {
                let best = complex.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                best / z.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// All eigenvalues of `A - λB + λ²C` through the companion form of the `C`-congruent
/// monic pencil `Ã - λB̃ + λ²I`, rescaled by `γ = √‖Ã‖`.
pub fn qep_solve(f: &FormMatrices) -> Result<QepResult> {
    let n = f.size();
    let l = cholesky(&f.c, "C").map_err(|_| Error::Numerical("companion linearization breakdown: C is not positive definite".into()))?;
    let at = congruence(&l, &f.a);
    let bt = congruence(&l, &f.b);
    let gamma = sym_eigenvalues(&at).iter().fold(0.0f64, |m, v| m.max(v.abs())).sqrt().max(f64::MIN_POSITIVE);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        for j in 0..n {
            m[(n + i, j)] = -at[(i, j)] / (gamma * gamma);
            m[(n + i, n + j)] = bt[(i, j)] / gamma;
        }
    }
    let mu = m.complex_eigenvalues();
    let norm_a = f.norm_a();
    let whitened = f.whitened().ok();

    let mut kept = Vec::with_capacity(2 * n);
    let mut filtered = 0;
    for z in mu.iter() {
        let mut lam = z * gamma;
        let mut polished = false;
        if lam.im == 0.0 {
            if let Some(p) = whitened.as_ref().and_then(|w| polish(w, lam.re)) {
                lam = Complex::new(p, 0.0);
                polished = true;
            }
        }
        let residual = sigma_min(f, lam);
        if residual <= RESIDUAL_TOL * norm_a {
            kept.push(QepEigenvalue { re: lam.re, im: lam.im, residual, polished });
        } else {
            filtered += 1;
        }
    }
    kept.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(QepResult { eigenvalues: kept, filtered, norm_a })
}

fn sigma_min(f: &FormMatrices, lam: Complex<f64>) -> f64 {
    let n = f.size();
    let lam2 = lam * lam;
    let t = DMatrix::from_fn(n, n, |i, j| {
        Complex::new(f.a[(i, j)], 0.0) - lam * f.b[(i, j)] + lam2 * f.c[(i, j)]
    });
    t.svd(false, false).singular_values.min()
}

/// Rayleigh-functional iteration on the whitened pencil: solve `xᵀT̂(μ)x = 0` for the
/// eigenvector `x` of `T̂` closest to singular, take the root nearest `μ`, repeat.
fn polish(w: &WhitenedPencil, start: f64) -> Option<f64> {
    let mut mu = start;
    for _ in 0..40 {
        let (vals, vecs) = w.eigen(mu);
        let idx = (0..vals.len()).min_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()))?;
        let x = vecs.column(idx);
        let b = (x.transpose() * &w.b * x)[0];
        let c = (x.transpose() * &w.c * x)[0];
        // c μ² - b μ + 1 = 0
        let disc = b * b - 4.0 * c;
        if disc < 0.0 || c <= 0.0 {
            return None;
        }
        let q = b + b.signum() * disc.sqrt();
        let r1 = q / (2.0 * c);
        let r2 = 2.0 / q;
        let next = if (r1 - mu).abs() <= (r2 - mu).abs() { r1 } else { r2 };
        if !next.is_finite() || (next - start).abs() > 1e-3 * start.abs().max(1.0) {
            return None;
        }
        if (next - mu).abs() <= 4.0 * f64::EPSILON * next.abs() {
            return Some(next);
        }
        mu = next;
    }
    Some(mu)
}
