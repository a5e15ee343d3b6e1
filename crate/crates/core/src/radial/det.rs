//! Boundary-matching matrices and their normalized determinants.

use nalgebra::{DMatrix, Matrix4};

use super::bessel::{j0_family, j0_scaled, m0_family, m0_scaled};
use super::{Kind, RadialProblem};
use crate::error::{Error, Result};
use crate::Variant;

fn require(p: &RadialProblem, kind: Kind) -> Result<()> {
    if p.kind != kind {
        return Err(Error::InvalidArgument(format!("expected a {kind} problem, got {}", p.kind)));
    }
    Ok(())
}

/// Interior wavenumber of the `w` equation for the Helmholtz kind. `Ok((κ, true))`
/// means the interior solution is `m₀(κr)` (Schrödinger with `λ < δ`).
pub(crate) fn interior_wavenumber(p: &RadialProblem, lambda: f64) -> Result<(f64, bool)> {
    match p.variant {
        Variant::Acoustic => Ok(((lambda * (1.0 + p.contrast)).sqrt(), false)),
        Variant::Schrodinger if lambda >= p.contrast => Ok(((lambda - p.contrast).sqrt(), false)),
        Variant::Schrodinger => Ok(((p.contrast - lambda).sqrt(), true)),
    }
}

/// Boundary matrix for `u = c₀ j₀(kr) - c₁ j₀(k_w r)` with the derivative row divided by `k`.
pub(crate) fn helmholtz_matrix(p: &RadialProblem, lambda: f64) -> Result<DMatrix<f64>> {
    require(p, Kind::Helmholtz)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("helmholtz determinant needs lambda > 0, got {lambda}")));
    }
    let eps = p.radius;
    let k = lambda.sqrt();
    let (kw, modified) = interior_wavenumber(p, lambda)?;
    let (w0, w1) = if modified {
        (m0_family(kw * eps, 0), kw * m0_family(kw * eps, 1))
    } else {
        (j0_family(kw * eps, 0), kw * j0_family(kw * eps, 1))
    };
    Ok(DMatrix::from_row_slice(2, 2, &[
        j0_family(k * eps, 0), -w0,
        j0_family(k * eps, 1), -w1 / k,
    ]))
}

/// `k ε² · det[[j₀(kε), -j₀(k_w ε)], [k j₀'(kε), -k_w j₀'(k_w ε)]]`, `k = √λ`.
///
/// For the Schrödinger variant with `0 < λ < δ` the interior column uses `m₀(κε)`,
/// `κ = √(δ - λ)`; the two branches meet continuously at `λ = δ`.
pub fn det_helmholtz(p: &RadialProblem, lambda: f64) -> Result<f64> {
    let m = helmholtz_matrix(p, lambda)?;
    let k = lambda.sqrt();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Ok(det * k * k * p.radius * p.radius)
}

/// Boundary matrix for `f = c₀ j₀(λr)`, `g = c₁ j₀(λ(1+δ)r)` with `f = g` and
/// `∂_r f = ∂_r g / (1+δ)` at `r = ε`, after dividing the second row by `λ`.
pub(crate) fn dirac_matrix(p: &RadialProblem, lambda: f64) -> Result<DMatrix<f64>> {
    require(p, Kind::DiracReduced)?;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain("dirac determinant is undefined at lambda = 0".into()));
    }
    let a = lambda * p.radius;
    let b = lambda * (1.0 + p.contrast) * p.radius;
    Ok(DMatrix::from_row_slice(2, 2, &[
        j0_family(a, 0), -j0_family(b, 0),
        j0_family(a, 1), -j0_family(b, 1),
    ]))
}

/// `ab · det[[j₀(a), -j₀(b)], [j₀'(a), -j₀'(b)]]` with `a = λε`, `b = λ(1+δ)ε`.
/// Odd in `λ`, and `≈ sin(λδε)` for large `|λ|`.
pub fn det_dirac(p: &RadialProblem, lambda: f64) -> Result<f64> {
    let m = dirac_matrix(p, lambda)?;
    let a = lambda * p.radius;
    let b = lambda * (1.0 + p.contrast) * p.radius;
    Ok(a * b * (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]))
}

/// `(1 + δ)^{1/4}`, the ratio `k_δ / k`.
pub fn biharmonic_rho(delta: f64) -> f64 {
    (1.0 + delta).powf(0.25)
}

/// Column scalings applied to the raw biharmonic matrix after each row `l` has been
/// divided by `k^l`: `kε`, `2kε e^{-kε}`, `k_δ ε`, `2k_δ ε e^{-k_δ ε}`.
pub fn biharmonic_column_scales(p: &RadialProblem, k: f64) -> [f64; 4] {
    let a = k * p.radius;
    let b = biharmonic_rho(p.contrast) * a;
    [a, 2.0 * a * (-a).exp(), b, 2.0 * b * (-b).exp()]
}

/// Scaled boundary matrix: entry `(l, ·)` matches `(d/dr)^l` at `r = ε` of the columns
/// `j₀(kr)`, `m₀(kr)`, `-j₀(k_δ r)`, `-m₀(k_δ r)`.
pub(crate) fn biharmonic_matrix(p: &RadialProblem, k: f64) -> Result<Matrix4<f64>> {
    require(p, Kind::Biharmonic)?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!("biharmonic determinant needs k > 0, got {k}")));
    }
    let rho = biharmonic_rho(p.contrast);
    let a = k * p.radius;
    let b = rho * a;
    Ok(Matrix4::from_fn(|l, c| {
        let l32 = l as u32;
        match c {
            0 => j0_scaled(a, l32),
            1 => m0_scaled(a, l32),
            2 => -rho.powi(l as i32) * j0_scaled(b, l32),
            _ => -rho.powi(l as i32) * m0_scaled(b, l32),
        }
    }))
}

/// Normalized 4×4 biharmonic determinant at wavenumber `k` (`λ = k⁴`). Every row and
/// column scaling is positive, so zeros and sign agree with the raw determinant.
pub fn det_biharmonic(p: &RadialProblem, k: f64) -> Result<f64> {
    Ok(biharmonic_matrix(p, k)?.determinant())
}

/// Unscaled determinant of the `(d/dr)^l` matching system. Overflows for large `kε`.
pub fn det_biharmonic_raw(p: &RadialProblem, k: f64) -> Result<f64> {
    require(p, Kind::Biharmonic)?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!("biharmonic determinant needs k > 0, got {k}")));
    }
    let kd = biharmonic_rho(p.contrast) * k;
    let eps = p.radius;
    Ok(Matrix4::from_fn(|l, c| {
        let l32 = l as u32;
        match c {
            0 => k.powi(l as i32) * j0_family(k * eps, l32),
            1 => k.powi(l as i32) * m0_family(k * eps, l32),
            2 => -kd.powi(l as i32) * j0_family(kd * eps, l32),
            _ => -kd.powi(l as i32) * m0_family(kd * eps, l32),
        }
    })
    .determinant())
}
