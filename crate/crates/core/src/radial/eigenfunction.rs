use nalgebra::DMatrix;
use serde::Serialize;

use super::bessel::{j0_family, m0_family, m0_scaled};
use super::det::{biharmonic_matrix, biharmonic_rho, dirac_matrix, helmholtz_matrix, interior_wavenumber};
use super::{Kind, RadialProblem, RootRecord};
use crate::error::{Error, Result};

const SPURIOUS_RATIO: f64 = 1e-6;

/// Radial transmission eigenfunction `u = v - w` on the ball `r ≤ ε`.
///
/// `coeffs` is the unit null vector of the boundary matrix used by the determinant:
/// `(c₀, c₁)` for helmholtz and dirac, and for biharmonic the coefficients of the
/// column-scaled system, so `a₁ = c₁ kε`, `a₂ = c₂ · 2kε e^{-kε}` and likewise with `k_δ`.
#[derive(Debug, Clone, Serialize)]
pub struct BallEigenfunction {
    pub problem: RadialProblem,
    pub lambda: f64,
    pub coeffs: Vec<f64>,
    /// `‖M c‖_∞` for the boundary matrix `M` at `lambda`.
    pub boundary_residual: f64,
}

pub fn ball_eigenfunction(p: &RadialProblem, root: &RootRecord) -> Result<BallEigenfunction> {
    let x = root.argument;
    let m: DMatrix<f64> = match p.kind {
        Kind::Helmholtz => helmholtz_matrix(p, x * x)?,
        Kind::DiracReduced => dirac_matrix(p, x)?,
        Kind::Biharmonic => {
            let m4 = biharmonic_matrix(p, x)?;
            DMatrix::from_fn(4, 4, |i, j| m4[(i, j)])
        }
    };
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD produced no right vectors".into()))?;
    let sv = &svd.singular_values;
    let (imin, smin) = sv.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let smax = sv.max();
    let ratio = smin / smax;
    if !(ratio <= SPURIOUS_RATIO) {
        return Err(Error::SpuriousRoot { lambda: root.lambda, ratio });
    }
    let mut c: Vec<f64> = v_t.row(imin).iter().copied().collect();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let lead = c.iter().copied().find(|v| v.abs() > 1e-12).unwrap_or(1.0);
    let s = lead.signum() / norm;
    c.iter_mut().for_each(|v| *v *= s);
    let mc = &m * nalgebra::DVector::from_column_slice(&c);
    let ef = BallEigenfunction {
        problem: *p,
        lambda: root.lambda,
        boundary_residual: mc.amax(),
        coeffs: c,
    };
    let scale = (0..64).map(|i| ef.value(p.radius * i as f64 / 63.0).abs()).fold(0.0, f64::max);
    if !(scale > 1e-12) {
        return Err(Error::Numerical(format!("eigenfunction at lambda = {} vanishes on the sample grid", root.lambda)));
    }
    Ok(ef)
}

impl BallEigenfunction {
    fn argument(&self) -> f64 {
        self.problem.lambda_to_argument(self.lambda)
    }

    /// `u(r) = v(r) - w(r)`.
    pub fn value(&self, r: f64) -> f64 {
        let (v, w) = self.parts(r, 0);
        v - w
    }

    /// `(d/dr)^order` of `(v, w)` at `r`, `order ≤ 3`.
    pub fn parts(&self, r: f64, order: u32) -> (f64, f64) {
        let p = &self.problem;
        let c = &self.coeffs;
        let l = order as i32;
        match p.kind {
            Kind::Helmholtz => {
                let k = self.argument();
                let (kw, modified) = interior_wavenumber(p, self.lambda).expect("lambda in domain");
                let w = if modified { m0_family(kw * r, order) } else { j0_family(kw * r, order) };
                (c[0] * k.powi(l) * j0_family(k * r, order), c[1] * kw.powi(l) * w)
            }
            Kind::DiracReduced => {
                let a = self.lambda;
                let b = self.lambda * (1.0 + p.contrast);
                (c[0] * a.powi(l) * j0_family(a * r, order), c[1] * b.powi(l) * j0_family(b * r, order))
            }
            Kind::Biharmonic => {
                let k = self.argument();
                let kd = biharmonic_rho(p.contrast) * k;
                let eps = p.radius;
                let osc = |q: f64, ci: f64| ci * q * eps * q.powi(l) * j0_family(q * r, order);
                let grow = |q: f64, ci: f64| {
                    let x = q * r;
                    if x < 600.0 {
                        ci * 2.0 * q * eps * (-q * eps).exp() * q.powi(l) * m0_family(x, order)
                    } else {
                        ci * q.powi(l) * (eps / r) * m0_scaled(x, order) * (-q * (eps - r)).exp()
                    }
                };
                (osc(k, c[0]) + grow(k, c[1]), osc(kd, c[2]) + grow(kd, c[3]))
            }
        }
    }

    /// `(P₀v, P₀w)` at `r`, where `P₀ = -Δ` (helmholtz) or `Δ²` (biharmonic).
    pub fn p0_parts(&self, r: f64) -> Result<(f64, f64)> {
        let p = &self.problem;
        let (v, w) = self.parts(r, 0);
        match p.kind {
            Kind::Helmholtz => {
                let (kw, modified) = interior_wavenumber(p, self.lambda)?;
                let kw2 = if modified { -kw * kw } else { kw * kw };
                Ok((self.lambda * v, kw2 * w))
            }
            Kind::Biharmonic => Ok((self.lambda * v, self.lambda * (1.0 + p.contrast) * w)),
            Kind::DiracReduced => Err(Error::InvalidArgument(
                "the dirac reduction has no scalar P0 action".into(),
            )),
        }
    }
}
