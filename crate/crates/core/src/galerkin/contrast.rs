use nalgebra::DMatrix;
use serde::Serialize;

use super::basis::build_basis;
use super::GalerkinConfig;
use crate::error::{Error, Result};
use crate::linalg::sym_eigen_sorted;
use crate::quadrature::RadialRule;

/// `δ_p = 2√μ_p` with `μ_p` the `p`-th smallest value of `‖P₀u‖²/‖u‖²` on the basis span.
#[derive(Debug, Clone, Serialize)]
pub struct ContrastThreshold {
    pub p: usize,
    pub delta_p: f64,
    /// All `μ_j`, ascending.
    pub mu: Vec<f64>,
    /// Columns span the witness subspace, as coefficients in the orthonormal basis.
    #[serde(skip)]
    pub witness: DMatrix<f64>,
}

impl ContrastThreshold {
    /// `2‖P₀u‖/‖u‖` for `u = witness · y`.
    pub fn ratio(&self, y: &[f64], stiffness: &DMatrix<f64>) -> f64 {
        let u = &self.witness * nalgebra::DVector::from_column_slice(y);
        2.0 * ((u.transpose() * stiffness * &u)[0] / u.norm_squared()).sqrt()
    }
}

/// `K_ij = ⟨P₀ψ_i, P₀ψ_j⟩` on the orthonormal basis of `cfg`.
pub(crate) fn stiffness(cfg: &GalerkinConfig) -> Result<DMatrix<f64>> {
    let basis = build_basis(cfg)?;
    let rule = RadialRule::new(cfg.domain_radius, cfg.quadrature_nodes());
    let (_, p0) = basis.tabulate(&rule.nodes);
    let mut weighted = p0.clone();
    for (i, mut row) in weighted.row_iter_mut().enumerate() {
        row *= rule.weights[i];
    }
    Ok(crate::linalg::symmetrize(&(p0.transpose() * weighted)))
}

pub fn sufficient_contrast(cfg: &GalerkinConfig, p: usize) -> Result<ContrastThreshold> {
    if p == 0 || p > cfg.basis_size {
        return Err(Error::InvalidArgument(format!("p must be in 1..={}, got {p}", cfg.basis_size)));
    }
    let k = stiffness(cfg)?;
    let (mu, vectors) = sym_eigen_sorted(&k);
    Ok(ContrastThreshold {
        p,
        delta_p: 2.0 * mu[p - 1].sqrt(),
        witness: vectors.columns(0, p).into_owned(),
        mu,
    })
}
