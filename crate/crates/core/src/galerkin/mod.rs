//! Radial spectral Galerkin discretization of the transmission form `B_λ` on a ball,
//! as the symmetric pencil `T(λ) = A - λB + λ²C`.

mod basis;
mod contrast;
mod forms;
mod packing;
mod path;
mod qep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::PolySymbol;
use crate::Variant;

pub use basis::{build_basis, RadialBasis};
pub use contrast::{sufficient_contrast, ContrastThreshold};
pub use forms::{assemble_forms, direct_quadratic_form, FormMatrices, FormSummary, WhitenedPencil};
pub use packing::{verify_ball_packing, PackingReport};
pub use path::{coercive_anchor, min_eig_path, min_eig_series, neg_count, CrossingRecord, ANCHOR_MARGIN};
pub use qep::{qep_solve, QepEigenvalue, QepResult};

pub const MAX_BASIS_SIZE: usize = 256;
pub const MAX_QUADRATURE_NODES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    /// `P₀ = -Δ` on `R³`.
    NegLaplace,
    /// `P₀ = Δ²` on `R³`.
    Bilaplace,
}

impl Operator {
    /// Order of the operator, which is also the vanishing order of the basis at `r = ε`.
    pub fn order(self) -> u32 {
        match self {
            Operator::NegLaplace => 2,
            Operator::Bilaplace => 4,
        }
    }

    pub fn symbol(self) -> PolySymbol {
        match self {
            Operator::NegLaplace => PolySymbol::neg_laplacian(3),
            Operator::Bilaplace => PolySymbol::bilaplacian(3),
        }
    }
}

/// Radial potential `V(r)`, either constant or a polynomial in `r²` with a declared
/// positive lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    Constant(f64),
    Polynomial {
        /// `V(r) = Σ coeffs[i] r^{2i}`.
        coeffs: Vec<f64>,
        lower_bound: f64,
    },
}

impl Potential {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Potential::Constant(d) => *d,
            Potential::Polynomial { coeffs, .. } => {
                let s = r * r;
                coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
            }
        }
    }

    /// The contrast `δ` with `V ≥ δ`.
    pub fn delta(&self) -> f64 {
        match self {
            Potential::Constant(d) => *d,
            Potential::Polynomial { lower_bound, .. } => *lower_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalerkinConfig {
    pub operator: Operator,
    pub variant: Variant,
    pub domain_radius: f64,
    pub potential: Potential,
    pub basis_size: usize,
    /// Defaults to `4N + 16`.
    #[serde(default)]
    pub quadrature_nodes: Option<usize>,
}

impl GalerkinConfig {
    pub fn new(operator: Operator, variant: Variant, domain_radius: f64, potential: Potential, basis_size: usize) -> Self {
        Self { operator, variant, domain_radius, potential, basis_size, quadrature_nodes: None }
    }

    pub fn quadrature_nodes(&self) -> usize {
        self.quadrature_nodes.unwrap_or(4 * self.basis_size + 16)
    }

    pub fn validate(&self) -> Result<()> {
        let eps = self.domain_radius;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("domain_radius must be positive, got {eps}")));
        }
        let n = self.basis_size;
        if n == 0 || n > MAX_BASIS_SIZE {
            return Err(Error::InvalidConfig(format!("basis_size must be in 1..={MAX_BASIS_SIZE}, got {n}")));
        }
        let q = self.quadrature_nodes();
        if q < 4 * n + 16 || q > MAX_QUADRATURE_NODES {
            return Err(Error::InvalidConfig(format!(
                "quadrature_nodes must be in {}..={MAX_QUADRATURE_NODES}, got {q}",
                4 * n + 16
            )));
        }
        let delta = self.potential.delta();
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("potential must satisfy V ≥ δ > 0, got delta = {delta}")));
        }
        if let Potential::Polynomial { coeffs, .. } = &self.potential {
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfig("potential polynomial needs finite coefficients".into()));
            }
            let min = (0..1024)
                .map(|i| self.potential.eval(eps * i as f64 / 1023.0))
                .fold(f64::INFINITY, f64::min);
            if min < delta {
                return Err(Error::InvalidConfig(format!(
                    "potential violates V ≥ δ > 0 on [0, eps]: min V = {min} < delta = {delta}"
                )));
            }
        }
        Ok(())
    }
}
