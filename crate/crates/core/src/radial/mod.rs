//! Transmission eigenvalues of ball domains with constant contrast, from the zeros of
//! spherical-Bessel boundary determinants.

mod bessel;
mod det;
mod eigenfunction;
mod roots;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Method, Variant};

pub use bessel::{j0_family, j0_scaled, m0_family, m0_scaled};
pub use det::{biharmonic_column_scales, biharmonic_rho, det_biharmonic, det_biharmonic_raw, det_dirac, det_helmholtz};
pub use eigenfunction::{ball_eigenfunction, BallEigenfunction};
pub use roots::{asymptotic_prediction, default_step, find_roots, AsymptoticPrediction, RootOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `P₀ = -Δ` in three dimensions.
    Helmholtz,
    /// `P₀ = Δ²` in three dimensions, acoustic form.
    Biharmonic,
    /// Scalar radial reduction of the Dirac system, acoustic form.
    DiracReduced,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Helmholtz => "helmholtz",
            Kind::Biharmonic => "biharmonic",
            Kind::DiracReduced => "dirac_reduced",
        })
    }
}

/// Ball of radius `radius` with constant potential `contrast`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub kind: Kind,
    pub variant: Variant,
    pub radius: f64,
    pub contrast: f64,
}

impl RadialProblem {
    pub fn new(kind: Kind, variant: Variant, radius: f64, contrast: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if !(contrast > 0.0 && contrast.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "contrast must satisfy V ≥ δ > 0, got delta = {contrast}"
            )));
        }
        if kind != Kind::Helmholtz && variant != Variant::Acoustic {
            return Err(Error::InvalidArgument(format!("{kind} problems are posed in acoustic form only")));
        }
        Ok(Self { kind, variant, radius, contrast })
    }

    /// The variable the determinant is scanned in: `k` for helmholtz and biharmonic,
    /// `λ` for the Dirac reduction.
    pub fn argument_to_lambda(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Helmholtz => x * x,
            Kind::Biharmonic => (x * x) * (x * x),
            Kind::DiracReduced => x,
        }
    }

    pub fn lambda_to_argument(&self, lambda: f64) -> f64 {
        match self.kind {
            Kind::Helmholtz => lambda.sqrt(),
            Kind::Biharmonic => lambda.sqrt().sqrt(),
            Kind::DiracReduced => lambda,
        }
    }

    /// Normalized determinant as a function of the scan argument.
    pub fn det_at_argument(&self, x: f64) -> Result<f64> {
        match self.kind {
            Kind::Helmholtz => det_helmholtz(self, x * x),
            Kind::Biharmonic => det_biharmonic(self, x),
            Kind::DiracReduced => det_dirac(self, x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    /// Transmission eigenvalue (for biharmonic, `λ = k⁴`).
    pub lambda: f64,
    /// Root in the scan argument (`k` or `λ`, see [`RadialProblem::argument_to_lambda`]).
    pub argument: f64,
    /// Bracket in `λ`.
    pub bracket: (f64, f64),
    pub residual: f64,
    pub method: Method,
    pub multiplicity_estimate: usize,
}
