//! Interior transmission eigenvalues for constant-coefficient operators with a
//! positive compactly supported potential.
//!
//! * [`symbol`]: polynomial symbols, lineality spaces, admissibility verdicts.
//! * [`radial`]: spherical-Bessel determinants on balls and their roots.
//! * [`galerkin`]: the quadratic pencil `T(λ) = A - λB + λ²C` on a radial spectral basis.

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod galerkin;
pub mod radial;
pub mod report;
pub mod symbol;

mod linalg;
mod quadrature;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use galerkin::{FormMatrices, GalerkinConfig};
pub use radial::{RadialProblem, RootRecord};
pub use symbol::{PolySymbol, SymbolReport};

/// Which form of the transmission problem is posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `(P₀ - λ)v = 0`, `(P₀ + V - λ)w = 0`.
    Schrodinger,
    /// `(P₀ - λ)v = 0`, `(P₀ - λ(1 + V))w = 0`.
    Acoustic,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Schrodinger => "schrodinger",
            Variant::Acoustic => "acoustic",
        })
    }
}

/// How a root was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bisection,
    GalerkinCrossing,
    Qep,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bisection => "bisection",
            Method::GalerkinCrossing => "galerkin_crossing",
            Method::Qep => "qep",
        })
    }
}
