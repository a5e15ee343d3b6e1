//! Fixtures shared by the benchmarks.

use tevl_core::galerkin::{GalerkinConfig, Operator, Potential};
use tevl_core::radial::{Kind, RadialProblem};
use tevl_core::Variant;

pub fn acoustic_ball(n: usize) -> GalerkinConfig {
    GalerkinConfig::new(Operator::NegLaplace, Variant::Acoustic, 1.0, Potential::Constant(1.0), n)
}

pub fn plate() -> RadialProblem {
    RadialProblem::new(Kind::Biharmonic, Variant::Acoustic, 1.0, 0.1).expect("valid problem")
}

pub fn dirac() -> RadialProblem {
    RadialProblem::new(Kind::DiracReduced, Variant::Acoustic, 1.0, 0.5).expect("valid problem")
}
