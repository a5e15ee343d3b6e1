//! CSV rows for root lists, crossings and `min-eig` plot series.

use crate::galerkin::{CrossingRecord, GalerkinConfig, Operator, QepEigenvalue};
use crate::radial::{RadialProblem, RootRecord};
use crate::Method;

pub const RADIAL_HEADER: &str = "kind,variant,eps,delta,lambda,bracket_lo,bracket_hi,residual,method";
pub const GALERKIN_HEADER: &str =
    "kind,variant,eps,delta,lambda,bracket_lo,bracket_hi,residual,method,N,quadrature_nodes,min_eig_before,min_eig_after,multiplicity";
pub const PLOT_HEADER: &str = "lambda,min_eig";

/// 12 significant digits in scientific notation.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn radial_rows(p: &RadialProblem, roots: &[RootRecord]) -> Vec<String> {
    roots
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                p.kind,
                p.variant,
                fmt12(p.radius),
                fmt12(p.contrast),
                fmt12(r.lambda),
                fmt12(r.bracket.0),
                fmt12(r.bracket.1),
                fmt12(r.residual),
                r.method
            )
        })
        .collect()
}

fn operator_name(op: Operator) -> &'static str {
    match op {
        Operator::NegLaplace => "neg_laplace",
        Operator::Bilaplace => "bilaplace",
    }
}

fn galerkin_prefix(cfg: &GalerkinConfig) -> String {
    format!(
        "{},{},{},{}",
        operator_name(cfg.operator),
        cfg.variant,
        fmt12(cfg.domain_radius),
        fmt12(cfg.potential.delta())
    )
}

pub fn crossing_rows(cfg: &GalerkinConfig, crossings: &[CrossingRecord]) -> Vec<String> {
    crossings
        .iter()
        .map(|c| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                galerkin_prefix(cfg),
                fmt12(c.lambda_star),
                fmt12(c.bracket.0),
                fmt12(c.bracket.1),
                fmt12(c.residual),
                Method::GalerkinCrossing,
                cfg.basis_size,
                cfg.quadrature_nodes(),
                fmt12(c.min_eig_before),
                fmt12(c.min_eig_after),
                c.multiplicity_estimate
            )
        })
        .collect()
}

/// Real eigenvalues only; the bracket and `min_eig` columns are left empty.
pub fn qep_rows(cfg: &GalerkinConfig, eigenvalues: &[QepEigenvalue]) -> Vec<String> {
    eigenvalues
        .iter()
        .filter(|e| e.is_real())
        .map(|e| {
            format!(
                "{},{},,,{},{},{},{},,,1",
                galerkin_prefix(cfg),
                fmt12(e.re),
                fmt12(e.residual),
                Method::Qep,
                cfg.basis_size,
                cfg.quadrature_nodes(),
            )
        })
        .collect()
}

pub fn plot_rows(series: &[(f64, f64)]) -> Vec<String> {
    series.iter().map(|(l, e)| format!("{},{}", fmt12(*l), fmt12(*e))).collect()
}
