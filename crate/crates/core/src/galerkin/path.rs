use rayon::prelude::*;
use serde::Serialize;

use super::forms::{FormMatrices, WhitenedPencil};
use crate::error::{Error, Result};
use crate::symbol::{classify_symbol, AnchorSide, ProbeConfig};
use crate::Variant;

/// `λ₀` is accepted when `T(λ₀) ≥ η A`, i.e. the whitened pencil has all eigenvalues `≥ η`.
pub const ANCHOR_MARGIN: f64 = 1e-3;
const MAX_DOUBLINGS: u32 = 60;
const NONPOSITIVE_TOL: f64 = 1e-12;
const MULTIPLICITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct CrossingRecord {
    pub lambda_star: f64,
    pub bracket: (f64, f64),
    /// Value of the crossing eigenvalue of the whitened pencil at the bracket ends.
    pub min_eig_before: f64,
    pub min_eig_after: f64,
    /// Position of the crossing eigenvalue in the ascending spectrum (0 = smallest).
    pub eigen_index: usize,
    /// `|e_k(λ*)|` of the whitened pencil.
    pub residual: f64,
    pub multiplicity_estimate: usize,
    pub anchor: f64,
}

/// A real `λ₀` at which `B_λ₀` is coercive on the discrete space.
///
/// Acoustic forms are coercive at `λ₀ = 0`. For the Schrödinger form the scan runs
/// over `∓1, ∓2, ∓4, …`, on the negative side when `P₀` is bounded below and on the
/// positive side when `-P₀` is.
pub fn coercive_anchor(f: &FormMatrices, variant: Variant) -> Result<f64> {
    if variant != f.variant {
        return Err(Error::InvalidArgument(format!("forms were assembled for the {} variant", f.variant)));
    }
    if variant == Variant::Acoustic {
        return Ok(0.0);
    }
    let report = classify_symbol(&f.symbol, &ProbeConfig::default())?;
    let sign = match report.anchor_side() {
        Some(AnchorSide::Negative) => -1.0,
        Some(AnchorSide::Positive) => 1.0,
        None => {
            return Err(Error::Inadmissible(format!(
                "inadmissible for schrodinger variant: no side for a coercive anchor (bounded below: {:?}, bounded above: {:?})",
                report.bounded_below.state, report.bounded_above.state
            )))
        }
    };
    let w = f.whitened()?;
    for t in 0..MAX_DOUBLINGS {
        let lambda = sign * 2f64.powi(t as i32);
        if w.min_eig(lambda) >= ANCHOR_MARGIN {
            return Ok(lambda);
        }
    }
    Err(Error::Inadmissible(format!(
        "inadmissible for schrodinger variant: no coercive anchor within {MAX_DOUBLINGS} doublings on the {} side",
        if sign < 0.0 { "negative" } else { "positive" }
    )))
}

/// Number of non-positive eigenvalues of `T(λ)` (threshold `1e-12` relative to `‖A‖`).
pub fn neg_count(f: &FormMatrices, lambda: f64) -> Result<usize> {
    let w = f.whitened()?;
    Ok(w.eigenvalues(lambda).iter().filter(|&&e| e <= NONPOSITIVE_TOL).count())
}

fn grid(lambda0: f64, lambda_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(lambda_max > lambda0) {
        return Err(Error::Window(format!("empty window ({lambda0}, {lambda_max}]")));
    }
    if !(step > 0.0) || step > (lambda_max - lambda0) / 4.0 {
        return Err(Error::Window(format!(
            "grid step {step} must be positive and at most a quarter of the window {}",
            lambda_max - lambda0
        )));
    }
    let n = ((lambda_max - lambda0) / step).ceil() as usize;
    let h = (lambda_max - lambda0) / n as f64;
    let mut g: Vec<f64> = (0..=n).map(|i| lambda0 + h * i as f64).collect();
    g[n] = lambda_max;
    Ok(g)
}

/// `(λ, smallest eigenvalue of the whitened pencil)` on the grid, for plotting.
pub fn min_eig_series(f: &FormMatrices, lambda0: f64, lambda_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    let w = f.whitened()?;
    let g = grid(lambda0, lambda_max, step)?;
    Ok(g.par_iter().map(|&l| (l, w.min_eig(l))).collect())
}

/// Tracks the ascending eigenvalues of `T(λ)` on `[λ₀, λ_max]` and bisects every sign
/// change of each of them. Crossings closer than `step/4` are merged.
pub fn min_eig_path(f: &FormMatrices, lambda0: f64, lambda_max: f64, step: f64) -> Result<Vec<CrossingRecord>> {
    let w = f.whitened()?;
    let g = grid(lambda0, lambda_max, step)?;
    let h = g[1] - g[0];
    if !(w.min_eig(lambda0) > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda0 = {lambda0} is not a coercive anchor")));
    }
    let spectra: Vec<Vec<f64>> = g.par_iter().map(|&l| w.eigenvalues(l)).collect();
    let n = f.size();
    let mut brackets = Vec::new();
    for i in 0..g.len() - 1 {
        for k in 0..n {
            let (e0, e1) = (spectra[i][k], spectra[i + 1][k]);
            if (e0 > 0.0) != (e1 > 0.0) {
                brackets.push((k, g[i], g[i + 1], e0, e1));
            }
        }
    }
    let mut found: Vec<CrossingRecord> = brackets
        .into_par_iter()
        .map(|(k, lo, hi, e0, e1)| {
            let star = bisect_index(&w, k, lo, hi, e0);
            let spectrum = w.eigenvalues(star);
            let mult = spectrum.iter().filter(|e| e.abs() <= MULTIPLICITY_TOL).count().max(1);
            CrossingRecord {
                lambda_star: star,
                bracket: (lo, hi),
                min_eig_before: e0,
                min_eig_after: e1,
                eigen_index: k,
                residual: spectrum[k].abs(),
                multiplicity_estimate: mult,
                anchor: lambda0,
            }
        })
        .collect();
    found.sort_by(|a, b| a.lambda_star.total_cmp(&b.lambda_star).then(a.eigen_index.cmp(&b.eigen_index)));
    let mut merged: Vec<CrossingRecord> = Vec::with_capacity(found.len());
    for c in found {
        match merged.last() {
            Some(prev) if c.lambda_star - prev.lambda_star < h / 4.0 => {}
            _ => merged.push(c),
        }
    }
    Ok(merged)
}

/// Bisection on the `k`-th ascending eigenvalue, which is continuous in `λ`.
fn bisect_index(w: &WhitenedPencil, k: usize, mut lo: f64, mut hi: f64, e_lo: f64) -> f64 {
    let positive_lo = e_lo > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * mid.abs() {
            return mid;
        }
        let e = w.eigenvalues(mid)[k];
        if e == 0.0 {
            return mid;
        }
        if (e > 0.0) == positive_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::{assemble_forms, GalerkinConfig, Operator, Potential};
    use crate::symbol::PolySymbol;
    use nalgebra::DMatrix;

    fn forms(variant: Variant, delta: f64, n: usize) -> FormMatrices {
        assemble_forms(&GalerkinConfig::new(Operator::NegLaplace, variant, 1.0, Potential::Constant(delta), n)).unwrap()
    }

    #[test]
    fn acoustic_anchor_is_zero() {
        let f = forms(Variant::Acoustic, 1.0, 12);
        assert_eq!(coercive_anchor(&f, Variant::Acoustic).unwrap(), 0.0);
        assert_eq!(neg_count(&f, 0.0).unwrap(), 0);
    }

    #[test]
    fn schrodinger_anchor_is_negative_and_scale_free() {
        let f = forms(Variant::Schrodinger, 1.0, 12);
        let l0 = coercive_anchor(&f, Variant::Schrodinger).unwrap();
        assert!(l0 < 0.0);
        assert!(sym_min(&f.t(l0)) > 0.0);
        assert_eq!(coercive_anchor(&f.scaled(2.0), Variant::Schrodinger).unwrap(), l0);
        assert_eq!(neg_count(&f, l0).unwrap(), 0);
    }

    fn sym_min(m: &DMatrix<f64>) -> f64 {
        crate::linalg::sym_eigenvalues(m)[0]
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let f = forms(Variant::Acoustic, 1.0, 6);
        assert!(coercive_anchor(&f, Variant::Schrodinger).is_err());
    }

    #[test]
    fn count_tracks_crossings() {
        let f = forms(Variant::Acoustic, 1.0, 16);
        let crossings = min_eig_path(&f, 0.0, 400.0, 0.5).unwrap();
        assert!(!crossings.is_empty() && crossings.len() <= 2 * 16);
        let mut net = 0isize;
        for (j, c) in crossings.iter().enumerate() {
            assert!(c.min_eig_before * c.min_eig_after < 0.0);
            assert!(c.bracket.0 < c.lambda_star && c.lambda_star < c.bracket.1);
            let dir = if c.min_eig_before > 0.0 { 1 } else { -1 };
            net += dir * c.multiplicity_estimate as isize;
            let after = neg_count(&f, c.lambda_star * (1.0 + 1e-9)).unwrap() as isize;
            assert_eq!(after, net, "after crossing {j} at {}", c.lambda_star);
            if crossings[..=j].iter().all(|c| c.min_eig_before > 0.0) {
                assert!(after > j as isize);
            }
        }
    }

    #[test]
    fn step_limit() {
        let f = forms(Variant::Acoustic, 1.0, 6);
        assert!(matches!(min_eig_path(&f, 0.0, 10.0, 3.0), Err(Error::Window(_))));
    }

    #[test]
    fn large_contrast_crossings_are_finite() {
        let f = forms(Variant::Acoustic, 1e6, 8);
        let crossings = min_eig_path(&f, 0.0, 500.0, 1.0).unwrap();
        assert!(crossings.len() <= 8);
    }

    #[test]
    fn scalar_pencil_anchor_side_follows_symbol() {
        // -|ξ|² is bounded above, so the Schrödinger scan runs over positive λ
        let a = DMatrix::from_element(1, 1, 1.0);
        let b = DMatrix::from_element(1, 1, 0.0);
        let c = DMatrix::from_element(1, 1, 1.0);
        let f = FormMatrices::from_matrices(a, b, c, Variant::Schrodinger, PolySymbol::neg_laplacian(3).scale(-1.0)).unwrap();
        assert_eq!(coercive_anchor(&f, Variant::Schrodinger).unwrap(), 1.0);
    }
}
