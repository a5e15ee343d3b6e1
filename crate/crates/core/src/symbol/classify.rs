//! Admissibility verdicts for a symbol: ellipticity, semi-boundedness of `±P`,
//! hidden variables and growth of `P̃`.
//!
//! Verdicts are three-valued. `Yes` always carries a structural reason, `No`
//! carries a replayable witness, and anything else is `Indeterminate`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{lineality_space, PolySymbol};
use crate::error::{Error, Result};
use crate::Variant;

const ELLIPTIC_MARGIN: f64 = 1e-6;
const ZERO_TOL: f64 = 1e-14;
const LEADING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    /// Radii of the probe spheres, increasing.
    pub radii: Vec<f64>,
    pub samples_per_sphere: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { radii: vec![1.0, 10.0, 100.0, 1000.0], samples_per_sphere: 256 }
    }
}

/// Points `ξ_k = r_k θ` at which the tested function (`P` or `-P`) strictly decreases.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub direction: Vec<f64>,
    pub radii: Vec<f64>,
    /// Values of the tested function at `radii[k] * direction`.
    pub values: Vec<f64>,
}

impl Witness {
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.radii.iter().map(|r| self.direction.iter().map(|d| r * d).collect()).collect()
    }

    /// Re-evaluates `sign · P` at the stored points and checks the recorded values
    /// are reproduced and strictly decreasing.
    pub fn replays(&self, p: &PolySymbol, sign: f64) -> bool {
        let fresh: Vec<f64> = self.points().iter().map(|x| sign * p.eval_unchecked(x)).collect();
        fresh == self.values && fresh.windows(2).all(|w| w[1] < w[0])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub state: TriState,
    pub reason: String,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes(reason: impl Into<String>) -> Self {
        Self { state: TriState::Yes, reason: reason.into(), witness: None }
    }
    fn no(reason: impl Into<String>, witness: Option<Witness>) -> Self {
        Self { state: TriState::No, reason: reason.into(), witness }
    }
    fn indeterminate(reason: impl Into<String>) -> Self {
        Self { state: TriState::Indeterminate, reason: reason.into(), witness: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthSample {
    pub radius: f64,
    pub min_p_tilde_sq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolReport {
    pub hidden_space_basis: Vec<Vec<f64>>,
    pub has_hidden_variables: bool,
    pub elliptic: Verdict,
    /// Whether `+P` is bounded from below.
    pub bounded_below: Verdict,
    /// Whether `-P` is bounded from below.
    pub bounded_above: Verdict,
    pub p_tilde_growth: Verdict,
    pub growth_evidence: Vec<GrowthSample>,
}

/// Which half-line the coercive anchor of the Schrödinger form lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorSide {
    /// `P` bounded below: the form is coercive for `λ → -∞`.
    Negative,
    /// `-P` bounded below: the form is coercive for `λ → +∞`.
    Positive,
}

impl SymbolReport {
    pub fn anchor_side(&self) -> Option<AnchorSide> {
        if self.bounded_below.state == TriState::Yes {
            Some(AnchorSide::Negative)
        } else if self.bounded_above.state == TriState::Yes {
            Some(AnchorSide::Positive)
        } else {
            None
        }
    }

    /// Gate for the pencil solvers. Both variants need `P̃ → ∞`; the Schrödinger
    /// variant additionally needs `P` or `-P` bounded below.
    pub fn admissible_for(&self, variant: Variant) -> Result<()> {
        if self.p_tilde_growth.state != TriState::Yes {
            return Err(Error::Inadmissible(format!(
                "inadmissible for {variant} variant: growth of P-tilde is {:?} ({})",
                self.p_tilde_growth.state, self.p_tilde_growth.reason
            )));
        }
        if variant == Variant::Schrodinger && self.anchor_side().is_none() {
            return Err(Error::Inadmissible(format!(
                "inadmissible for schrodinger variant: neither +P nor -P is known to be bounded below \
                 (below: {:?}, above: {:?})",
                self.bounded_below.state, self.bounded_above.state
            )));
        }
        Ok(())
    }
}

/// Classifies `p`. Sphere samples are deterministic, so the report is too.
pub fn classify_symbol(p: &PolySymbol, probe: &ProbeConfig) -> Result<SymbolReport> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("cannot classify the zero symbol".into()));
    }
    if probe.radii.is_empty() || probe.radii.windows(2).any(|w| w[1] <= w[0]) || probe.radii[0] <= 0.0 {
        return Err(Error::InvalidArgument("probe radii must be positive and increasing".into()));
    }
    let n = p.dim();
    let hidden = lineality_space(p);
    let directions = sphere_points(n, 2048 * n);

    let elliptic = ellipticity(p, &directions);
    let bounded_below = semi_bound(p, 1.0, &hidden, &directions, probe);
    let bounded_above = semi_bound(p, -1.0, &hidden, &directions, probe);

    let probe_dirs = sphere_points(n, probe.samples_per_sphere.max(1));
    let growth_evidence = probe
        .radii
        .iter()
        .map(|&r| {
            let min = probe_dirs
                .iter()
                .map(|d| {
                    let x: Vec<f64> = d.iter().map(|c| r * c).collect();
                    p.p_tilde_sq(&x).expect("dimension matches")
                })
                .fold(f64::INFINITY, f64::min);
            GrowthSample { radius: r, min_p_tilde_sq: min }
        })
        .collect();
    let p_tilde_growth = if hidden.is_empty() {
        Verdict::yes("lineality space is {0} (Hörmander: P-tilde tends to infinity)")
    } else {
        // P̃ is invariant along Λ, so it stays at P̃(0) on the ray through a hidden direction.
        let v = normalized(&hidden[0]);
        let radii = probe.radii.clone();
        let values = radii
            .iter()
            .map(|r| p.p_tilde_sq(&v.iter().map(|c| r * c).collect::<Vec<_>>()).expect("dim"))
            .collect();
        Verdict::no(
            "hidden variables: P-tilde is constant along the lineality space",
            Some(Witness { direction: v, radii, values }),
        )
    };

    Ok(SymbolReport {
        has_hidden_variables: !hidden.is_empty(),
        hidden_space_basis: hidden,
        elliptic,
        bounded_below,
        bounded_above,
        p_tilde_growth,
        growth_evidence,
    })
}

fn ellipticity(p: &PolySymbol, directions: &[Vec<f64>]) -> Verdict {
    let pm = p.principal_part();
    if p.degree() == 0 {
        return Verdict::yes("order zero");
    }
    let values: Vec<f64> = directions.iter().map(|d| pm.eval_unchecked(d)).collect();
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(i) = values.iter().position(|v| v.abs() <= ZERO_TOL * max) {
        return Verdict::no(format!("principal symbol vanishes at {:?}", directions[i]), None);
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo < 0.0 && hi > 0.0 {
        return Verdict::no("principal symbol changes sign on the unit sphere", None);
    }
    let min_abs = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if min_abs >= ELLIPTIC_MARGIN * max {
        Verdict::yes(format!("principal symbol bounded away from zero on sphere sample (min/max = {:.3e})", min_abs / max))
    } else {
        Verdict::indeterminate(format!("sphere-sample margin {:.3e} below {ELLIPTIC_MARGIN:e}", min_abs / max))
    }
}

/// Decides whether `sign · P` is bounded below.
fn semi_bound(
    p: &PolySymbol,
    sign: f64,
    hidden: &[Vec<f64>],
    directions: &[Vec<f64>],
    probe: &ProbeConfig,
) -> Verdict {
    let q = p.scale(sign);
    if q.degree() == 0 {
        return Verdict::yes("constant symbol");
    }
    // P depends only on the component orthogonal to Λ(P).
    let complement = orthogonal_complement(p.dim(), hidden);
    if complement.ncols() == 0 {
        return Verdict::yes("symbol is constant");
    }
    if let Ok(reduced) = q.compose_linear(&complement) {
        let m = reduced.degree();
        if m % 2 == 0 && m > 0 {
            let pm = reduced.principal_part();
            let dirs = sphere_points(reduced.dim(), 2048 * reduced.dim());
            let vals: Vec<f64> = dirs.iter().map(|d| pm.eval_unchecked(d)).collect();
            let max = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            if min > 0.0 && min >= ELLIPTIC_MARGIN * max {
                return Verdict::yes("even principal part positive definite off the lineality space");
            }
        }
    }
    if let Some(w) = find_witness(&q, directions, probe) {
        return Verdict::no("leading ray coefficient negative: tends to -infinity along witness", Some(w));
    }
    Verdict::indeterminate("no structural certificate and no witness ray found")
}

fn find_witness(q: &PolySymbol, directions: &[Vec<f64>], probe: &ProbeConfig) -> Option<Witness> {
    // coordinate axes (stored last) first, for readable witnesses
    let axes = 2 * q.dim();
    let split = directions.len() - axes;
    for theta in directions[split..].iter().chain(&directions[..split]) {
        let c = q.ray_coefficients(theta).ok()?;
        let scale: f64 = c.iter().map(|x| x.abs()).sum();
        let Some(k) = (1..c.len()).rev().find(|&k| c[k].abs() > LEADING_TOL * scale) else {
            continue;
        };
        if c[k] >= 0.0 {
            continue;
        }
        let mut radii = probe.radii.clone();
        for _ in 0..8 {
            let values: Vec<f64> = radii
                .iter()
                .map(|r| q.eval_unchecked(&theta.iter().map(|t| r * t).collect::<Vec<_>>()))
                .collect();
            if values.windows(2).all(|w| w[1] < w[0]) {
                return Some(Witness { direction: theta.clone(), radii, values });
            }
            radii.iter_mut().for_each(|r| *r *= 10.0);
        }
    }
    None
}

/// Orthonormal basis (as columns) of the complement of `span(vectors)` in `R^n`.
fn orthogonal_complement(n: usize, vectors: &[Vec<f64>]) -> DMatrix<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |basis: &mut Vec<Vec<f64>>, v: &[f64]| -> bool {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 {
            basis.push(w.iter().map(|x| x / norm).collect());
            true
        } else {
            false
        }
    };
    for v in vectors {
        push(&mut basis, v);
    }
    let k = basis.len();
    let mut comp = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        if push(&mut basis, &e) {
            comp.push(basis.last().unwrap().clone());
        }
    }
    debug_assert_eq!(k + comp.len(), n);
    DMatrix::from_fn(n, comp.len(), |i, j| comp[j][i])
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Deterministic quasi-uniform points on the unit sphere of `R^n`, followed by `±e_i`.
pub(crate) fn sphere_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(count + 2 * n);
    match n {
        1 => {}
        2 => {
            for i in 0..count {
                let t = std::f64::consts::TAU * (i as f64 + 0.5) / count as f64;
                pts.push(vec![t.cos(), t.sin()]);
            }
        }
        3 => {
            // Fibonacci lattice
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            for i in 0..count {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * i as f64;
                pts.push(vec![rho * phi.cos(), rho * phi.sin(), z]);
            }
        }
        _ => {
            // R_n low-discrepancy sequence in the cube, projected radially
            let mut g = 2.0f64;
            for _ in 0..64 {
                g = (1.0 + g).powf(1.0 / (n as f64 + 1.0));
            }
            let alpha: Vec<f64> = (1..=n).map(|j| (1.0 / g.powi(j as i32)).fract()).collect();
            let mut i = 0usize;
            while pts.len() < count {
                i += 1;
                let x: Vec<f64> = alpha.iter().map(|a| 2.0 * (0.5 + a * i as f64).fract() - 1.0).collect();
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-3 {
                    pts.push(x.iter().map(|v| v / norm).collect());
                }
            }
        }
    }
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            pts.push(e);
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(dim: usize, terms: &[(f64, &[u32])]) -> PolySymbol {
        PolySymbol::new(dim, terms.iter().map(|(c, a)| (a.to_vec(), *c))).unwrap()
    }

    #[test]
    fn laplacian_is_fully_admissible() {
        let r = classify_symbol(&PolySymbol::neg_laplacian(3), &ProbeConfig::default()).unwrap();
        assert_eq!(r.elliptic.state, TriState::Yes);
        assert_eq!(r.bounded_below.state, TriState::Yes);
        assert_eq!(r.bounded_above.state, TriState::No);
        assert!(!r.has_hidden_variables);
        assert_eq!(r.p_tilde_growth.state, TriState::Yes);
        assert!(r.admissible_for(Variant::Schrodinger).is_ok());
        assert_eq!(r.anchor_side(), Some(AnchorSide::Negative));
    }

    #[test]
    fn transport_plus_laplacian_is_bounded_neither_way() {
        // ξ1 + ξ2² + ξ3²
        let p = sym(3, &[(1.0, &[1, 0, 0]), (1.0, &[0, 2, 0]), (1.0, &[0, 0, 2])]);
        let r = classify_symbol(&p, &ProbeConfig::default()).unwrap();
        assert_eq!(r.bounded_below.state, TriState::No);
        assert_eq!(r.bounded_above.state, TriState::No);
        let wb = r.bounded_below.witness.as_ref().unwrap();
        let wa = r.bounded_above.witness.as_ref().unwrap();
        assert!(wb.replays(&p, 1.0));
        assert!(wa.replays(&p, -1.0));
        // the witnesses run along ξ1 → -∞ and ξ1 → +∞
        assert_eq!(wb.direction, vec![-1.0, 0.0, 0.0]);
        assert_eq!(wa.direction, vec![1.0, 0.0, 0.0]);
        let err = r.admissible_for(Variant::Schrodinger).unwrap_err();
        assert!(err.to_string().contains("inadmissible for schrodinger variant"));
    }

    #[test]
    fn wave_operator_is_acoustic_only() {
        let p = sym(3, &[(1.0, &[2, 0, 0]), (-1.0, &[0, 2, 0]), (-1.0, &[0, 0, 2])]);
        let r = classify_symbol(&p, &ProbeConfig::default()).unwrap();
        assert_eq!(r.elliptic.state, TriState::No);
        assert_eq!(r.bounded_below.state, TriState::No);
        assert_eq!(r.bounded_above.state, TriState::No);
        assert!(!r.has_hidden_variables);
        assert_eq!(r.p_tilde_growth.state, TriState::Yes);
        assert!(r.admissible_for(Variant::Acoustic).is_ok());
        assert!(r.admissible_for(Variant::Schrodinger).is_err());
    }

    #[test]
    fn hidden_variable_symbol_is_bounded_below_without_growth() {
        let p = sym(3, &[(1.0, &[2, 0, 0]), (1.0, &[0, 2, 0])]);
        let r = classify_symbol(&p, &ProbeConfig::default()).unwrap();
        assert!(r.has_hidden_variables);
        assert_eq!(r.elliptic.state, TriState::No);
        assert_eq!(r.bounded_below.state, TriState::Yes);
        assert_eq!(r.p_tilde_growth.state, TriState::No);
        assert!(r.admissible_for(Variant::Acoustic).is_err());
    }

    #[test]
    fn negative_bilaplacian_anchors_on_positive_side() {
        let p = PolySymbol::bilaplacian(3).scale(-1.0);
        let r = classify_symbol(&p, &ProbeConfig::default()).unwrap();
        assert_eq!(r.bounded_above.state, TriState::Yes);
        assert_eq!(r.anchor_side(), Some(AnchorSide::Positive));
    }

    #[test]
    fn sphere_points_are_unit() {
        for n in 1..=5 {
            for x in sphere_points(n, 100) {
                let norm: f64 = x.iter().map(|v| v * v).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }
}
