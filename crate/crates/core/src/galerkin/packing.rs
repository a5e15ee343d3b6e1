use nalgebra::DMatrix;
use serde::Serialize;

use super::forms::assemble_forms;
use super::path::neg_count;
use super::{GalerkinConfig, Operator, Potential};
use crate::error::{Error, Result};
use crate::quadrature::RadialRule;
use crate::radial::{ball_eigenfunction, find_roots, BallEigenfunction, Kind, RadialProblem, RootOptions, RootRecord};
use crate::symbol::classify::sphere_points;
use crate::Variant;

const RADIAL_NODES: usize = 256;
const DIRECTIONS: usize = 64;

/// `B_{λ(ε)}` on `p` zero-extended ball eigenfunctions placed on a cubic lattice.
#[derive(Debug, Clone, Serialize)]
pub struct PackingReport {
    pub p: usize,
    pub ball_radius: f64,
    pub centers: Vec<[f64; 3]>,
    pub root: RootRecord,
    /// `G_ij = B_λ(ũ_i, ũ_j)`.
    #[serde(serialize_with = "serialize_matrix")]
    pub gram: DMatrix<f64>,
    /// `‖P₀ũ‖² / δ`, the same for every ball.
    pub scale: f64,
    /// `max |G_ij| / scale`.
    pub max_relative_entry: f64,
    /// Non-positive eigenvalues of `T(λ(ε))` on the enclosing ball's Galerkin space.
    pub neg_count: usize,
    pub basis_size: usize,
}

fn serialize_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for row in m.row_iter() {
        seq.serialize_element(&row.iter().copied().collect::<Vec<_>>())?;
    }
    seq.end()
}

/// Centers and radius of `p` disjoint balls inside the ball of radius `radius`: the
/// first `p` points of an `n×n×n` lattice, `n = ⌈p^{1/3}⌉`, scaled to fit with margin.
pub(crate) fn lattice_packing(radius: f64, p: usize) -> Result<(Vec<[f64; 3]>, f64)> {
    if p == 0 {
        return Err(Error::Geometry("need at least one ball".into()));
    }
    let mut n = 1usize;
    while n * n * n < p {
        n += 1;
    }
    let half = (n as f64 - 1.0) / 2.0;
    let h = 0.95 * radius / (3f64.sqrt() * half + 0.45);
    let eps = 0.45 * h;
    let mut centers = Vec::with_capacity(p);
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if centers.len() == p {
                    break 'outer;
                }
                centers.push([(i as f64 - half) * h, (j as f64 - half) * h, (k as f64 - half) * h]);
            }
        }
    }
    for (a, c) in centers.iter().enumerate() {
        if norm(c) + eps > radius {
            return Err(Error::Geometry(format!("ball {a} leaves the domain")));
        }
        for d in &centers[..a] {
            if dist(c, d) < 2.0 * eps {
                return Err(Error::Geometry(format!("ball {a} overlaps another")));
            }
        }
    }
    Ok((centers, eps))
}

fn norm(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn dist(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    norm(&[x[0] - y[0], x[1] - y[1], x[2] - y[2]])
}

/// First radial transmission eigenvalue of the ball of radius `eps`.
fn first_ball_root(problem: &RadialProblem) -> Result<RootRecord> {
    let eps = problem.radius;
    let mut top = 20.0 / eps;
    while top <= 4000.0 / eps {
        // helmholtz windows are in λ, biharmonic windows in k
        let window = match problem.kind {
            Kind::Helmholtz => (0.0, top * top),
            _ => (0.0, top),
        };
        let opts = RootOptions { step: Some(top / 2048.0), ..Default::default() };
        if let Some(r) = find_roots(problem, window, &opts)?.into_iter().next() {
            return Ok(r);
        }
        top *= 2.0;
    }
    Err(Error::Numerical(format!("no radial transmission eigenvalue found for ball radius {eps}")))
}

/// Places `p` balls, takes the ball eigenvalue `λ(ε)` and its eigenfunction, and
/// evaluates the Gram matrix of `B_{λ(ε)}` on the zero extensions by quadrature.
pub fn verify_ball_packing(cfg: &GalerkinConfig, p: usize) -> Result<PackingReport> {
    cfg.validate()?;
    let delta = match cfg.potential {
        Potential::Constant(d) => d,
        _ => return Err(Error::InvalidConfig("ball packing needs a constant potential".into())),
    };
    let kind = match (cfg.operator, cfg.variant) {
        (Operator::NegLaplace, _) => Kind::Helmholtz,
        (Operator::Bilaplace, Variant::Acoustic) => Kind::Biharmonic,
        (Operator::Bilaplace, Variant::Schrodinger) => {
            return Err(Error::InvalidConfig("ball packing for the bilaplacian is available in acoustic form only".into()))
        }
    };
    let (centers, eps) = lattice_packing(cfg.domain_radius, p)?;
    let problem = RadialProblem::new(kind, cfg.variant, eps, delta)?;
    let root = first_ball_root(&problem)?;
    let ef = ball_eigenfunction(&problem, &root)?;
    let lambda = root.lambda;

    let rule = RadialRule::new(eps, RADIAL_NODES);
    let dirs = sphere_points(3, DIRECTIONS);
    // (u, P₀u) of the zero extension centred at `c`
    let field = |c: &[f64; 3], x: &[f64; 3]| -> Result<(f64, f64)> {
        let r = dist(c, x);
        if r >= eps {
            return Ok((0.0, 0.0));
        }
        let (v, w) = ef.parts(r, 0);
        let (pv, pw) = ef.p0_parts(r)?;
        Ok((v - w, pv - pw))
    };
    let left = |u: f64, pu: f64| pu - lambda * u;
    let right = |u: f64, pu: f64| match cfg.variant {
        Variant::Schrodinger => pu + delta * u - lambda * u,
        Variant::Acoustic => pu - lambda * (1.0 + delta) * u,
    };

    let mut gram = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let mut total = 0.0;
            for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
                let mut shell = 0.0;
                for d in &dirs {
                    let x = [centers[i][0] + r * d[0], centers[i][1] + r * d[1], centers[i][2] + r * d[2]];
                    let (ui, pui) = field(&centers[i], &x)?;
                    let (uj, puj) = field(&centers[j], &x)?;
                    shell += left(ui, pui) * right(uj, puj);
                }
                total += wr * shell / dirs.len() as f64;
            }
            gram[(i, j)] = total / delta;
        }
    }
    let scale = norm_p0_sq(&ef, &rule)? / delta;
    let max_relative_entry = gram.amax() / scale;

    let forms = assemble_forms(cfg)?;
    Ok(PackingReport {
        p,
        ball_radius: eps,
        centers,
        root,
        gram,
        scale,
        max_relative_entry,
        neg_count: neg_count(&forms, lambda)?,
        basis_size: cfg.basis_size,
    })
}

fn norm_p0_sq(ef: &BallEigenfunction, rule: &RadialRule) -> Result<f64> {
    ef.p0_parts(0.0)?;
    Ok(rule.integrate(|r| {
        let (pv, pw) = ef.p0_parts(r).expect("checked above");
        (pv - pw) * (pv - pw)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ball_fills_most_of_domain() {
        let (c, eps) = lattice_packing(1.0, 1).unwrap();
        assert_eq!(c, vec![[0.0, 0.0, 0.0]]);
        assert!((eps - 0.95).abs() < 1e-15);
    }

    #[test]
    fn lattice_balls_are_disjoint_and_inside() {
        for p in 1..=30 {
            let (c, eps) = lattice_packing(2.0, p).unwrap();
            assert_eq!(c.len(), p);
            assert!(c.iter().all(|x| norm(x) + eps <= 2.0));
        }
    }

    #[test]
    fn single_ball_gram_vanishes() {
        let cfg = GalerkinConfig::new(Operator::NegLaplace, Variant::Acoustic, 1.0, Potential::Constant(1.0), 8);
        let r = verify_ball_packing(&cfg, 1).unwrap();
        assert!(r.max_relative_entry <= 1e-8, "{}", r.max_relative_entry);
    }

    #[test]
    fn off_diagonal_entries_vanish() {
        let cfg = GalerkinConfig::new(Operator::NegLaplace, Variant::Acoustic, 1.0, Potential::Constant(1.0), 8);
        let r = verify_ball_packing(&cfg, 2).unwrap();
        assert_eq!(r.gram[(0, 1)], 0.0);
        assert_eq!(r.gram[(1, 0)], 0.0);
    }

    #[test]
    fn rejects_variable_potential() {
        let mut cfg = GalerkinConfig::new(Operator::NegLaplace, Variant::Acoustic, 1.0, Potential::Constant(1.0), 8);
        cfg.potential = Potential::Polynomial { coeffs: vec![1.0], lower_bound: 1.0 };
        assert!(matches!(verify_ball_packing(&cfg, 1), Err(Error::InvalidConfig(_))));
    }
}
