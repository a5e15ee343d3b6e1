use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::basis::{build_basis, RadialBasis};
use super::GalerkinConfig;
use crate::error::{Error, Result};
use crate::linalg::{asymmetry, cholesky, congruence, sym_eigen_sorted, sym_eigenvalues, symmetrize};
use crate::quadrature::RadialRule;
use crate::symbol::PolySymbol;
use crate::Variant;

/// Symmetric `A`, `B`, `C` of `T(λ) = A - λB + λ²C`.
#[derive(Debug, Clone)]
pub struct FormMatrices {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub variant: Variant,
    /// Symbol of `P₀`; decides the side of the Schrödinger anchor.
    pub symbol: PolySymbol,
    pub basis: Option<RadialBasis>,
    pub quadrature_nodes: usize,
    /// Relative asymmetry `‖M - Mᵀ‖/‖M‖` of `A`, `B`, `C` before symmetrization.
    pub asymmetry: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct FormSummary {
    pub basis_size: usize,
    pub quadrature_nodes: usize,
    pub asymmetry: [f64; 3],
    pub min_eig_a: f64,
    pub min_eig_c: f64,
}

/// The congruent pencil `L⁻¹ T(λ) L⁻ᵀ = I - λB̂ + λ²Ĉ` with `A = LLᵀ`.
///
/// By Sylvester's law of inertia it has the same number of negative, zero and positive
/// eigenvalues as `T(λ)` for every `λ`, with `Â = I` fixing the scale.
#[derive(Debug, Clone)]
pub struct WhitenedPencil {
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl WhitenedPencil {
    pub fn at(&self, lambda: f64) -> DMatrix<f64> {
        let n = self.b.nrows();
        let mut t = &self.c * (lambda * lambda) - &self.b * lambda;
        for i in 0..n {
            t[(i, i)] += 1.0;
        }
        t
    }

    pub fn eigenvalues(&self, lambda: f64) -> Vec<f64> {
        sym_eigenvalues(&self.at(lambda))
    }

    pub fn min_eig(&self, lambda: f64) -> f64 {
        self.eigenvalues(lambda)[0]
    }

    pub fn eigen(&self, lambda: f64) -> (Vec<f64>, DMatrix<f64>) {
        sym_eigen_sorted(&self.at(lambda))
    }
}

impl FormMatrices {
    /// Wraps hand-built matrices, symmetrizing them.
    pub fn from_matrices(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        variant: Variant,
        symbol: PolySymbol,
    ) -> Result<Self> {
        let n = a.nrows();
        if [a.ncols(), b.nrows(), b.ncols(), c.nrows(), c.ncols()].iter().any(|&d| d != n) {
            return Err(Error::InvalidArgument("pencil matrices must be square and of equal size".into()));
        }
        let asym = [asymmetry(&a), asymmetry(&b), asymmetry(&c)];
        Ok(Self {
            a: symmetrize(&a),
            b: symmetrize(&b),
            c: symmetrize(&c),
            variant,
            symbol,
            basis: None,
            quadrature_nodes: 0,
            asymmetry: asym,
        })
    }

    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    pub fn t(&self, lambda: f64) -> DMatrix<f64> {
        &self.a - &self.b * lambda + &self.c * (lambda * lambda)
    }

    /// Spectral norm of `A`.
    pub fn norm_a(&self) -> f64 {
        sym_eigenvalues(&self.a).iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { a: &self.a * s, b: &self.b * s, c: &self.c * s, ..self.clone() }
    }

    pub fn whitened(&self) -> Result<WhitenedPencil> {
        let l = cholesky(&self.a, "A")?;
        Ok(WhitenedPencil { b: congruence(&l, &self.b), c: congruence(&l, &self.c) })
    }

    pub fn summary(&self) -> FormSummary {
        FormSummary {
            basis_size: self.size(),
            quadrature_nodes: self.quadrature_nodes,
            asymmetry: self.asymmetry,
            min_eig_a: sym_eigenvalues(&self.a)[0],
            min_eig_c: sym_eigenvalues(&self.c)[0],
        }
    }
}

/// Assembles the pencil of `B_λ` on the orthonormal radial basis by Gauss–Legendre
/// quadrature with measure `4πr² dr`.
pub fn assemble_forms(cfg: &GalerkinConfig) -> Result<FormMatrices> {
    let basis = build_basis(cfg)?;
    let q = cfg.quadrature_nodes();
    let rule = RadialRule::new(cfg.domain_radius, q);
    let (phi, p0) = basis.tabulate(&rule.nodes);
    let v: Vec<f64> = rule.nodes.iter().map(|&r| cfg.potential.eval(r)).collect();
    // rows of `m` scaled by the quadrature weight times `f(node)`
    let weighted = |m: &DMatrix<f64>, f: &dyn Fn(usize) -> f64| {
        let mut out = m.clone();
        for (i, mut row) in out.row_iter_mut().enumerate() {
            row *= rule.weights[i] * f(i);
        }
        out
    };
    let inv_v = |i: usize| 1.0 / v[i];

    let k_v = p0.transpose() * weighted(&p0, &inv_v);
    let cross_v = p0.transpose() * weighted(&phi, &inv_v);
    let (a, b, c) = match cfg.variant {
        Variant::Schrodinger => {
            let a = &k_v + p0.transpose() * weighted(&phi, &|_| 1.0);
            let b = &cross_v + cross_v.transpose() + phi.transpose() * weighted(&phi, &|_| 1.0);
            let c = phi.transpose() * weighted(&phi, &inv_v);
            (a, b, c)
        }
        Variant::Acoustic => {
            let b = &cross_v + cross_v.transpose() + phi.transpose() * weighted(&p0, &|_| 1.0);
            let c = phi.transpose() * weighted(&phi, &|i| (1.0 + v[i]) / v[i]);
            (k_v, b, c)
        }
    };
    if [&a, &b, &c].iter().any(|m| m.iter().any(|x| !x.is_finite())) {
        return Err(Error::Numerical("non-finite entry in assembled forms".into()));
    }
    let mut forms = FormMatrices::from_matrices(a, b, c, cfg.variant, cfg.operator.symbol())?;
    forms.basis = Some(basis);
    forms.quadrature_nodes = q;
    Ok(forms)
}

/// `B_λ(u, u)` for `u = Σ c_j ψ_j`, integrated from the unexpanded product form on an
/// independent Gauss–Legendre rule.
pub fn direct_quadratic_form(cfg: &GalerkinConfig, basis: &RadialBasis, coeffs: &[f64], lambda: f64) -> f64 {
    let rule = RadialRule::new(cfg.domain_radius, 2 * cfg.quadrature_nodes() + 7);
    let (phi, p0) = basis.tabulate(&rule.nodes);
    let c = DVector::from_column_slice(coeffs);
    let u = phi * &c;
    let pu = p0 * &c;
    rule.nodes
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let v = cfg.potential.eval(r);
            let left = pu[i] - lambda * u[i];
            let right = match cfg.variant {
                Variant::Schrodinger => pu[i] + v * u[i] - lambda * u[i],
                Variant::Acoustic => pu[i] - lambda * (1.0 + v) * u[i],
            };
            rule.weights[i] * left * right / v
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::{Operator, Potential};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(op: Operator, variant: Variant, delta: f64, n: usize) -> GalerkinConfig {
        GalerkinConfig::new(op, variant, 1.0, Potential::Constant(delta), n)
    }

    #[test]
    fn acoustic_a_is_scaled_stiffness() {
        let c = cfg(Operator::NegLaplace, Variant::Acoustic, 2.5, 12);
        let f = assemble_forms(&c).unwrap();
        let basis = f.basis.as_ref().unwrap();
        let rule = RadialRule::new(1.0, c.quadrature_nodes());
        let (_, p0) = basis.tabulate(&rule.nodes);
        let k = p0.transpose() * DMatrix::from_diagonal(&DVector::from_column_slice(&rule.weights)) * &p0;
        assert!((&f.a * 2.5 - &k).amax() <= 1e-12 * k.amax());
    }

    #[test]
    fn raw_matrices_are_symmetric_and_definite() {
        for op in [Operator::NegLaplace, Operator::Bilaplace] {
            for variant in [Variant::Schrodinger, Variant::Acoustic] {
                let f = assemble_forms(&cfg(op, variant, 1.0, 16)).unwrap();
                assert!(f.asymmetry.iter().all(|&a| a <= 1e-12), "{op:?} {variant:?} {:?}", f.asymmetry);
                let s = f.summary();
                assert!(s.min_eig_a > 0.0 && s.min_eig_c > 0.0);
            }
        }
    }

    #[test]
    fn acoustic_form_at_zero_is_coercive() {
        let f = assemble_forms(&cfg(Operator::NegLaplace, Variant::Acoustic, 1.0, 10)).unwrap();
        assert!(sym_eigenvalues(&f.t(0.0))[0] > 0.0);
    }

    #[test]
    fn matrix_form_matches_direct_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for op in [Operator::NegLaplace, Operator::Bilaplace] {
            for variant in [Variant::Schrodinger, Variant::Acoustic] {
                let mut c = cfg(op, variant, 1.0, 10);
                c.potential = Potential::Polynomial { coeffs: vec![1.5, 0.5], lower_bound: 1.0 };
                let f = assemble_forms(&c).unwrap();
                for _ in 0..20 {
                    let u: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let lambda = rng.random_range(-50.0..200.0);
                    let uv = DVector::from_column_slice(&u);
                    let ta = (uv.transpose() * &f.a * &uv)[0];
                    let tb = (uv.transpose() * &f.b * &uv)[0];
                    let tc = (uv.transpose() * &f.c * &uv)[0];
                    let matrix = ta - lambda * tb + lambda * lambda * tc;
                    let direct = direct_quadratic_form(&c, f.basis.as_ref().unwrap(), &u, lambda);
                    let scale = ta.abs() + (lambda * tb).abs() + (lambda * lambda * tc).abs();
                    assert!((matrix - direct).abs() <= 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn whitening_preserves_inertia() {
        let f = assemble_forms(&cfg(Operator::NegLaplace, Variant::Acoustic, 1.0, 12)).unwrap();
        let w = f.whitened().unwrap();
        for lambda in [10.0, 59.0, 60.0, 150.0, 400.0] {
            let raw = sym_eigenvalues(&f.t(lambda)).iter().filter(|&&e| e < 0.0).count();
            let white = w.eigenvalues(lambda).iter().filter(|&&e| e < 0.0).count();
            assert_eq!(raw, white, "lambda = {lambda}");
        }
    }
}
