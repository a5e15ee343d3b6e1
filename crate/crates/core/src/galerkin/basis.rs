use nalgebra::{DMatrix, DVector};

use super::{GalerkinConfig, Operator};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, sym_eigenvalues};
use crate::quadrature::RadialRule;

const MAX_GRAM_CONDITION: f64 = 1e12;
/// Jacobi parameter attached to `(1 + x)`; with `s = r²/ε²` the mass measure is `∝ s^{1/2} ds`.
const BETA: f64 = 0.5;

/// Radial functions `ψ_j = Σ_i φ_i R_ij`, orthonormal for `∫ u v 4πr² dr` on `[0, ε]`,
/// built from `φ_i(r) = (1 - s)^m P_{i-1}^{(2m, 1/2)}(2s - 1)`, `s = r²/ε²`.
///
/// Each `φ_i` equals `(ε² - r²)^m` times a polynomial of degree `i - 1` in `r²`, so the
/// span is that of `(ε² - r²)^m r^{2j}`; the Jacobi form is nearly mass-orthogonal.
#[derive(Debug, Clone)]
pub struct RadialBasis {
    pub operator: Operator,
    pub radius: f64,
    pub size: usize,
    /// `R`, mapping the Jacobi-form functions to the orthonormal ones.
    pub transform: DMatrix<f64>,
    /// Condition number of the diagonally scaled mass Gram matrix of the `φ_i`.
    pub gram_condition: f64,
}

pub fn build_basis(cfg: &GalerkinConfig) -> Result<RadialBasis> {
    cfg.validate()?;
    let n = cfg.basis_size;
    let rule = RadialRule::new(cfg.domain_radius, cfg.quadrature_nodes());
    let mut proto = RadialBasis {
        operator: cfg.operator,
        radius: cfg.domain_radius,
        size: n,
        transform: DMatrix::identity(n, n),
        gram_condition: 1.0,
    };
    let (phi, _) = proto.tabulate_raw(&rule.nodes);
    let mut weighted = phi.clone();
    for (i, mut row) in weighted.row_iter_mut().enumerate() {
        row *= rule.weights[i];
    }
    let gram = phi.transpose() * weighted;
    let d = DVector::from_iterator(n, (0..n).map(|i| 1.0 / gram[(i, i)].sqrt()));
    let scaled = DMatrix::from_fn(n, n, |i, j| gram[(i, j)] * d[i] * d[j]);
    let cond = condition(&scaled);
    if !(cond <= MAX_GRAM_CONDITION) {
        let max_stable = (1..n)
            .rev()
            .find(|&k| condition(&scaled.view((0, 0), (k, k)).into_owned()) <= MAX_GRAM_CONDITION)
            .unwrap_or(0);
        return Err(Error::Unstable { requested: n, condition: cond, max_stable });
    }
    let l = cholesky(&scaled, "mass Gram matrix")?;
    let lt_inv = l
        .transpose()
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Numerical("singular mass Gram factor".into()))?;
    proto.transform = DMatrix::from_diagonal(&d) * lt_inv;
    proto.gram_condition = cond;
    Ok(proto)
}

fn condition(m: &DMatrix<f64>) -> f64 {
    let e = sym_eigenvalues(m);
    let lo = e[0];
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        e[e.len() - 1] / lo
    }
}

impl RadialBasis {
    fn exponent(&self) -> u32 {
        self.operator.order()
    }

    /// Values of the orthonormal `ψ_j` and of `P₀ψ_j` at `nodes`; rows are nodes.
    pub fn tabulate(&self, nodes: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
        let (phi, p0phi) = self.tabulate_raw(nodes);
        (phi * &self.transform, p0phi * &self.transform)
    }

    /// Values of `u = Σ c_j ψ_j` and `P₀u` at `r`.
    pub fn eval_combination(&self, coeffs: &[f64], r: f64) -> (f64, f64) {
        let (phi, p0) = self.tabulate(&[r]);
        let c = DVector::from_column_slice(coeffs);
        ((phi * &c)[0], (p0 * c)[0])
    }

    /// Jacobi-form `φ_i` and `P₀φ_i` before orthonormalization.
    fn tabulate_raw(&self, nodes: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.size;
        let m = self.exponent();
        let eps = self.radius;
        let mut phi = DMatrix::zeros(nodes.len(), n);
        let mut p0 = DMatrix::zeros(nodes.len(), n);
        for (q, &r) in nodes.iter().enumerate() {
            let s = (r / eps) * (r / eps);
            let derivs = shape_derivatives(n, m, s);
            for j in 0..n {
                let f = &derivs[j];
                phi[(q, j)] = f[0];
                p0[(q, j)] = match self.operator {
                    // -Δ = -(4s d² + 6 d)/ε²
                    Operator::NegLaplace => -(4.0 * s * f[2] + 6.0 * f[1]) / (eps * eps),
                    // Δ² = (16s² d⁴ + 80s d³ + 60 d²)/ε⁴
                    Operator::Bilaplace => {
                        (16.0 * s * s * f[4] + 80.0 * s * f[3] + 60.0 * f[2]) / (eps * eps * eps * eps)
                    }
                };
            }
        }
        (phi, p0)
    }
}

/// `F_j^{(d)}(s)` for `F_j = (1 - s)^m P_j^{(2m, 1/2)}(2s - 1)`, `j < n`, `d ≤ 4`.
fn shape_derivatives(n: usize, m: u32, s: f64) -> Vec<[f64; 5]> {
    let alpha = 2.0 * m as f64;
    let x = 2.0 * s - 1.0;
    // jac[k][j] = d^k/ds^k P_j^{(α,β)}(2s - 1)
    let mut jac = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for k in 0..=4usize {
        let shifted = jacobi_all(n, alpha + k as f64, BETA + k as f64, x);
        for j in k..n {
            let factor: f64 = (1..=k).map(|i| j as f64 + alpha + BETA + i as f64).product();
            jac[k][j] = factor * shifted[j - k];
        }
    }
    // g^{(i)} for g = (1 - s)^m
    let g: Vec<f64> = (0..=4u32)
        .map(|i| {
            if i > m {
                0.0
            } else {
                let falling: f64 = ((m - i + 1)..=m).map(|v| v as f64).product();
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * falling * (1.0 - s).powi((m - i) as i32)
            }
        })
        .collect();
    const BINOM: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    (0..n)
        .map(|j| {
            let mut out = [0.0; 5];
            for (d, o) in out.iter_mut().enumerate() {
                *o = (0..=d).map(|i| BINOM[d][i] * g[i] * jac[d - i][j]).sum();
            }
            out
        })
        .collect()
}

/// `P_j^{(a,b)}(x)` for `j < n` by the three-term recurrence.
fn jacobi_all(n: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n);
    if n == 0 {
        return p;
    }
    p.push(1.0);
    if n == 1 {
        return p;
    }
    p.push((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0);
    for j in 2..n {
        let jf = j as f64;
        let c = 2.0 * jf + a + b;
        let lhs = 2.0 * jf * (jf + a + b) * (c - 2.0);
        let t1 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p[j - 1];
        let t2 = 2.0 * (jf + a - 1.0) * (jf + b - 1.0) * c * p[j - 2];
        p.push((t1 - t2) / lhs);
    }
    p
}
