use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Ascending eigenvalues of a symmetric matrix.
pub(crate) fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Ascending eigenpairs; column `j` of the returned matrix belongs to value `j`.
pub(crate) fn sym_eigen_sorted(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| se.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `‖M - Mᵀ‖_F / ‖M‖_F`.
pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.norm();
    if n == 0.0 {
        0.0
    } else {
        (m - m.transpose()).norm() / n
    }
}

/// Lower Cholesky factor, or an error naming `what`.
pub(crate) fn cholesky(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::Numerical(format!("{what} is not numerically positive definite")))
}

/// `L⁻¹ M L⁻ᵀ` for lower-triangular `L`, symmetrized.
pub(crate) fn congruence(l: &DMatrix<f64>, m: &DMatrix<f64>) -> DMatrix<f64> {
    let x = l.solve_lower_triangular(m).expect("nonsingular factor");
    let y = l.solve_lower_triangular(&x.transpose()).expect("nonsingular factor");
    symmetrize(&y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruence_matches_explicit_inverse() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let b = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, -1.0, 1.0, 0.0, 1.0, 0.5]);
        let l = cholesky(&a, "a").unwrap();
        let li = l.clone().try_inverse().unwrap();
        let direct = &li * &b * li.transpose();
        assert!((congruence(&l, &b) - direct).norm() < 1e-13);
    }

    #[test]
    fn sorted_pairs() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (v, x) = sym_eigen_sorted(&m);
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        assert!((x[(0, 0)] + x[(1, 0)]).abs() < 1e-14);
    }
}
