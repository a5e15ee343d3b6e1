use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{MultiIndex, PolySymbol};

/// Basis of `Λ(P) = {v : Σ_i v_i ∂_i P ≡ 0}`, the directions along which `P` is
/// constant on every affine line. An empty result means `Λ(P) = {0}`.
///
/// Every `f64` coefficient is a dyadic rational, so the kernel is computed exactly
/// by rational row reduction of the coefficient matrix of `Σ_i v_i ∂_i P`.
/// Each basis vector has a 1 in its free coordinate (reduced row echelon form).
pub fn lineality_space(p: &PolySymbol) -> Vec<Vec<f64>> {
    let n = p.dim();
    // row per monomial appearing in some ∂_i P, column per direction i
    let mut rows: BTreeMap<MultiIndex, Vec<BigRational>> = BTreeMap::new();
    for i in 0..n {
        let mut alpha = vec![0; n];
        alpha[i] = 1;
        let d = p.derivative(&alpha).expect("dimension matches");
        for (mono, c) in d.terms() {
            let row = rows.entry(mono.clone()).or_insert_with(|| vec![BigRational::zero(); n]);
            row[i] = BigRational::from_float(c).expect("finite coefficient");
        }
    }
    let mut m: Vec<Vec<BigRational>> = rows.into_values().collect();
    let pivots = rref(&mut m, n);

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::from_integer(BigInt::from(1));
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
        })
        .collect()
}

/// In-place reduced row echelon form; returns the pivot column of each leading row.
fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hidden_third_variable() {
        let p = PolySymbol::new(3, [(vec![2, 0, 0], 1.0), (vec![0, 2, 0], 1.0)]).unwrap();
        assert_eq!(lineality_space(&p), vec![vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn laplacian_has_trivial_lineality() {
        assert!(lineality_space(&PolySymbol::neg_laplacian(3)).is_empty());
    }

    #[test]
    fn difference_square_is_constant_along_diagonal() {
        // (ξ1 - ξ2)² = ξ1² - 2ξ1ξ2 + ξ2²
        let p = PolySymbol::new(2, [(vec![2, 0], 1.0), (vec![1, 1], -2.0), (vec![0, 2], 1.0)]).unwrap();
        let basis = lineality_space(&p);
        assert_eq!(basis, vec![vec![1.0, 1.0]]);
        // symbolic check: P(s(1,1) + η) expanded in s has no s-dependence
        for &(e1, e2) in &[(0.3, -1.2), (2.0, 5.0)] {
            let base = p.eval(&[e1, e2]).unwrap();
            for s in [-3.0, 0.5, 10.0] {
                assert!((p.eval(&[e1 + s, e2 + s]).unwrap() - base).abs() < 1e-12 * (1.0 + base.abs()));
            }
        }
    }

    #[test]
    fn constant_symbol_is_invariant_everywhere() {
        let p = PolySymbol::constant(2, 3.0);
        assert_eq!(lineality_space(&p).len(), 2);
    }
}
