use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{Kind, RadialProblem, RootRecord};
use crate::error::{Error, Result};
use crate::Method;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootOptions {
    /// Grid step in the scan argument (`k` for helmholtz and biharmonic, `λ` for
    /// dirac). `None` picks the default for the problem.
    pub step: Option<f64>,
    /// Residual tolerance on the normalized determinant.
    pub tolerance: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { step: None, tolerance: 1e-10 }
    }
}

/// Leading-order root spacing and locations from the large-argument expansion of the
/// determinant.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticPrediction {
    pub kind: Kind,
    /// `"k"` or `"lambda"`.
    pub variable: &'static str,
    pub spacing: f64,
    pub error_order: &'static str,
}

impl AsymptoticPrediction {
    /// Predicted `j`-th root, where the expansion pins one down (`jπ/(δε)` for dirac).
    pub fn root(&self, j: u32) -> Option<f64> {
        match self.kind {
            Kind::DiracReduced => Some(j as f64 * self.spacing),
            _ => None,
        }
    }
}

pub fn asymptotic_prediction(p: &RadialProblem) -> Result<AsymptoticPrediction> {
    let de = p.contrast * p.radius;
    match p.kind {
        Kind::Biharmonic => Ok(AsymptoticPrediction {
            kind: p.kind,
            variable: "k",
            spacing: 8.0 * PI / de,
            error_order: "O(1/eps)",
        }),
        Kind::DiracReduced => Ok(AsymptoticPrediction {
            kind: p.kind,
            variable: "lambda",
            spacing: PI / de,
            error_order: "O(1/lambda)",
        }),
        Kind::Helmholtz => Err(Error::InvalidArgument(
            "no closed-form asymptotic root prediction for helmholtz problems".into(),
        )),
    }
}

/// Default grid step in the scan argument: a 32nd of the asymptotic spacing, or
/// `π/(16ε√(1+δ))` for helmholtz.
pub fn default_step(p: &RadialProblem) -> f64 {
    match asymptotic_prediction(p) {
        Ok(a) => a.spacing / 32.0,
        Err(_) => PI / (16.0 * p.radius * (1.0 + p.contrast).sqrt()),
    }
}

/// Window in the scan argument. Helmholtz and dirac windows are given in `λ`,
/// biharmonic windows in `k`.
fn argument_window(p: &RadialProblem, window: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Window(format!("empty window ({lo}, {hi})")));
    }
    match p.kind {
        Kind::Helmholtz => {
            if hi <= 0.0 {
                return Err(Error::Window(format!("helmholtz window ({lo}, {hi}) has no positive lambda")));
            }
            Ok((lo.max(0.0).sqrt(), hi.sqrt()))
        }
        Kind::Biharmonic => {
            if hi <= 0.0 {
                return Err(Error::Window(format!("biharmonic window ({lo}, {hi}) has no positive k")));
            }
            Ok((lo.max(0.0), hi))
        }
        Kind::DiracReduced => Ok((lo, hi)),
    }
}

/// Brackets every sign change of the normalized determinant on a uniform grid and
/// bisects each bracket down to adjacent floating-point numbers.
///
/// Zeros where the determinant touches without changing sign are not found.
pub fn find_roots(p: &RadialProblem, window: (f64, f64), opts: &RootOptions) -> Result<Vec<RootRecord>> {
    let (xa, xb) = argument_window(p, window)?;
    let step = opts.step.unwrap_or_else(|| default_step(p));
    if !(step > 0.0) {
        return Err(Error::Window(format!("grid step must be positive, got {step}")));
    }
    if step >= xb - xa {
        return Err(Error::Window(format!("grid step {step} is not smaller than the window {}", xb - xa)));
    }
    let n = ((xb - xa) / step).ceil() as usize;
    let h = (xb - xa) / n as f64;
    let mut xs: Vec<f64> = (0..=n).map(|i| xa + h * i as f64).collect();
    xs[n] = xb;
    // an endpoint on the domain boundary (k = 0, λ = 0) is treated as open
    if matches!(p.det_at_argument(xs[0]), Err(Error::Domain(_))) {
        xs[0] = xa + 1e-6 * h;
    }
    let fs: Vec<f64> = xs.par_iter().map(|&x| det_or_nan(p, x)).collect();

    let mut brackets = Vec::new();
    for i in 0..n {
        let (f0, f1) = (fs[i], fs[i + 1]);
        if f0.is_nan() || f1.is_nan() {
            continue;
        }
        if f0 == 0.0 {
            // an exact grid hit is recorded once, from the cell on its right
            if i > 0 || xs[0] == xa {
                let lo = if i > 0 { xs[i - 1] } else { xs[i] };
                brackets.push((lo, xs[i + 1], Some(xs[i])));
            }
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            brackets.push((xs[i], xs[i + 1], None));
        }
    }
    if fs[n] == 0.0 {
        brackets.push((xs[n - 1], xs[n], Some(xs[n])));
    }

    let mut roots: Vec<RootRecord> = brackets
        .into_par_iter()
        .map(|(lo, hi, exact)| {
            let x = match exact {
                Some(x) => x,
                None => bisect(p, lo, hi),
            };
            let residual = det_or_nan(p, x).abs();
            let (l0, l1) = (p.argument_to_lambda(lo), p.argument_to_lambda(hi));
            RootRecord {
                lambda: p.argument_to_lambda(x),
                argument: x,
                bracket: (l0.min(l1), l0.max(l1)),
                residual,
                method: Method::Bisection,
                multiplicity_estimate: 1,
            }
        })
        .collect();
    roots.sort_by(|a, b| a.argument.total_cmp(&b.argument));
    Ok(roots)
}

fn det_or_nan(p: &RadialProblem, x: f64) -> f64 {
    p.det_at_argument(x).unwrap_or(f64::NAN)
}

fn bisect(p: &RadialProblem, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = det_or_nan(p, lo);
    let mut fhi = det_or_nan(p, hi);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if flo.abs() <= fhi.abs() { lo } else { hi };
        }
        let fm = det_or_nan(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Variant;

    #[test]
    fn dirac_default_step() {
        let p = RadialProblem::new(Kind::DiracReduced, Variant::Acoustic, 1.0, 0.5).unwrap();
        assert!((default_step(&p) - PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn predictions() {
        let b = RadialProblem::new(Kind::Biharmonic, Variant::Acoustic, 1.0, 0.1).unwrap();
        assert!((asymptotic_prediction(&b).unwrap().spacing - 251.32741228718345).abs() < 1e-9);
        let d = RadialProblem::new(Kind::DiracReduced, Variant::Acoustic, 2.0, 0.25).unwrap();
        let a = asymptotic_prediction(&d).unwrap();
        assert!((a.spacing - 2.0 * PI).abs() < 1e-14);
        assert!((a.root(3).unwrap() - 6.0 * PI).abs() < 1e-13);
        let h = RadialProblem::new(Kind::Helmholtz, Variant::Acoustic, 1.0, 1.0).unwrap();
        assert!(asymptotic_prediction(&h).is_err());
    }

    #[test]
    fn window_errors() {
        let p = RadialProblem::new(Kind::DiracReduced, Variant::Acoustic, 1.0, 0.5).unwrap();
        assert!(matches!(find_roots(&p, (5.0, 5.0), &RootOptions::default()), Err(Error::Window(_))));
        let opts = RootOptions { step: Some(10.0), ..Default::default() };
        assert!(matches!(find_roots(&p, (1.0, 5.0), &opts), Err(Error::Window(_))));
    }

    #[test]
    fn acoustic_helmholtz_first_root() {
        let p = RadialProblem::new(Kind::Helmholtz, Variant::Acoustic, 1.0, 1.0).unwrap();
        let roots = find_roots(&p, (0.0, 60.0), &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 1);
        // extended-precision grid + bisection oracle
        assert!((roots[0].lambda - 59.21984072010792).abs() < 1e-9);
        assert!(roots[0].residual <= 1e-10);
        let (lo, hi) = roots[0].bracket;
        assert!(lo < roots[0].lambda && roots[0].lambda < hi);
    }
}
