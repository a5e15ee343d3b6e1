//! `j₀(x) = sin x / x`, its modified companion `m₀(x) = sinh x / x = j₀(ix)`, and
//! derivatives up to third order.

const SERIES_CUTOFF: f64 = 0.5;
const SERIES_TERMS: usize = 12;

/// `d^order/dx^order j₀(x)` for `order ≤ 3`.
pub fn j0_family(x: f64, order: u32) -> f64 {
    assert!(order <= 3, "order must be in 0..=3");
    if x.abs() < SERIES_CUTOFF {
        return series(x, order, -1.0);
    }
    let (s, c) = x.sin_cos();
    let (x2, x3) = (x * x, x * x * x);
    match order {
        0 => s / x,
        1 => c / x - s / x2,
        2 => -s / x - 2.0 * c / x2 + 2.0 * s / x3,
        _ => -c / x + 3.0 * s / x2 + 6.0 * c / x3 - 6.0 * s / (x2 * x2),
    }
}

/// `d^order/dx^order m₀(x)` for `order ≤ 3`. Overflows past `|x| ≈ 710`; use
/// [`m0_scaled`] there.
pub fn m0_family(x: f64, order: u32) -> f64 {
    assert!(order <= 3, "order must be in 0..=3");
    if x.abs() < SERIES_CUTOFF {
        return series(x, order, 1.0);
    }
    let (s, c) = (x.sinh(), x.cosh());
    let (x2, x3) = (x * x, x * x * x);
    match order {
        0 => s / x,
        1 => c / x - s / x2,
        2 => s / x - 2.0 * c / x2 + 2.0 * s / x3,
        _ => c / x - 3.0 * s / x2 + 6.0 * c / x3 - 6.0 * s / (x2 * x2),
    }
}

/// `x · j₀^{(order)}(x)`, bounded for all `x`.
pub fn j0_scaled(x: f64, order: u32) -> f64 {
    assert!(order <= 3, "order must be in 0..=3");
    if x.abs() < SERIES_CUTOFF {
        return x * series(x, order, -1.0);
    }
    let (s, c) = x.sin_cos();
    match order {
        0 => s,
        1 => c - s / x,
        2 => -s - 2.0 * c / x + 2.0 * s / (x * x),
        _ => -c + 3.0 * s / x + 6.0 * c / (x * x) - 6.0 * s / (x * x * x),
    }
}

/// `2x e^{-x} · m₀^{(order)}(x)` for `x ≥ 0`, which tends to 1 as `x → ∞`.
pub fn m0_scaled(x: f64, order: u32) -> f64 {
    assert!(order <= 3, "order must be in 0..=3");
    assert!(x >= 0.0, "m0_scaled needs x >= 0");
    if x < SERIES_CUTOFF {
        return 2.0 * x * (-x).exp() * series(x, order, 1.0);
    }
    // 2e^{-x} sinh x and 2e^{-x} cosh x
    let t = (-2.0 * x).exp();
    let (em, ep) = (1.0 - t, 1.0 + t);
    match order {
        0 => em,
        1 => ep - em / x,
        2 => em - 2.0 * ep / x + 2.0 * em / (x * x),
        _ => ep - 3.0 * em / x + 6.0 * ep / (x * x) - 6.0 * em / (x * x * x),
    }
}

/// Taylor series of `Σ sign^n x^{2n} / (2n+1)!`, differentiated `order` times.
fn series(x: f64, order: u32, sign: f64) -> f64 {
    let l = order as usize;
    let mut total = 0.0;
    // sum smallest terms first
    for n in (0..SERIES_TERMS).rev() {
        let p = 2 * n;
        if p < l {
            continue;
        }
        let mut c = sign.powi(n as i32);
        for k in (p - l + 1)..=p {
            c *= k as f64;
        }
        for k in 2..=(p + 1) {
            c /= k as f64;
        }
        total += c * x.powi((p - l) as i32);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(j0_family(0.0, 0), 1.0);
        assert_eq!(j0_family(0.0, 1), 0.0);
        assert_eq!(j0_family(0.0, 3), 0.0);
        assert_eq!(m0_family(0.0, 0), 1.0);
        assert!((j0_family(0.0, 2) + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn zero_at_pi() {
        assert!(j0_family(PI, 0).abs() < 1e-16);
    }

    #[test]
    fn derivative_at_one() {
        // cos 1 - sin 1, 30 digits
        assert!(close(j0_family(1.0, 1), -0.301_168_678_939_756_8, 1e-14));
    }

    #[test]
    fn series_matches_closed_form_near_switch() {
        let closed_j = |x: f64| {
            let (s, c) = x.sin_cos();
            [s / x, c / x - s / (x * x), -s / x - 2.0 * c / (x * x) + 2.0 * s / x.powi(3),
             -c / x + 3.0 * s / (x * x) + 6.0 * c / x.powi(3) - 6.0 * s / x.powi(4)]
        };
        let closed_m = |x: f64| {
            let (s, c) = (x.sinh(), x.cosh());
            [s / x, c / x - s / (x * x), s / x - 2.0 * c / (x * x) + 2.0 * s / x.powi(3),
             c / x - 3.0 * s / (x * x) + 6.0 * c / x.powi(3) - 6.0 * s / x.powi(4)]
        };
        for x in [0.45, 0.49999, 0.5] {
            for order in 0..=3u32 {
                assert!((series(x, order, -1.0) - closed_j(x)[order as usize]).abs() < 1e-11, "j order {order}");
                assert!((series(x, order, 1.0) - closed_m(x)[order as usize]).abs() < 1e-11, "m order {order}");
            }
        }
    }

    #[test]
    fn modified_is_imaginary_argument() {
        // m0(x) = j0(ix): the even series differ only in the sign of x²
        for x in [0.1f64, 0.3, 1.5, 4.0] {
            let direct = x.sinh() / x;
            assert!(close(m0_family(x, 0), direct, 1e-14));
        }
    }

    #[test]
    fn scaled_forms_match_unscaled() {
        for order in 0..=3 {
            for x in [0.2, 0.7, 3.0, 25.0] {
                let j = x * j0_family(x, order);
                assert!((j0_scaled(x, order) - j).abs() < 1e-14 * (1.0 + j.abs()));
                let m = 2.0 * x * (-x).exp() * m0_family(x, order);
                assert!((m0_scaled(x, order) - m).abs() < 1e-13 * (1.0 + m.abs()));
            }
        }
    }

    #[test]
    fn scaled_modified_is_finite_far_out() {
        for order in 0..=3 {
            let v = m0_scaled(1e4, order);
            assert!(v.is_finite() && (v - 1.0).abs() < 1e-3);
        }
    }
}
