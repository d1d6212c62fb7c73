//! Principal branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{FogError, Result};

const BRANCH_POINT: f64 = -1.0 / E;
/// How far below `−1/e` an argument may fall and still be clamped to it.
const BRANCH_SLACK: f64 = 1e-12;
const MAX_HALLEY: usize = 64;
const MAX_BISECTION: usize = 400;

/// `W₀(x)`: the solution `w ≥ −1` of `w·eʷ = x`.
///
/// Starts from the branch-point series `−1 + p − p²/3 + 11p³/72`
/// (`p = √(2(ex + 1))`) near `−1/e`, the Maclaurin series near zero, and
/// `ln x − ln ln x` for large `x`, then refines with Halley's iteration.
/// If the refined residual misses `1e-13·max(1, |x|)` the result comes from
/// bisection on `[−1, max(1, ln x)]` instead.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(FogError::Domain("Lambert W of NaN".into()));
    }
    if x < BRANCH_POINT - BRANCH_SLACK {
        return Err(FogError::Domain(format!(
            "Lambert W0 is undefined below -1/e, got {x}"
        )));
    }
    if x <= BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    let tol = 1e-13 * x.abs().max(1.0);
    let w = halley(x, initial_guess(x));
    if w.is_finite() && w >= -1.0 && residual(w, x) <= tol {
        return Ok(w);
    }
    log::debug!("Lambert W0 Halley refinement missed tolerance at x = {x}; bisecting");
    Ok(bisect(x, tol))
}

fn initial_guess(x: f64) -> f64 {
    let p2 = 2.0 * (E * x + 1.0);
    if p2 < 0.25 {
        let p = p2.max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x.abs() < 0.25 {
        x * (1.0 - x * (1.0 - 1.5 * x))
    } else if x < 3.0 {
        // crude but safely inside the basin of attraction
        0.5 * x.ln_1p()
    } else {
        let l = x.ln();
        l - l.ln()
    }
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        if wp1.abs() < f64::MIN_POSITIVE {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let next = w - f / denom;
        if !next.is_finite() {
            break;
        }
        let step = (next - w).abs();
        w = next.max(-1.0);
        if step <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

fn residual(w: f64, x: f64) -> f64 {
    (w * w.exp() - x).abs()
}

fn bisect(x: f64, tol: f64) -> f64 {
    let mut lo = -1.0;
    let mut hi = if x > E { x.ln() } else { 1.0 };
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = mid * mid.exp() - x;
        if f.abs() <= tol * 1e-3 {
            return mid;
        }
        if f > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent reference: plain bisection on w·eʷ = x.
    fn bisection_oracle(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0f64, 50.0f64);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn special_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(lambert_w0(E).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(lambert_w0(-1.0 / E).unwrap(), -1.0);
        let w = lambert_w0(-2.0 / (E * E)).unwrap();
        assert_abs_diff_eq!(w, bisection_oracle(-2.0 / (E * E)), epsilon = 1e-14);
        assert_abs_diff_eq!(w, -0.4064, epsilon = 1e-4);
    }

    #[test]
    fn domain() {
        assert!(lambert_w0(-0.5).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
        // clamped just below the branch point
        assert_eq!(lambert_w0(-1.0 / E - 5e-13).unwrap(), -1.0);
    }

    #[test]
    fn residual_bound_and_monotonicity() {
        let mut xs: Vec<f64> = Vec::new();
        for k in 1..=60 {
            xs.push(-1.0 / E + 10f64.powi(-k / 4));
        }
        for k in -300..=300 {
            xs.push(k as f64 * 0.05);
        }
        for k in 0..30 {
            xs.push(10f64.powi(k));
        }
        xs.retain(|&x| x >= -1.0 / E);
        xs.sort_by(f64::total_cmp);
        let mut prev = -1.0;
        for &x in &xs {
            let w = lambert_w0(x).unwrap();
            assert!(w >= -1.0);
            let res = (w * w.exp() - x).abs();
            assert!(res <= 1e-13 * x.abs().max(1.0), "x = {x}, residual {res:e}");
            assert!(w >= prev, "not monotone at {x}");
            prev = w;
        }
    }

    #[test]
    fn agrees_with_bisection_oracle() {
        for &x in &[-0.3678, -0.33109, -0.2436, -0.1, 0.01, 0.5, 2.0, 10.0, 1e3] {
            assert_abs_diff_eq!(lambert_w0(x).unwrap(), bisection_oracle(x), epsilon = 1e-10);
        }
    }
}
