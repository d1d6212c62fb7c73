//! Derivative-free numeric optimizers for fiber length, interferometer
//! count and energy split.
//!
//! These deliberately share nothing with the closed forms in
//! [`crate::analytic`] beyond the objective functions, so they can serve as
//! an independent check on every analytic optimum.

use crate::analytic::{self, CountOptimum, EnergySplit};
use crate::designs::Variant;
use crate::error::{FogError, Result};
use crate::sagnac::{loss_rate, Squeezing};

const PRESCAN_SAMPLES: usize = 64;
/// Golden-section stops here; below it, comparisons of nearly equal
/// objective values are dominated by rounding.
const GOLDEN_FLOOR: f64 = 1e-7;
const POLISH_STEP: f64 = 1e-4;
const POLISH_ROUNDS: usize = 2;
/// Rounding noise, in ulps, tolerated when accepting a polished point.
const POLISH_SLACK: f64 = 1024.0;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub struct ScalarProblem<'a> {
    pub objective: Box<dyn Fn(f64) -> f64 + 'a>,
    pub bracket: (f64, f64),
    /// Relative tolerance on the minimizer.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl<'a> ScalarProblem<'a> {
    pub fn new(objective: impl Fn(f64) -> f64 + 'a, lo: f64, hi: f64) -> Self {
        ScalarProblem {
            objective: Box::new(objective),
            bracket: (lo, hi),
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let value = (self.objective)(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(FogError::Evaluation { x, value })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMinimum {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Minimizes a unimodal objective on its bracket.
///
/// A 64-point pre-scan narrows the bracket to the neighbours of the best
/// sample, golden-section search shrinks it to `~1e-7` relative, and
/// finite-difference Newton steps polish the result below the
/// `√ε` resolution limit of comparison-based search.
pub fn minimize_scalar(problem: &ScalarProblem) -> Result<ScalarMinimum> {
    let (lo, hi) = problem.bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(FogError::invalid(format!(
            "bracket must satisfy lo < hi, got ({lo}, {hi})"
        )));
    }
    if !(problem.tolerance > 0.0) {
        return Err(FogError::invalid("tolerance must be positive"));
    }

    let step = (hi - lo) / (PRESCAN_SAMPLES - 1) as f64;
    let xs: Vec<f64> = (0..PRESCAN_SAMPLES)
        .map(|i| {
            if i + 1 == PRESCAN_SAMPLES {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let fs = xs
        .iter()
        .map(|&x| problem.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let best = (0..PRESCAN_SAMPLES)
        .min_by(|&i, &j| fs[i].total_cmp(&fs[j]))
        .expect("non-empty scan");
    let interior_minima = (1..PRESCAN_SAMPLES - 1)
        .filter(|&i| fs[i] < fs[i - 1] && fs[i] < fs[i + 1])
        .count();
    if interior_minima > 1 {
        log::warn!("objective has {interior_minima} local minima on the scan; keeping the lowest");
    }

    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(PRESCAN_SAMPLES - 1)];
    let golden_tol = problem.tolerance.max(GOLDEN_FLOOR);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = problem.eval(x1)?;
    let mut f2 = problem.eval(x2)?;
    let mut iterations = 0;
    while b - a > golden_tol * (0.5 * (a + b)).abs().max(1.0) {
        if iterations >= problem.max_iterations {
            return Err(FogError::Convergence {
                iterations,
                width: b - a,
            });
        }
        iterations += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = problem.eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = problem.eval(x2)?;
        }
    }

    let (mut x, mut f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if problem.tolerance < GOLDEN_FLOOR {
        for _ in 0..POLISH_ROUNDS {
            iterations += 1;
            match newton_polish(problem, x, b - a, lo, hi)? {
                Some((xp, fp)) if fp <= f + POLISH_SLACK * f64::EPSILON * f.abs() => {
                    x = xp;
                    f = fp.min(f);
                }
                _ => break,
            }
        }
    }
    Ok(ScalarMinimum { x, f, iterations })
}

/// One Newton step from a fourth-order central-difference slope and a
/// second-order curvature; `None` when the curvature is not positive or
/// the step leaves the bracket. The difference step follows `|x|` so
/// minimizers close to zero keep their relative accuracy.
fn newton_polish(
    problem: &ScalarProblem,
    x: f64,
    width: f64,
    lo: f64,
    hi: f64,
) -> Result<Option<(f64, f64)>> {
    let h = POLISH_STEP * x.abs().max(width);
    if x - 2.0 * h < lo || x + 2.0 * h > hi {
        return Ok(None);
    }
    let f0 = problem.eval(x)?;
    let (fm, fp) = (problem.eval(x - h)?, problem.eval(x + h)?);
    let (fm2, fp2) = (problem.eval(x - 2.0 * h)?, problem.eval(x + 2.0 * h)?);
    let curvature = (fp - 2.0 * f0 + fm) / (h * h);
    if !(curvature > 0.0) {
        return Ok(None);
    }
    let slope = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * h);
    let next = x - slope / curvature;
    if !(next > x - h && next < x + h) {
        return Ok(None);
    }
    Ok(Some((next, problem.eval(next)?)))
}

/// Noise factor seen by the read-out port with a possibly non-integer
/// interferometer count.
fn port_noise_factor(variant: Variant, m: f64, squeezing: Squeezing) -> f64 {
    match (variant, squeezing) {
        (Variant::C | Variant::D, _) => 1.0,
        (Variant::P, sq) if !sq.is_infinite() => {
            Squeezing::Photons(sq.mean_photons() / m).noise_factor()
        }
        _ => squeezing.noise_factor(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSearch {
    pub length_km: f64,
    /// Normalized variance at the optimum.
    pub variance: f64,
    pub iterations: usize,
}

/// Numeric optimal total fiber length for `variant` with `m` interferometers.
pub fn optimize_length_numeric(
    variant: Variant,
    b: f64,
    squeezing: Squeezing,
    m: usize,
) -> Result<LengthSearch> {
    if !(b > 0.0) {
        return Err(FogError::invalid(format!(
            "loss coefficient must be positive, got {b}"
        )));
    }
    variant.check_count(m)?;
    let r = variant.port_noise_factor(m, squeezing);
    let scale = m as f64 / loss_rate(b);
    let problem = ScalarProblem::new(
        |l| analytic::normalized_variance(r, b, l, m as f64),
        0.05 * scale,
        10.0 * scale,
    );
    let min = minimize_scalar(&problem)?;
    Ok(LengthSearch {
        length_km: min.x,
        variance: min.f,
        iterations: min.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSearch {
    /// Continuous interferometer count at the optimum.
    pub m: f64,
    pub variance: f64,
    pub iterations: usize,
}

/// Upper end of the continuous count search, in units of `cL`.
const COUNT_CEILING: f64 = 1e8;

/// Numeric fixed-length optimum over a continuous interferometer count.
///
/// The search runs in `ln M`. With infinite squeezing Design E keeps
/// improving as `M → ∞`; the result then sits at the ceiling `1e8·cL`,
/// within `~1e-8` relative of the infimum.
pub fn optimize_m_continuous(
    variant: Variant,
    b: f64,
    length_km: f64,
    squeezing: Squeezing,
) -> Result<CountSearch> {
    check_distributed(variant)?;
    check_fiber(b, length_km)?;
    let cl = loss_rate(b) * length_km;
    let objective = |s: f64| {
        let m = s.exp();
        analytic::normalized_variance(port_noise_factor(variant, m, squeezing), b, length_km, m)
    };
    let problem = ScalarProblem::new(objective, (0.25 * cl).ln(), (COUNT_CEILING * cl).ln());
    let min = minimize_scalar(&problem)?;
    Ok(CountSearch {
        m: min.x.exp(),
        variance: min.f,
        iterations: min.iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegerCountSearch {
    pub m_best: usize,
    pub variance: f64,
    /// `(M, normalized variance)` for `M = 1..=m_max`.
    pub profile: Vec<(usize, f64)>,
    /// Closed-form optimum for D and E with finite squeezing.
    pub analytic: Option<CountOptimum>,
}

/// Exhaustive fixed-length search over `M = 1..=m_max`. Ties go to the
/// smaller count.
pub fn optimize_m_integer(
    variant: Variant,
    b: f64,
    length_km: f64,
    squeezing: Squeezing,
    m_max: usize,
) -> Result<IntegerCountSearch> {
    check_distributed(variant)?;
    check_fiber(b, length_km)?;
    if m_max == 0 {
        return Err(FogError::invalid("m_max must be at least 1"));
    }
    let profile = (1..=m_max)
        .map(|m| {
            analytic::design_normalized_variance(variant, b, length_km, m, squeezing)
                .map(|v| (m, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let (m_best, variance) =
        profile.iter().copied().fold(
            (0, f64::INFINITY),
            |best, (m, v)| if v < best.1 { (m, v) } else { best },
        );
    let analytic = match variant {
        Variant::D | Variant::E => analytic::optimal_m(variant, b, length_km, squeezing).ok(),
        _ => None,
    };
    Ok(IntegerCountSearch {
        m_best,
        variance,
        profile,
        analytic,
    })
}

/// Numeric optimal split of `N` photons between laser and squeezer for
/// Design S at `T = 1`.
pub fn optimize_energy_split_numeric(n_total: f64, eta: f64) -> Result<EnergySplit> {
    if !(n_total > 0.0) || !n_total.is_finite() || !(eta > 0.0 && eta <= 1.0) {
        return Err(FogError::invalid(format!(
            "energy split needs N > 0 and 0 < η ≤ 1, got N = {n_total}, η = {eta}"
        )));
    }
    let objective = |n_s: f64| {
        let r = Squeezing::Photons(n_s.max(0.0)).noise_factor();
        analytic::var_with_noise_factor(1.0, eta, n_total - n_s, r)
    };
    let problem = ScalarProblem::new(objective, 0.0, n_total * (1.0 - 1e-9));
    let min = minimize_scalar(&problem)?;
    Ok(EnergySplit {
        n_s: min.x,
        variance: min.f,
    })
}

/// `R_E|L_opt` from numerically optimized lengths of E (or P) and D, with
/// `m` interferometers each.
pub fn numeric_length_ratio(
    variant: Variant,
    b: f64,
    squeezing: Squeezing,
    m: usize,
) -> Result<f64> {
    let quantum = optimize_length_numeric(variant, b, squeezing, m)?;
    let classical = optimize_length_numeric(variant.baseline(), b, Squeezing::NONE, m)?;
    Ok(quantum.variance / classical.variance)
}

/// `R_E|M_opt` from numerically optimized continuous counts of E and D.
pub fn numeric_count_ratio(b: f64, length_km: f64, squeezing: Squeezing) -> Result<f64> {
    let quantum = optimize_m_continuous(Variant::E, b, length_km, squeezing)?;
    let classical = optimize_m_continuous(Variant::D, b, length_km, Squeezing::NONE)?;
    Ok(quantum.variance / classical.variance)
}

fn check_distributed(variant: Variant) -> Result<()> {
    if !variant.is_distributed() {
        return Err(FogError::invalid(format!(
            "interferometer-count search needs design D, P or E, got {variant}"
        )));
    }
    Ok(())
}

fn check_fiber(b: f64, length_km: f64) -> Result<()> {
    if !(b > 0.0) || !(length_km > 0.0) || !length_km.is_finite() {
        return Err(FogError::invalid(format!(
            "need b > 0 and finite L > 0, got b = {b}, L = {length_km}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parabola() {
        let p = ScalarProblem::new(|x| (x - 2.0) * (x - 2.0), 0.0, 5.0);
        let min = minimize_scalar(&p).unwrap();
        assert!((min.x - 2.0).abs() <= 1e-10 * 2.0, "x = {}", min.x);
    }

    #[test]
    fn smooth_nonquadratic_reaches_tolerance() {
        // minimum of x − ln x at x = 1, with nonzero third derivative
        let p = ScalarProblem::new(|x| x - x.ln(), 0.1, 7.0);
        let min = minimize_scalar(&p).unwrap();
        assert!((min.x - 1.0).abs() <= 1e-10, "x = {}", min.x);
    }

    #[test]
    fn minimum_at_edge() {
        let p = ScalarProblem::new(|x| x, 1.0, 3.0);
        let min = minimize_scalar(&p).unwrap();
        assert!((min.x - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bad_inputs() {
        assert!(minimize_scalar(&ScalarProblem::new(|x| x, 1.0, 1.0)).is_err());
        let err = minimize_scalar(&ScalarProblem::new(
            |x| if x > 0.5 { f64::NAN } else { x },
            0.0,
            1.0,
        ));
        assert!(matches!(err, Err(FogError::Evaluation { .. })));
        let err = minimize_scalar(&ScalarProblem::new(|x| x * x, -1.0, 2.0).with_max_iterations(3));
        assert!(matches!(
            err,
            Err(FogError::Convergence { iterations: 3, .. })
        ));
    }

    #[test]
    fn classical_length() {
        let l = optimize_length_numeric(Variant::C, 0.5, Squeezing::NONE, 1).unwrap();
        assert_relative_eq!(
            l.length_km,
            20.0 / (0.5 * std::f64::consts::LN_10),
            max_relative = 1e-9
        );
    }

    #[test]
    fn d_short_fiber_prefers_one() {
        let s = optimize_m_integer(Variant::D, 0.5, 1.0, Squeezing::NONE, 64).unwrap();
        assert_eq!(s.m_best, 1);
        assert_eq!(s.profile.len(), 64);
        assert!(s.analytic.unwrap().choice.below_threshold);
    }

    #[test]
    fn energy_split_lossless() {
        let s = optimize_energy_split_numeric(10.0, 1.0).unwrap();
        assert_relative_eq!(s.variance, 1.0 / 110.0, max_relative = 1e-12);
        assert_relative_eq!(s.n_s, 100.0 / 21.0, max_relative = 1e-8);
    }

    #[test]
    fn count_search_rejects_single_interferometer_designs() {
        assert!(optimize_m_integer(Variant::S, 0.5, 15.0, Squeezing::NONE, 8).is_err());
        assert!(optimize_m_continuous(Variant::C, 0.5, 15.0, Squeezing::NONE).is_err());
    }
}
