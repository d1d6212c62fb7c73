//! Closed-form sensitivity results for the five gyroscope designs.
//!
//! Conventions used throughout:
//!
//! * `r` is the squeezed-quadrature noise factor of the port read out by
//!   the homodyne detector, relative to vacuum (`1` for vacuum input).
//! * `c = b·ln(10)/10` is the loss rate, so a coil of length `ℓ` km has
//!   `η = e^{−cℓ}`.
//! * A *normalized* variance is the raw rotation-estimator variance times
//!   `n_v / V²`, with `n_v` the laser photon number per interferometer.
//!   With `M` interferometers sharing total length `L`, every design's
//!   normalized variance is `(M/L²)·(r + e^{cL/M} − 1)`.

mod lambert;

pub use lambert::lambert_w0;

use std::f64::consts::E;

use crate::designs::Variant;
use crate::error::{FogError, Result};
use crate::sagnac::{loss_rate, transmissivity, Squeezing};

/// Where a reported number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    Simulated,
    NumericOptimum,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Simulated => "simulated",
            Provenance::NumericOptimum => "numeric-optimum",
        }
    }
}

/// Integer interferometer count chosen among the neighbours of a
/// continuous optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountChoice {
    pub continuous: f64,
    pub floor: usize,
    pub ceil: usize,
    pub chosen: usize,
    /// Continuous optimum fell below one interferometer.
    pub below_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub variance_normalized: f64,
    pub optimal_length_km: Option<f64>,
    pub optimal_m: Option<CountChoice>,
    pub ratio: Option<f64>,
    pub provenance: Provenance,
}

impl SensitivityReport {
    pub fn new(variance_normalized: f64, provenance: Provenance) -> Self {
        SensitivityReport {
            variance_normalized,
            optimal_length_km: None,
            optimal_m: None,
            ratio: None,
            provenance,
        }
    }

    pub fn with_length(mut self, length_km: f64) -> Self {
        self.optimal_length_km = Some(length_km);
        self
    }

    pub fn with_count(mut self, choice: CountChoice) -> Self {
        self.optimal_m = Some(choice);
        self
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = Some(ratio);
        self
    }
}

fn w0(x: f64) -> f64 {
    // callers only pass arguments in [−1/e, 0]
    lambert_w0(x).expect("Lambert W argument inside the principal domain")
}

/// Λ from the noise reduction `1 − r` of the read-out port:
/// `W(−2(1 − r)/e²)`.
pub fn length_exponent(noise_reduction: f64) -> f64 {
    w0(-2.0 * noise_reduction / (E * E))
}

/// Λ̃ from the noise reduction: `W(−(1 − r)/e)`.
pub fn count_exponent(noise_reduction: f64) -> f64 {
    w0(-noise_reduction / E)
}

/// `Λ(x) = W(4(x − √(x(1+x)))/e²)`; `x = +∞` gives `W(−2/e²)`.
pub fn capital_lambda(n_s: f64) -> f64 {
    length_exponent(photons(n_s).noise_reduction())
}

/// `Λ_M(x) = W(4(x − √(x(M+x)))/(M e²))`, which equals `Λ(x/M)`.
pub fn capital_lambda_m(n_s: f64, m: usize) -> f64 {
    length_exponent(photons(n_s).per_port(m).noise_reduction())
}

/// Fixed-length exponent `Λ̃(x) = W(2(x − √(x(1+x)))/e)`.
///
/// Stationarity of the fixed-length Design E variance in `u = cL/M` gives
/// `(u − 1)e^{u−1} = −(1 − r)/e`, so `M_opt = cL/(1 + Λ̃)`.
pub fn capital_lambda_fixed(n_s: f64) -> f64 {
    count_exponent(photons(n_s).noise_reduction())
}

fn photons(n_s: f64) -> Squeezing {
    if n_s == f64::INFINITY {
        Squeezing::Infinite
    } else {
        Squeezing::Photons(n_s.max(0.0))
    }
}

/// `1/(T²ηN_v)`.
pub fn var_classical(t: f64, eta: f64, n_v: f64) -> f64 {
    1.0 / (t * t * eta * n_v)
}

/// `V²/(N_v L² 10^{−bL/10})`.
pub fn var_classical_fiber(b: f64, length_km: f64, n_v: f64, v_scale: f64) -> f64 {
    v_scale * v_scale / (n_v * length_km * length_km * transmissivity(b, length_km))
}

/// `(1/(T²ηN_v))·(η/(√(1+N_s)+√N_s)² + 1 − η)`.
pub fn var_squeezed(t: f64, eta: f64, n_v: f64, squeezing: Squeezing) -> f64 {
    var_with_noise_factor(t, eta, n_v, squeezing.noise_factor())
}

pub fn var_squeezed_fiber(
    b: f64,
    length_km: f64,
    n_v: f64,
    v_scale: f64,
    squeezing: Squeezing,
) -> f64 {
    let t = length_km / v_scale;
    var_squeezed(t, transmissivity(b, length_km), n_v, squeezing)
}

/// `(ηr + 1 − η)/(T²ηN_v)` for a read-out port with noise factor `r`.
pub fn var_with_noise_factor(t: f64, eta: f64, n_v: f64, noise_factor: f64) -> f64 {
    (eta * noise_factor + (1.0 - eta)) / (t * t * eta * n_v)
}

/// Small-angle estimator variance of `variant` at transmissivity `eta`.
/// `n_v` is the laser photon number per interferometer.
pub fn design_variance(
    variant: Variant,
    t: f64,
    eta: f64,
    n_v: f64,
    m: usize,
    squeezing: Squeezing,
) -> Result<f64> {
    variant.check_count(m)?;
    let r = variant.port_noise_factor(m, squeezing);
    Ok(var_with_noise_factor(t, eta, m as f64 * n_v, r))
}

/// Fixed-length normalized variance `(M/L²)(r + e^{cL/M} − 1)` with `M`
/// allowed to be continuous.
pub fn normalized_variance(noise_factor: f64, b: f64, length_km: f64, m: f64) -> f64 {
    let u = loss_rate(b) * length_km / m;
    m / (length_km * length_km) * (noise_factor + u.exp_m1())
}

/// Normalized variance of `variant` with `m` interferometers sharing
/// `length_km` of fiber.
pub fn design_normalized_variance(
    variant: Variant,
    b: f64,
    length_km: f64,
    m: usize,
    squeezing: Squeezing,
) -> Result<f64> {
    variant.check_count(m)?;
    Ok(normalized_variance(
        variant.port_noise_factor(m, squeezing),
        b,
        length_km,
        m as f64,
    ))
}

/// Optimal total-photon split between laser and squeezer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub n_s: f64,
    pub variance: f64,
}

/// Minimizes the Design S variance over `N_s` at fixed `N = N_v + N_s`.
///
/// `N_s,opt = 2η²N²/(1 + z + 2ηN(2 − η + z))` with `z = √(1 + 4η(1−η)N)`.
/// The minimum `2(1−η)²/(T²η(1 + 2(1−η)N − z))` is evaluated in the
/// rationalized form `(1 + 2(1−η)N + z)/(2T²ηN(N+1))`, which is finite at
/// `η = 1` where it equals `1/(T²N(N+1))`.
pub fn optimal_energy_split(n_total: f64, eta: f64, t: f64) -> Result<EnergySplit> {
    if !(n_total > 0.0) || !(eta > 0.0 && eta <= 1.0) || !(t > 0.0) {
        return Err(FogError::invalid(format!(
            "energy split needs N > 0, 0 < η ≤ 1, T > 0 (got N = {n_total}, η = {eta}, T = {t})"
        )));
    }
    let loss = 1.0 - eta;
    let z = (1.0 + 4.0 * eta * loss * n_total).sqrt();
    let n_s =
        2.0 * eta * eta * n_total * n_total / (1.0 + z + 2.0 * eta * n_total * (2.0 - eta + z));
    let variance =
        (1.0 + 2.0 * loss * n_total + z) / (2.0 * t * t * eta * n_total * (n_total + 1.0));
    Ok(EnergySplit { n_s, variance })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthOptimum {
    pub length_km: f64,
    /// Normalized variance at the optimum.
    pub variance: f64,
    /// Exponent Λ (or Λ_M for Design P) used.
    pub exponent: f64,
}

/// Optimal total fiber length for `variant` with `m` interferometers.
///
/// All designs share `L = M(2 + Λ)/c` and
/// `Var·n_v/V² = c²e^{2+Λ}/(2M(2+Λ))` where Λ is evaluated on the read-out
/// port's noise reduction: `0` for C/D, `Λ(N_s)` for S/E and `Λ_M(N_s)` for P.
pub fn optimal_length(
    variant: Variant,
    b: f64,
    squeezing: Squeezing,
    m: usize,
) -> Result<LengthOptimum> {
    if !(b > 0.0) {
        return Err(FogError::invalid(format!(
            "loss coefficient must be positive, got {b}"
        )));
    }
    variant.check_count(m)?;
    let c = loss_rate(b);
    let exponent = length_exponent(variant.port_noise_reduction(m, squeezing));
    let mf = m as f64;
    Ok(LengthOptimum {
        length_km: mf * (2.0 + exponent) / c,
        variance: c * c * (2.0 + exponent).exp() / (2.0 * mf * (2.0 + exponent)),
        exponent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountOptimum {
    pub choice: CountChoice,
    /// Normalized variance at the continuous optimum.
    pub variance_continuous: f64,
    /// Normalized variance at the chosen integer count.
    pub variance: f64,
    /// Exponent Λ̃ used (0 for Design D).
    pub exponent: f64,
}

/// Optimal interferometer count at fixed total length for Designs D and E.
///
/// `M = cL/(1 + Λ̃)` with normalized variance `c·e^{1+Λ̃}/L`; the integer
/// count is whichever of floor/ceil gives the lower variance.
pub fn optimal_m(
    variant: Variant,
    b: f64,
    length_km: f64,
    squeezing: Squeezing,
) -> Result<CountOptimum> {
    if !matches!(variant, Variant::D | Variant::E) {
        return Err(FogError::invalid(format!(
            "closed-form interferometer count exists only for designs D and E, not {variant}"
        )));
    }
    if !(b > 0.0) || !(length_km > 0.0) {
        return Err(FogError::invalid(format!(
            "need b > 0 and L > 0, got b = {b}, L = {length_km}"
        )));
    }
    let (r, reduction) = match variant {
        Variant::D => (1.0, 0.0),
        _ => (squeezing.noise_factor(), squeezing.noise_reduction()),
    };
    let exponent = count_exponent(reduction);
    if exponent <= -1.0 {
        return Err(FogError::Domain(
            "infinite squeezing has no finite optimal interferometer count".into(),
        ));
    }
    let c = loss_rate(b);
    let continuous = c * length_km / (1.0 + exponent);
    let variance_continuous = c * (1.0 + exponent).exp() / length_km;
    let choice = round_count(continuous, |m| {
        normalized_variance(r, b, length_km, m as f64)
    });
    Ok(CountOptimum {
        choice,
        variance_continuous,
        variance: normalized_variance(r, b, length_km, choice.chosen as f64),
        exponent,
    })
}

/// Picks floor or ceil of a continuous count, whichever `objective` prefers.
pub fn round_count(continuous: f64, objective: impl Fn(usize) -> f64) -> CountChoice {
    if continuous < 1.0 {
        return CountChoice {
            continuous,
            floor: 1,
            ceil: 1,
            chosen: 1,
            below_threshold: true,
        };
    }
    let floor = continuous.floor() as usize;
    let ceil = continuous.ceil() as usize;
    let chosen = if objective(ceil) < objective(floor) {
        ceil
    } else {
        floor
    };
    CountChoice {
        continuous,
        floor,
        ceil,
        chosen,
        below_threshold: false,
    }
}

/// Sensitivity ratios of the quantum-enhanced designs against their
/// classical baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityRatios {
    /// `R_S = R_E = ηr + 1 − η` at the given transmissivity (also `R_P`
    /// when each port carries `N_s`).
    pub fixed_eta: f64,
    /// `R_E|L_opt = 2e^Λ/(2 + Λ)`.
    pub optimized_length: f64,
    /// `R_E|M_opt = e^{Λ̃}`.
    pub fixed_length: f64,
    pub fixed_eta_limit: f64,
    pub optimized_length_limit: f64,
    pub fixed_length_limit: f64,
}

pub fn sensitivity_ratios(squeezing: Squeezing, eta: f64) -> Result<SensitivityRatios> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(FogError::invalid(format!(
            "transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    let reduction = squeezing.noise_reduction();
    let lambda = length_exponent(reduction);
    let lambda_inf = length_exponent(1.0);
    Ok(SensitivityRatios {
        fixed_eta: eta * squeezing.noise_factor() + (1.0 - eta),
        optimized_length: 2.0 * lambda.exp() / (2.0 + lambda),
        fixed_length: count_exponent(reduction).exp(),
        fixed_eta_limit: 1.0 - eta,
        optimized_length_limit: 2.0 * lambda_inf.exp() / (2.0 + lambda_inf),
        fixed_length_limit: (-1.0f64).exp(),
    })
}

/// Fixed-transmissivity ratio of `variant` against its classical baseline
/// (C for S, D for P and E).
pub fn fixed_eta_ratio(variant: Variant, m: usize, squeezing: Squeezing, eta: f64) -> f64 {
    eta * variant.port_noise_factor(m, squeezing) + (1.0 - eta)
}
