//! Rotating fiber coil: Sagnac phase, fiber transmissivity, the time factor
//! `T` that converts conjugate phase into angular velocity, and squeezing
//! unit conversions.
//!
//! Fiber lengths are in kilometres throughout; they are converted to metres
//! only inside [`GyroGeometry::time_factor`]. Consequently the length scale
//! `V = L/T` is reported in km/s, which keeps every normalized variance
//! `Var · n_v / V²` consistent with lengths given in km.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{FogError, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const METERS_PER_KM: f64 = 1000.0;

/// Loss coefficient used in the worked examples (dB/km at 1550 nm).
pub const DEFAULT_LOSS_DB_PER_KM: f64 = 0.5;
pub const DEFAULT_WAVELENGTH_M: f64 = 1550e-9;
pub const DEFAULT_RADIUS_M: f64 = 0.05;

/// First-order validity bound on `r·|Ω|/c`.
pub const REGIME_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyroGeometry {
    /// Optical angular frequency (rad/s).
    pub omega: f64,
    /// Coil radius (m).
    pub radius: f64,
    /// Projected single-loop area `A·n` (m²).
    pub area_projection: f64,
    pub c: f64,
}

impl Default for GyroGeometry {
    fn default() -> Self {
        GyroGeometry::from_wavelength(DEFAULT_WAVELENGTH_M, DEFAULT_RADIUS_M)
            .expect("default geometry is valid")
    }
}

/// Sagnac phase together with a first-order regime flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagnacPhase {
    pub radians: f64,
    pub first_order_valid: bool,
}

impl GyroGeometry {
    pub fn new(omega: f64, radius: f64, area_projection: f64) -> Result<Self> {
        for (name, v) in [
            ("omega", omega),
            ("radius", radius),
            ("area_projection", area_projection),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FogError::invalid(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(GyroGeometry {
            omega,
            radius,
            area_projection,
            c: SPEED_OF_LIGHT,
        })
    }

    /// Circular loops (`A·n = πr²`) at the given vacuum wavelength.
    pub fn from_wavelength(wavelength_m: f64, radius: f64) -> Result<Self> {
        if !(wavelength_m > 0.0) {
            return Err(FogError::invalid(format!(
                "wavelength must be positive, got {wavelength_m}"
            )));
        }
        Self::new(
            2.0 * PI * SPEED_OF_LIGHT / wavelength_m,
            radius,
            PI * radius * radius,
        )
    }

    /// Number of loops `m = L/(2πr)` for a coil of `length_km`.
    pub fn loops(&self, length_km: f64) -> f64 {
        length_km * METERS_PER_KM / (2.0 * PI * self.radius)
    }

    /// `Δφ = 4ω m (A·n) Ω / c²`.
    pub fn sagnac_phase(&self, length_km: f64, rotation: f64) -> SagnacPhase {
        let radians = 4.0 * self.omega * self.loops(length_km) * self.area_projection * rotation
            / (self.c * self.c);
        let first_order_valid = self.in_first_order_regime(rotation);
        if !first_order_valid {
            log::warn!(
                "r|Ω|/c = {:e} exceeds {REGIME_LIMIT:e}; Sagnac phase is only first-order accurate",
                self.radius * rotation.abs() / self.c
            );
        }
        SagnacPhase {
            radians,
            first_order_valid,
        }
    }

    /// Conjugate phase `φ = Δφ/2` seen by each arm of the equivalent
    /// interferometer.
    pub fn conjugate_phase(&self, length_km: f64, rotation: f64) -> f64 {
        0.5 * self.sagnac_phase(length_km, rotation).radians
    }

    pub fn in_first_order_regime(&self, rotation: f64) -> bool {
        self.radius * rotation.abs() / self.c <= REGIME_LIMIT
    }

    /// `T = 4ωL(A·n)/(2πrc²)` in seconds, so that `Ω = 2φ/T`.
    pub fn time_factor(&self, length_km: f64) -> f64 {
        4.0 * self.omega * length_km * METERS_PER_KM * self.area_projection
            / (2.0 * PI * self.radius * self.c * self.c)
    }

    /// `V = L/T = πrc²/(2ω(A·n))` in km/s; independent of length.
    pub fn v_scale(&self) -> f64 {
        PI * self.radius * self.c * self.c
            / (2.0 * self.omega * self.area_projection * METERS_PER_KM)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSpec {
    /// Loss coefficient (dB/km).
    pub b: f64,
    /// Total length (km).
    pub length_km: f64,
}

impl FiberSpec {
    pub fn new(b: f64, length_km: f64) -> Result<Self> {
        if !(b > 0.0) || !(length_km > 0.0) {
            return Err(FogError::invalid(format!(
                "fiber needs b > 0 and L > 0, got b = {b}, L = {length_km}"
            )));
        }
        Ok(FiberSpec { b, length_km })
    }

    pub fn transmissivity(&self) -> f64 {
        transmissivity(self.b, self.length_km)
    }
}

/// `η = 10^{−bL/10}`; accepts `L = 0`.
pub fn transmissivity(b: f64, length_km: f64) -> f64 {
    10f64.powf(-b * length_km / 10.0)
}

/// Loss exponent `c = b·ln(10)/10` so that `η = e^{−cL}`.
pub fn loss_rate(b: f64) -> f64 {
    b * LN_10 / 10.0
}

/// `N_s = sinh²(σ ln(10)/20)`.
pub fn db_to_photons(sigma_db: f64) -> Result<f64> {
    if !(sigma_db >= 0.0) || !sigma_db.is_finite() {
        return Err(FogError::invalid(format!(
            "squeezing in dB must be finite and nonnegative, got {sigma_db}"
        )));
    }
    Ok((sigma_db * LN_10 / 20.0).sinh().powi(2))
}

pub fn photons_to_db(n_s: f64) -> Result<f64> {
    if !(n_s >= 0.0) || !n_s.is_finite() {
        return Err(FogError::invalid(format!(
            "photon number must be finite and nonnegative, got {n_s}"
        )));
    }
    Ok(20.0 / LN_10 * n_s.sqrt().asinh())
}

/// Amount of single-mode squeezing, with an explicit infinite limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing {
    /// Mean squeezed-vacuum photon number.
    Photons(f64),
    /// Noise reduction of the squeezed quadrature, in dB.
    Decibels(f64),
    Infinite,
}

impl Squeezing {
    pub const NONE: Squeezing = Squeezing::Photons(0.0);

    pub fn photons(n_s: f64) -> Result<Self> {
        if !(n_s >= 0.0) || !n_s.is_finite() {
            return Err(FogError::invalid(format!(
                "squeezed photon number must be finite and nonnegative, got {n_s}"
            )));
        }
        Ok(Squeezing::Photons(n_s))
    }

    pub fn decibels(sigma_db: f64) -> Result<Self> {
        if !(sigma_db >= 0.0) || !sigma_db.is_finite() {
            return Err(FogError::invalid(format!(
                "squeezing in dB must be finite and nonnegative, got {sigma_db}"
            )));
        }
        Ok(Squeezing::Decibels(sigma_db))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Squeezing::Infinite)
    }

    /// Mean photon number; `+∞` in the infinite limit.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            Squeezing::Photons(n) => n,
            Squeezing::Decibels(s) => (s * LN_10 / 20.0).sinh().powi(2),
            Squeezing::Infinite => f64::INFINITY,
        }
    }

    pub fn db(&self) -> f64 {
        match *self {
            Squeezing::Photons(n) => 20.0 / LN_10 * n.sqrt().asinh(),
            Squeezing::Decibels(s) => s,
            Squeezing::Infinite => f64::INFINITY,
        }
    }

    /// Squeezed-quadrature variance relative to vacuum,
    /// `r = 1/(√(1+N_s)+√N_s)² = 10^{−σ/10}`; zero in the infinite limit.
    pub fn noise_factor(&self) -> f64 {
        match *self {
            Squeezing::Photons(n) => {
                let g = (1.0 + n).sqrt() + n.sqrt();
                1.0 / (g * g)
            }
            Squeezing::Decibels(s) => 10f64.powf(-s / 10.0),
            Squeezing::Infinite => 0.0,
        }
    }

    /// `1 − r`, evaluated without cancellation at weak squeezing.
    pub fn noise_reduction(&self) -> f64 {
        match *self {
            Squeezing::Photons(0.0) => 0.0,
            Squeezing::Photons(n) => 2.0 / (1.0 + (1.0 + 1.0 / n).sqrt()),
            Squeezing::Decibels(s) => -(-s * LN_10 / 10.0).exp_m1(),
            Squeezing::Infinite => 1.0,
        }
    }

    /// Equal share of the photon budget across `m` ports.
    pub fn per_port(&self, m: usize) -> Squeezing {
        match *self {
            Squeezing::Infinite => Squeezing::Infinite,
            Squeezing::Photons(n) => Squeezing::Photons(n / m as f64),
            Squeezing::Decibels(_) => Squeezing::Photons(self.mean_photons() / m as f64),
        }
    }

    /// The same per-port squeezing replicated across `m` ports.
    pub fn scaled(&self, m: usize) -> Squeezing {
        match *self {
            Squeezing::Infinite => Squeezing::Infinite,
            _ => Squeezing::Photons(self.mean_photons() * m as f64),
        }
    }
}

impl fmt::Display for Squeezing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Squeezing::Photons(n) => write!(f, "{n} photons"),
            Squeezing::Decibels(s) => write!(f, "{s} dB"),
            Squeezing::Infinite => write!(f, "inf dB"),
        }
    }
}

/// Parses a squeezing level in dB; `inf` selects the infinite limit.
impl FromStr for Squeezing {
    type Err = FogError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Squeezing::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| FogError::invalid(format!("cannot parse squeezing level {s:?}")))?;
        Squeezing::decibels(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn spec_geometry() -> GyroGeometry {
        let r = 0.05;
        GyroGeometry::new(1.2153e15, r, PI * r * r).unwrap()
    }

    #[test]
    fn sagnac_phase_basic_scaling() {
        let g = spec_geometry();
        assert_eq!(g.sagnac_phase(1.0, 0.0).radians, 0.0);
        let one = g.sagnac_phase(1.0, 1e-5).radians;
        let two = g.sagnac_phase(2.0, 1e-5).radians;
        assert_relative_eq!(two, 2.0 * one, max_relative = 1e-15);
        assert_relative_eq!(
            g.sagnac_phase(1.0, -1e-5).radians,
            -one,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sagnac_phase_two_routes_agree() {
        let g = spec_geometry();
        let rot = 1e-5;
        let direct = g.sagnac_phase(1.0, rot).radians;
        let via_t = g.time_factor(1.0) * rot;
        assert_relative_eq!(direct, via_t, max_relative = 1e-12);
        // Ω = 2φ/T with φ the conjugate phase
        for &(l, w) in &[(0.3, 2e-3), (17.372, -4.1e-7), (40.0, 0.9)] {
            assert_relative_eq!(
                2.0 * g.conjugate_phase(l, w) / g.time_factor(l),
                w,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn regime_flag() {
        let g = spec_geometry();
        assert!(g.sagnac_phase(1.0, 1.0).first_order_valid);
        // r|Ω|/c = 1e-2
        let fast = SPEED_OF_LIGHT * 1e-2 / g.radius;
        assert!(!g.sagnac_phase(1.0, fast).first_order_valid);
    }

    #[test]
    fn time_factor_and_v_scale() {
        let g = GyroGeometry::default();
        assert_relative_eq!(g.omega, 1.2153e15, max_relative = 1e-4);
        assert_relative_eq!(
            g.time_factor(3.0),
            3.0 * g.time_factor(1.0),
            max_relative = 1e-15
        );
        for l in [0.5, 5.0, 50.0] {
            assert_relative_eq!(l / g.time_factor(l), g.v_scale(), max_relative = 1e-14);
        }
    }

    #[test]
    fn transmissivity_examples() {
        assert_eq!(transmissivity(0.5, 0.0), 1.0);
        assert_relative_eq!(transmissivity(0.5, 20.0), 0.1, max_relative = 1e-15);
        // L = 20/(ln10·b) gives exactly e^{-2}
        let l_opt = 20.0 / (LN_10 * 0.5);
        assert_relative_eq!(
            transmissivity(0.5, l_opt),
            (-2.0f64).exp(),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(transmissivity(0.5, 17.372), 0.1353, epsilon = 1e-4);
        assert_relative_eq!(
            FiberSpec::new(0.5, 20.0).unwrap().transmissivity(),
            0.1,
            max_relative = 1e-15
        );
        assert!(FiberSpec::new(0.5, 0.0).is_err());
        assert!(FiberSpec::new(0.0, 1.0).is_err());
    }

    #[test]
    fn transmissivity_monotone() {
        let mut prev = 1.0;
        for i in 1..100 {
            let eta = transmissivity(0.5, i as f64 * 0.4);
            assert!(eta < prev);
            prev = eta;
        }
        assert!(transmissivity(0.6, 3.0) < transmissivity(0.5, 3.0));
    }

    #[test]
    fn db_conversion_examples() {
        assert_eq!(db_to_photons(0.0).unwrap(), 0.0);
        let n10 = db_to_photons(10.0).unwrap();
        assert_abs_diff_eq!(n10, 2.0250, epsilon = 1e-4);
        let g = ((1.0 + n10).sqrt() + n10.sqrt()).powi(2);
        assert_relative_eq!(g, 10.0, max_relative = 1e-13);
        assert_abs_diff_eq!(db_to_photons(7.66).unwrap(), 1.0, epsilon = 2e-3);
        assert!(db_to_photons(-1.0).is_err());
        assert!(photons_to_db(-1.0).is_err());
    }

    #[test]
    fn db_conversion_monotone_convex_roundtrip() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.2).collect();
        let ys: Vec<f64> = xs.iter().map(|&s| db_to_photons(s).unwrap()).collect();
        for w in ys.windows(3) {
            assert!(w[1] > w[0]);
            assert!(w[2] - 2.0 * w[1] + w[0] > 0.0);
        }
        for (&s, &n) in xs.iter().zip(&ys) {
            assert_abs_diff_eq!(photons_to_db(n).unwrap(), s, epsilon = 1e-12);
        }
    }

    #[test]
    fn squeezing_representations_agree() {
        let by_db = Squeezing::decibels(10.0).unwrap();
        let by_n = Squeezing::photons(db_to_photons(10.0).unwrap()).unwrap();
        assert_relative_eq!(by_db.noise_factor(), 0.1, max_relative = 1e-15);
        assert_relative_eq!(by_n.noise_factor(), 0.1, max_relative = 1e-13);
        assert_relative_eq!(by_n.noise_reduction(), 0.9, max_relative = 1e-13);
        assert_relative_eq!(by_db.noise_reduction(), 0.9, max_relative = 1e-15);
        assert_eq!(Squeezing::Infinite.noise_factor(), 0.0);
        assert_eq!(Squeezing::NONE.noise_reduction(), 0.0);
        let tiny = Squeezing::photons(1e-12).unwrap();
        assert_relative_eq!(tiny.noise_reduction(), 2e-6, max_relative = 1e-5);
        assert_eq!("inf".parse::<Squeezing>().unwrap(), Squeezing::Infinite);
        assert_eq!(
            "15".parse::<Squeezing>().unwrap(),
            Squeezing::Decibels(15.0)
        );
        assert!("-3".parse::<Squeezing>().is_err());
        assert!("abc".parse::<Squeezing>().is_err());
        assert_relative_eq!(
            by_db.per_port(4).mean_photons(),
            by_db.mean_photons() / 4.0,
            max_relative = 1e-15
        );
    }
}
