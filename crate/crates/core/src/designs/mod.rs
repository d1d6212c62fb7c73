//! The five gyroscope designs as interchangeable strategies.
//!
//! * **C**: one interferometer, laser in `a`, vacuum in `b`.
//! * **S**: as C with squeezed vacuum (Im-quadrature) in `b`.
//! * **D**: `M` interferometers fed from one laser through a balanced
//!   array, vacuum in every `b` port.
//! * **P**: as D with an independent squeezer on every `b` port, each
//!   carrying `N_s/M` photons.
//! * **E**: as D with one squeezed vacuum split `M` ways by a second
//!   balanced array, giving an entangled probe.
//!
//! Each design implements [`FogDesign`]; [`DesignRegistry`] maps names to
//! implementations so callers can pick a design at runtime.

mod circuit;
mod registry;
mod variants;

pub use circuit::Circuit;
pub use registry::DesignRegistry;
pub use variants::{ClassicalFog, DistributedFog, EntangledFog, ProductFog, SqueezedFog};

use std::fmt;
use std::str::FromStr;

use crate::analytic;
use crate::error::{FogError, Result};
use crate::gaussian::{GaussianState, HomodyneResult, Quadrature};
use crate::sagnac::Squeezing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    C,
    S,
    D,
    P,
    E,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::C, Variant::S, Variant::D, Variant::P, Variant::E];

    pub fn name(self) -> &'static str {
        match self {
            Variant::C => "C",
            Variant::S => "S",
            Variant::D => "D",
            Variant::P => "P",
            Variant::E => "E",
        }
    }

    /// Built-in strategy for this variant.
    pub fn design(self) -> &'static dyn FogDesign {
        match self {
            Variant::C => &ClassicalFog,
            Variant::S => &SqueezedFog,
            Variant::D => &DistributedFog,
            Variant::P => &ProductFog,
            Variant::E => &EntangledFog,
        }
    }

    pub fn uses_squeezing(self) -> bool {
        self.design().uses_squeezing()
    }

    pub fn is_distributed(self) -> bool {
        self.design().is_distributed()
    }

    /// Classical design the variant is compared against.
    pub fn baseline(self) -> Variant {
        if self.is_distributed() {
            Variant::D
        } else {
            Variant::C
        }
    }

    pub fn check_count(self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(FogError::invalid(
                "interferometer count M must be at least 1",
            ));
        }
        if !self.is_distributed() && m != 1 {
            return Err(FogError::invalid(format!(
                "design {self} uses a single interferometer, got M = {m}"
            )));
        }
        Ok(())
    }

    pub fn port_noise_factor(self, m: usize, squeezing: Squeezing) -> f64 {
        self.design().port_noise_factor(m, squeezing)
    }

    pub fn port_noise_reduction(self, m: usize, squeezing: Squeezing) -> f64 {
        self.design().port_noise_reduction(m, squeezing)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = FogError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(DesignRegistry::builtin().get(s)?.variant())
    }
}

/// How the squeezed photons of a configuration are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqueezedAllocation {
    SingleSource,
    PerInterferometer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConfig {
    pub variant: Variant,
    /// Interferometer count `M`.
    pub m: usize,
    /// Laser photons per interferometer, `n_v = N_v/M`.
    pub n_v: f64,
    /// Total squeezed-vacuum photon number `N_s`.
    pub n_squeezed: f64,
    pub allocation: SqueezedAllocation,
}

impl DesignConfig {
    pub fn new(variant: Variant, m: usize, n_v: f64, n_squeezed: f64) -> Result<Self> {
        variant.check_count(m)?;
        if !(n_v > 0.0) || !n_v.is_finite() {
            return Err(FogError::invalid(format!(
                "n_v must be positive, got {n_v}"
            )));
        }
        if !(n_squeezed >= 0.0) || !n_squeezed.is_finite() {
            return Err(FogError::invalid(format!(
                "n_squeezed must be finite and nonnegative, got {n_squeezed}"
            )));
        }
        if !variant.uses_squeezing() && n_squeezed != 0.0 {
            return Err(FogError::invalid(format!(
                "design {variant} has no squeezer but n_squeezed = {n_squeezed}"
            )));
        }
        let allocation = match variant {
            Variant::P => SqueezedAllocation::PerInterferometer,
            _ => SqueezedAllocation::SingleSource,
        };
        Ok(DesignConfig {
            variant,
            m,
            n_v,
            n_squeezed,
            allocation,
        })
    }

    pub fn classical(n_v: f64) -> Result<Self> {
        Self::new(Variant::C, 1, n_v, 0.0)
    }

    pub fn squeezed(n_v: f64, n_s: f64) -> Result<Self> {
        Self::new(Variant::S, 1, n_v, n_s)
    }

    pub fn distributed(m: usize, n_v: f64) -> Result<Self> {
        Self::new(Variant::D, m, n_v, 0.0)
    }

    /// Design P sharing a total budget `n_s_total` across `m` squeezers.
    pub fn product(m: usize, n_v: f64, n_s_total: f64) -> Result<Self> {
        Self::new(Variant::P, m, n_v, n_s_total)
    }

    /// Design P with `n_s_per_port` photons in every squeezer.
    pub fn product_per_mode(m: usize, n_v: f64, n_s_per_port: f64) -> Result<Self> {
        Self::new(Variant::P, m, n_v, n_s_per_port * m as f64)
    }

    pub fn entangled(m: usize, n_v: f64, n_s: f64) -> Result<Self> {
        Self::new(Variant::E, m, n_v, n_s)
    }

    pub fn design(&self) -> &'static dyn FogDesign {
        self.variant.design()
    }

    /// Total laser photons `N_v = M·n_v`.
    pub fn laser_photons(&self) -> f64 {
        self.m as f64 * self.n_v
    }

    /// Real coherent amplitude `α = √N_v`.
    pub fn alpha(&self) -> f64 {
        self.laser_photons().sqrt()
    }

    pub fn squeezing(&self) -> Squeezing {
        Squeezing::Photons(self.n_squeezed)
    }

    /// Number of physical single-mode squeezers needed.
    pub fn squeezer_count(&self) -> usize {
        match (self.variant.uses_squeezing(), self.allocation) {
            (false, _) => 0,
            (true, SqueezedAllocation::PerInterferometer) => self.m,
            (true, SqueezedAllocation::SingleSource) => 1,
        }
    }
}

/// Homodyne statistics at the read-out port plus the linearized rotation
/// estimator built from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitResult {
    pub homodyne: HomodyneResult,
    /// `d⟨b̃⟩/dφ` at the evaluation point.
    pub slope: f64,
    /// `Var(Ω̃)` in rad²/s².
    pub estimator_variance: f64,
    /// Laser photons per interferometer, kept for normalization.
    pub n_v: f64,
}

impl CircuitResult {
    /// `Var(Ω̃)·n_v/V²` with `v_scale` in the same length unit as the
    /// caller's fiber lengths.
    pub fn normalized(&self, v_scale: f64) -> f64 {
        self.estimator_variance * self.n_v / (v_scale * v_scale)
    }
}

/// One gyroscope design: its optical inputs, its circuit, and its
/// closed-form read-out statistics.
///
/// Implementors supply the design-specific parts; the circuit topology
/// (fan-out, conjugate-phase interferometers, loss, recombination) and the
/// estimator are shared.
pub trait FogDesign: Send + Sync {
    fn variant(&self) -> Variant;

    fn description(&self) -> &'static str;

    fn is_distributed(&self) -> bool;

    fn uses_squeezing(&self) -> bool;

    /// Squeezed-quadrature noise factor of the symmetric `b` combination
    /// that reaches the detector, relative to vacuum.
    fn port_noise_factor(&self, m: usize, squeezing: Squeezing) -> f64;

    /// `1 − port_noise_factor`, computed without cancellation.
    fn port_noise_reduction(&self, m: usize, squeezing: Squeezing) -> f64;

    /// Joint input state on modes `a₁…a_M, b₁…b_M` before any optics.
    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState>;

    /// Whether the `b` inputs pass through a balanced array before entering
    /// the interferometers.
    fn splits_squeezed_input(&self) -> bool {
        false
    }

    /// Read-out statistics from the closed-form input/output relations,
    /// exact at any `φ`.
    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult>;

    fn circuit(&self, config: &DesignConfig, phi: f64, eta: f64) -> Result<Circuit> {
        self.check(config)?;
        Circuit::build(config.m, self.splits_squeezed_input(), phi, eta)
    }

    /// Exact Im-quadrature statistics of the symmetric output port
    /// `b′_out,1`, obtained by propagating the Gaussian state.
    fn build_and_run(&self, config: &DesignConfig, phi: f64, eta: f64) -> Result<HomodyneResult> {
        let circuit = self.circuit(config, phi, eta)?;
        let out = circuit.run(&self.input_state(config)?)?;
        out.homodyne_stats(circuit.readout_mode(), Quadrature::Im)
    }

    /// `Var(Ω̃) = (2/T)²·Var(b̃)/(d⟨b̃⟩/dφ)²` at `φ = 0`, with the slope
    /// taken from the propagated means.
    fn estimator_variance_sim(
        &self,
        config: &DesignConfig,
        eta: f64,
        t: f64,
    ) -> Result<CircuitResult> {
        if !(t > 0.0) {
            return Err(FogError::invalid(format!(
                "time factor must be positive, got {t}"
            )));
        }
        let circuit = self.circuit(config, 0.0, eta)?;
        let input = self.input_state(config)?;
        let homodyne = circuit
            .run(&input)?
            .homodyne_stats(circuit.readout_mode(), Quadrature::Im)?;
        let slope = circuit.readout_slope(&input)?;
        if slope == 0.0 {
            return Err(FogError::DegenerateConfiguration(
                "read-out mean does not depend on the phase (zero slope)".into(),
            ));
        }
        Ok(CircuitResult {
            homodyne,
            slope,
            estimator_variance: 4.0 / (t * t) * homodyne.variance / (slope * slope),
            n_v: config.n_v,
        })
    }

    /// Small-angle closed form `(ηr + 1 − η)/(T²ηMn_v)`.
    fn analytic_estimator_variance(&self, config: &DesignConfig, eta: f64, t: f64) -> Result<f64> {
        self.check(config)?;
        analytic::design_variance(
            self.variant(),
            t,
            eta,
            config.n_v,
            config.m,
            config.squeezing(),
        )
    }

    fn check(&self, config: &DesignConfig) -> Result<()> {
        if config.variant != self.variant() {
            return Err(FogError::invalid(format!(
                "configuration for design {} passed to design {}",
                config.variant,
                self.variant()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for dyn FogDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FogDesign({})", self.variant())
    }
}

/// Closed form for a single conjugate-phase interferometer
/// with product inputs: coherent `α` in `a`, a zero-mean `b` whose
/// Im-quadrature variance is `b_variance`.
pub(crate) fn single_interferometer_stats(
    alpha: f64,
    b_variance: f64,
    phi: f64,
    eta: f64,
) -> HomodyneResult {
    let (s, c) = phi.sin_cos();
    HomodyneResult {
        mean: eta.sqrt() * s * alpha,
        variance: eta * (s * s * 0.25 + c * c * b_variance) + (1.0 - eta) * 0.25,
    }
}

/// Read-out statistics for the distributed designs D, P and E from their
/// closed forms.
pub fn distributed_homodyne_closed_form(
    config: &DesignConfig,
    phi: f64,
    eta: f64,
) -> Result<HomodyneResult> {
    if !config.variant.is_distributed() {
        return Err(FogError::invalid(format!(
            "design {} is not distributed; use the single-interferometer closed form",
            config.variant
        )));
    }
    config.design().closed_form_homodyne(config, phi, eta)
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(FogError::invalid(format!(
            "transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    Ok(())
}
