use super::{check_eta, single_interferometer_stats, DesignConfig, FogDesign, Variant};
use crate::error::Result;
use crate::gaussian::{GaussianState, HomodyneResult, Quadrature, VACUUM_VARIANCE};
use crate::sagnac::Squeezing;

/// Coherent `α` in `a′₁` and vacuum in `a′₂…a′_M`.
fn laser_inputs(config: &DesignConfig) -> Result<GaussianState> {
    let laser = GaussianState::coherent(config.alpha(), 0.0);
    if config.m == 1 {
        Ok(laser)
    } else {
        Ok(laser.tensor(&GaussianState::vacuum(config.m - 1)?))
    }
}

fn squeezed(n_s: f64) -> Result<GaussianState> {
    GaussianState::squeezed_vacuum(n_s, Quadrature::Im)
}

/// Separable-input read-out: the recombined port sees the average of the
/// per-interferometer `b` variances.
fn separable_stats(alpha: f64, b_variances: &[f64], phi: f64, eta: f64) -> HomodyneResult {
    let (s, c) = phi.sin_cos();
    let m = b_variances.len() as f64;
    let avg = b_variances.iter().sum::<f64>() / m;
    HomodyneResult {
        mean: eta.sqrt() * s * alpha,
        variance: eta * (s * s * VACUUM_VARIANCE + c * c * avg) + (1.0 - eta) * VACUUM_VARIANCE,
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalFog;

impl FogDesign for ClassicalFog {
    fn variant(&self) -> Variant {
        Variant::C
    }

    fn description(&self) -> &'static str {
        "classical FOG: laser and vacuum into one interferometer"
    }

    fn is_distributed(&self) -> bool {
        false
    }

    fn uses_squeezing(&self) -> bool {
        false
    }

    fn port_noise_factor(&self, _m: usize, _squeezing: Squeezing) -> f64 {
        1.0
    }

    fn port_noise_reduction(&self, _m: usize, _squeezing: Squeezing) -> f64 {
        0.0
    }

    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState> {
        self.check(config)?;
        Ok(laser_inputs(config)?.tensor(&GaussianState::vacuum(1)?))
    }

    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult> {
        self.check(config)?;
        check_eta(eta)?;
        Ok(single_interferometer_stats(
            config.alpha(),
            VACUUM_VARIANCE,
            phi,
            eta,
        ))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SqueezedFog;

impl FogDesign for SqueezedFog {
    fn variant(&self) -> Variant {
        Variant::S
    }

    fn description(&self) -> &'static str {
        "squeezing-enhanced FOG: Im-squeezed vacuum replaces the vacuum input"
    }

    fn is_distributed(&self) -> bool {
        false
    }

    fn uses_squeezing(&self) -> bool {
        true
    }

    fn port_noise_factor(&self, _m: usize, squeezing: Squeezing) -> f64 {
        squeezing.noise_factor()
    }

    fn port_noise_reduction(&self, _m: usize, squeezing: Squeezing) -> f64 {
        squeezing.noise_reduction()
    }

    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState> {
        self.check(config)?;
        Ok(laser_inputs(config)?.tensor(&squeezed(config.n_squeezed)?))
    }

    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult> {
        self.check(config)?;
        check_eta(eta)?;
        let r = config.squeezing().noise_factor();
        Ok(single_interferometer_stats(
            config.alpha(),
            r * VACUUM_VARIANCE,
            phi,
            eta,
        ))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DistributedFog;

impl FogDesign for DistributedFog {
    fn variant(&self) -> Variant {
        Variant::D
    }

    fn description(&self) -> &'static str {
        "distributed classical FOG: one laser split over M interferometers"
    }

    fn is_distributed(&self) -> bool {
        true
    }

    fn uses_squeezing(&self) -> bool {
        false
    }

    fn port_noise_factor(&self, _m: usize, _squeezing: Squeezing) -> f64 {
        1.0
    }

    fn port_noise_reduction(&self, _m: usize, _squeezing: Squeezing) -> f64 {
        0.0
    }

    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState> {
        self.check(config)?;
        Ok(laser_inputs(config)?.tensor(&GaussianState::vacuum(config.m)?))
    }

    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult> {
        self.check(config)?;
        check_eta(eta)?;
        let vars = vec![VACUUM_VARIANCE; config.m];
        Ok(separable_stats(config.alpha(), &vars, phi, eta))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProductFog;

impl FogDesign for ProductFog {
    fn variant(&self) -> Variant {
        Variant::P
    }

    fn description(&self) -> &'static str {
        "product-state FOG: an independent squeezer on each of M interferometers"
    }

    fn is_distributed(&self) -> bool {
        true
    }

    fn uses_squeezing(&self) -> bool {
        true
    }

    fn port_noise_factor(&self, m: usize, squeezing: Squeezing) -> f64 {
        squeezing.per_port(m).noise_factor()
    }

    fn port_noise_reduction(&self, m: usize, squeezing: Squeezing) -> f64 {
        squeezing.per_port(m).noise_reduction()
    }

    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState> {
        self.check(config)?;
        let per_port = squeezed(config.n_squeezed / config.m as f64)?;
        let mut state = laser_inputs(config)?;
        for _ in 0..config.m {
            state = state.tensor(&per_port);
        }
        Ok(state)
    }

    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult> {
        self.check(config)?;
        check_eta(eta)?;
        let r = self.port_noise_factor(config.m, config.squeezing());
        let vars = vec![r * VACUUM_VARIANCE; config.m];
        Ok(separable_stats(config.alpha(), &vars, phi, eta))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EntangledFog;

impl FogDesign for EntangledFog {
    fn variant(&self) -> Variant {
        Variant::E
    }

    fn description(&self) -> &'static str {
        "entanglement-enhanced FOG: one squeezed vacuum split over M interferometers"
    }

    fn is_distributed(&self) -> bool {
        true
    }

    fn uses_squeezing(&self) -> bool {
        true
    }

    fn splits_squeezed_input(&self) -> bool {
        true
    }

    fn port_noise_factor(&self, _m: usize, squeezing: Squeezing) -> f64 {
        squeezing.noise_factor()
    }

    fn port_noise_reduction(&self, _m: usize, squeezing: Squeezing) -> f64 {
        squeezing.noise_reduction()
    }

    fn input_state(&self, config: &DesignConfig) -> Result<GaussianState> {
        self.check(config)?;
        let mut state = laser_inputs(config)?.tensor(&squeezed(config.n_squeezed)?);
        if config.m > 1 {
            state = state.tensor(&GaussianState::vacuum(config.m - 1)?);
        }
        Ok(state)
    }

    /// The recombined port obeys the single-interferometer relations with
    /// the undivided squeezed mode as its `b` input.
    fn closed_form_homodyne(
        &self,
        config: &DesignConfig,
        phi: f64,
        eta: f64,
    ) -> Result<HomodyneResult> {
        self.check(config)?;
        check_eta(eta)?;
        let r = config.squeezing().noise_factor();
        Ok(single_interferometer_stats(
            config.alpha(),
            r * VACUUM_VARIANCE,
            phi,
            eta,
        ))
    }
}
