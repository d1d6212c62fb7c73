use nalgebra::{Complex, DMatrix, DVector};

use super::check_eta;
use crate::error::Result;
use crate::gaussian::{quadrature_map, GaussianState, SymplecticTransform};

/// Distributed conjugate-phase circuit on `2M` modes.
///
/// Mode `j` is `a_j` and mode `M + j` is `b_j`. Stages, in order: the laser
/// fan-out (inverse balanced array on the `a` modes, so port 1 feeds every
/// interferometer equally), optionally the same fan-out on the `b` modes,
/// `U(φ)` on every `(a_j, b_j)` pair, pure loss `η` on every mode, and the
/// balanced recombination of the `b` outputs. The detector reads `b′₁`.
#[derive(Debug, Clone)]
pub struct Circuit {
    m: usize,
    phi: f64,
    stages: Vec<Stage>,
}

#[derive(Debug, Clone)]
enum Stage {
    Passive(SymplecticTransform),
    Phase(SymplecticTransform),
    Loss(f64),
}

impl Circuit {
    pub(crate) fn build(m: usize, split_b: bool, phi: f64, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        let n = 2 * m;
        let a_modes: Vec<usize> = (0..m).collect();
        let b_modes: Vec<usize> = (m..n).collect();
        let array = SymplecticTransform::balanced_splitter_array(m)?;
        let fan_out = array.inverse();

        let mut stages = vec![Stage::Passive(fan_out.embed(n, &a_modes)?)];
        if split_b {
            stages.push(Stage::Passive(fan_out.embed(n, &b_modes)?));
        }
        let unitary = SymplecticTransform::conjugate_phase(phi);
        stages.push(Stage::Phase(SymplecticTransform::new(pairwise(
            m,
            unitary.matrix(),
        ))?));
        stages.push(Stage::Loss(eta));
        stages.push(Stage::Passive(array.embed(n, &b_modes)?));
        Ok(Circuit { m, phi, stages })
    }

    pub fn interferometers(&self) -> usize {
        self.m
    }

    pub fn n_modes(&self) -> usize {
        2 * self.m
    }

    pub fn readout_mode(&self) -> usize {
        self.m
    }

    pub fn run(&self, input: &GaussianState) -> Result<GaussianState> {
        let all: Vec<usize> = (0..self.n_modes()).collect();
        let mut state = input.clone();
        for stage in &self.stages {
            state = match stage {
                Stage::Passive(t) | Stage::Phase(t) => state.apply(t)?,
                Stage::Loss(eta) => state.pure_loss(*eta, &all)?,
            };
        }
        Ok(state)
    }

    /// `d(mean)/dφ` of the output. Every stage is linear in the means, so
    /// the derivative passes `dU/dφ` through the phase stage and the
    /// ordinary maps through the rest.
    pub fn mean_derivative(&self, input: &GaussianState) -> Result<DVector<f64>> {
        let mut mean = input.mean().clone();
        let d_block = phase_derivative(self.phi);
        for stage in &self.stages {
            mean = match stage {
                Stage::Passive(t) => t.matrix() * mean,
                Stage::Phase(_) => pairwise(self.m, &d_block) * mean,
                Stage::Loss(eta) => mean * eta.sqrt(),
            };
        }
        Ok(mean)
    }

    /// `d⟨Im b′₁⟩/dφ`.
    pub fn readout_slope(&self, input: &GaussianState) -> Result<f64> {
        Ok(self.mean_derivative(input)?[2 * self.readout_mode() + 1])
    }
}

/// Quadrature map of `dU/dφ = [[−sin φ, −i cos φ], [i cos φ, sin φ]]`.
fn phase_derivative(phi: f64) -> DMatrix<f64> {
    let (s, c) = phi.sin_cos();
    let du = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex::new(-s, 0.0),
            Complex::new(0.0, -c),
            Complex::new(0.0, c),
            Complex::new(s, 0.0),
        ],
    );
    quadrature_map(&du)
}

/// Places a 4×4 two-mode block on every `(a_j, b_j)` pair of a `2m`-mode
/// system.
fn pairwise(m: usize, block: &DMatrix<f64>) -> DMatrix<f64> {
    let n = 2 * m;
    let mut full = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..m {
        let ports = [j, m + j];
        for (p, &mp) in ports.iter().enumerate() {
            for (q, &mq) in ports.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        full[(2 * mp + a, 2 * mq + b)] = block[(2 * p + a, 2 * q + b)];
                    }
                }
            }
        }
    }
    full
}
