//! Gaussian states of optical modes and the operations applied to them.
//!
//! Quadratures are ordered per mode as `(Re[a₁], Im[a₁], Re[a₂], Im[a₂], …)`
//! with `a = Re[a] + i·Im[a]` and `[Re[a], Im[a]] = i/2`, so the vacuum has
//! variance 1/4 in every quadrature. A state is fully described by its
//! first-moment vector and its symmetric covariance matrix.
//!
//! Passive linear optics acts on annihilation operators through a unitary
//! `U`; writing `U = X + iY`, the induced map on quadratures is built from
//! the 2×2 blocks `[[X, −Y], [Y, X]]`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{FogError, Result};

/// Quadrature variance of the vacuum.
pub const VACUUM_VARIANCE: f64 = 0.25;

const SYMMETRY_TOL: f64 = 1e-12;
const PHYSICALITY_TOL: f64 = 1e-10;
const FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    Re,
    Im,
}

impl Quadrature {
    fn offset(self) -> usize {
        match self {
            Quadrature::Re => 0,
            Quadrature::Im => 1,
        }
    }
}

/// Mean and variance of a quantum-noise-limited homodyne outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneResult {
    pub mean: f64,
    pub variance: f64,
}

/// Block-diagonal symplectic form `⊕ [[0, 1], [−1, 0]]` for `n` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Real quadrature map induced by a mode-space matrix acting on
/// annihilation operators. No unitarity check.
pub fn quadrature_map(u: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let (rows, cols) = u.shape();
    let mut s = DMatrix::zeros(2 * rows, 2 * cols);
    for j in 0..rows {
        for k in 0..cols {
            let c = u[(j, k)];
            s[(2 * j, 2 * k)] = c.re;
            s[(2 * j, 2 * k + 1)] = -c.im;
            s[(2 * j + 1, 2 * k)] = c.im;
            s[(2 * j + 1, 2 * k + 1)] = c.re;
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry and the uncertainty principle before accepting.
    pub fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(FogError::invalid(format!(
                "mean vector length {dim} is not a positive even number"
            )));
        }
        if cov.shape() != (dim, dim) {
            return Err(FogError::invalid(format!(
                "covariance shape {:?} does not match mean length {dim}",
                cov.shape()
            )));
        }
        let state = GaussianState { mean, cov };
        let asym = state.max_asymmetry();
        if asym > SYMMETRY_TOL {
            return Err(FogError::invalid(format!(
                "covariance is not symmetric (max |V - Vᵀ| = {asym:e})"
            )));
        }
        if !state.is_physical() {
            return Err(FogError::invalid(
                "covariance violates the uncertainty principle",
            ));
        }
        Ok(state)
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(FogError::invalid("vacuum state needs at least one mode"));
        }
        Ok(GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
        })
    }

    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Self {
        GaussianState {
            mean: DVector::from_vec(vec![alpha_re, alpha_im]),
            cov: DMatrix::identity(2, 2) * VACUUM_VARIANCE,
        }
    }

    /// Single-mode squeezed vacuum with mean photon number `n_s`, squeezed
    /// along `axis`.
    ///
    /// With `ν = √n_s` and `μ = √(1 + n_s)` the squeezed quadrature has
    /// variance `(μ − ν)²/4` and the conjugate one `(μ + ν)²/4`.
    pub fn squeezed_vacuum(n_s: f64, axis: Quadrature) -> Result<Self> {
        if !(n_s >= 0.0) || !n_s.is_finite() {
            return Err(FogError::invalid(format!(
                "squeezed photon number must be finite and nonnegative, got {n_s}"
            )));
        }
        let anti = (1.0 + n_s).sqrt() + n_s.sqrt();
        let anti_var = anti * anti * VACUUM_VARIANCE;
        // (μ − ν)² = 1/(μ + ν)², free of cancellation
        let squeezed_var = VACUUM_VARIANCE / (anti * anti);
        let mut cov = DMatrix::zeros(2, 2);
        let s = axis.offset();
        cov[(s, s)] = squeezed_var;
        cov[(1 - s, 1 - s)] = anti_var;
        Ok(GaussianState {
            mean: DVector::zeros(2),
            cov,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Joint state of two uncorrelated subsystems, `self` first.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// `⟨a†a⟩ = ⟨Re[a]²⟩ + ⟨Im[a]²⟩ − 1/2` for mode `mode`.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok(self.cov[(x, x)] + self.cov[(p, p)] + self.mean[x].powi(2) + self.mean[p].powi(2) - 0.5)
    }

    fn max_asymmetry(&self) -> f64 {
        (&self.cov - self.cov.transpose()).amax()
    }

    /// Symplectic eigenvalues in ascending order, one per mode.
    ///
    /// Computed as the square roots of the eigenvalues of `GᵀG` with
    /// `G = V^{1/2} Ω V^{1/2}`, which is similar to `−(ΩV)²`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes();
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let root_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
        let root = &eig.eigenvectors * root_diag * eig.eigenvectors.transpose();
        let g = &root * symplectic_form(n) * &root;
        let k = g.transpose() * &g;
        let k = (&k + k.transpose()) * 0.5;
        let mut nu2: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
        nu2.sort_by(f64::total_cmp);
        nu2.chunks(2)
            .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
            .collect()
    }

    /// Every symplectic eigenvalue is at least the vacuum variance (up to
    /// 1e-10).
    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues()
            .iter()
            .all(|&nu| nu >= VACUUM_VARIANCE - PHYSICALITY_TOL)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(FogError::invalid(format!(
                "mode index {mode} out of range for a {}-mode state",
                self.n_modes()
            )));
        }
        Ok(())
    }

    /// Applies a transform spanning all modes.
    pub fn apply(&self, transform: &SymplecticTransform) -> Result<GaussianState> {
        if transform.n_modes() != self.n_modes() {
            return Err(FogError::invalid(format!(
                "transform acts on {} modes but the state has {}",
                transform.n_modes(),
                self.n_modes()
            )));
        }
        let s = transform.matrix();
        Ok(GaussianState {
            mean: s * &self.mean,
            cov: s * &self.cov * s.transpose(),
        })
    }

    /// Applies `transform` to the listed modes (in the transform's port order).
    pub fn apply_on_modes(
        &self,
        transform: &SymplecticTransform,
        modes: &[usize],
    ) -> Result<GaussianState> {
        self.apply(&transform.embed(self.n_modes(), modes)?)
    }

    /// Pure-loss channel of transmissivity `eta` on `modes`.
    ///
    /// Affected means scale by `√η`, affected covariance blocks become
    /// `η·V + (1 − η)/4·I`, and cross-blocks between an affected and an
    /// unaffected mode scale by `√η`.
    pub fn pure_loss(&self, eta: f64, modes: &[usize]) -> Result<GaussianState> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(FogError::invalid(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        let dim = self.mean.len();
        let mut scale = DVector::from_element(dim, 1.0);
        let mut affected = vec![false; dim];
        for &m in modes {
            self.check_mode(m)?;
            for q in [2 * m, 2 * m + 1] {
                scale[q] = eta.sqrt();
                affected[q] = true;
            }
        }
        let mean = self.mean.component_mul(&scale);
        let mut cov = DMatrix::from_fn(dim, dim, |i, j| scale[i] * self.cov[(i, j)] * scale[j]);
        for (q, hit) in affected.into_iter().enumerate() {
            if hit {
                cov[(q, q)] += (1.0 - eta) * VACUUM_VARIANCE;
            }
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn homodyne_stats(&self, mode: usize, quadrature: Quadrature) -> Result<HomodyneResult> {
        self.check_mode(mode)?;
        let q = 2 * mode + quadrature.offset();
        Ok(HomodyneResult {
            mean: self.mean[q],
            variance: self.cov[(q, q)],
        })
    }

    /// Draws `count` homodyne outcomes from the exact normal law.
    ///
    /// Uses a ChaCha8 stream seeded with `seed`, so the output is a pure
    /// function of its arguments.
    pub fn sample_homodyne(
        &self,
        mode: usize,
        quadrature: Quadrature,
        count: usize,
        seed: u64,
    ) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(FogError::invalid("sample count must be at least 1"));
        }
        let stats = self.homodyne_stats(mode, quadrature)?;
        let normal = Normal::new(stats.mean, stats.variance.sqrt())
            .map_err(|e| FogError::invalid(format!("homodyne law: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count).map(|_| normal.sample(&mut rng)).collect())
    }
}

/// Linear map on quadratures that preserves the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(FogError::invalid(format!(
                "symplectic matrix must be square with even dimension, got {r}x{c}"
            )));
        }
        let t = SymplecticTransform { matrix };
        let err = t.form_error();
        if err > FORM_TOL {
            return Err(FogError::invalid(format!(
                "matrix does not preserve the symplectic form (error {err:e})"
            )));
        }
        Ok(t)
    }

    /// Passive transform from a unitary acting on annihilation operators.
    pub fn from_unitary(u: &DMatrix<Complex<f64>>) -> Result<Self> {
        if !u.is_square() {
            return Err(FogError::invalid("mode matrix must be square"));
        }
        Self::new(quadrature_map(u))
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticTransform {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Two-mode conjugate-phase interferometer
    /// `U(φ) = [[cos φ, −i sin φ], [i sin φ, −cos φ]]`.
    pub fn conjugate_phase(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(c, 0.0),
                Complex::new(0.0, -s),
                Complex::new(0.0, s),
                Complex::new(-c, 0.0),
            ],
        );
        SymplecticTransform {
            matrix: quadrature_map(&u),
        }
    }

    /// Balanced `m`-port array: a real orthogonal mode matrix whose first
    /// row is `1/√m` everywhere, completed by Gram–Schmidt against the
    /// standard basis.
    pub fn balanced_splitter_array(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(FogError::invalid("splitter array needs at least one port"));
        }
        let mut rows: Vec<DVector<f64>> = vec![DVector::from_element(m, 1.0 / (m as f64).sqrt())];
        for k in 0..m {
            if rows.len() == m {
                break;
            }
            let mut v = DVector::zeros(m);
            v[k] = 1.0;
            for r in &rows {
                let proj = r.dot(&v);
                v -= r * proj;
            }
            // second pass for orthogonality at machine precision
            for r in &rows {
                let proj = r.dot(&v);
                v -= r * proj;
            }
            let norm = v.norm();
            if norm > 1e-8 {
                rows.push(v / norm);
            }
        }
        let mode = DMatrix::from_fn(m, m, |j, k| Complex::new(rows[j][k], 0.0));
        Ok(SymplecticTransform {
            matrix: quadrature_map(&mode),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Max entry of `S Ω Sᵀ − Ω`.
    pub fn form_error(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (&self.matrix * &omega * self.matrix.transpose() - omega).amax()
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let omega = symplectic_form(self.n_modes());
        SymplecticTransform {
            matrix: -(&omega * self.matrix.transpose() * &omega),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if self.n_modes() != next.n_modes() {
            return Err(FogError::invalid(
                "cannot compose transforms of different size",
            ));
        }
        Ok(SymplecticTransform {
            matrix: next.matrix() * &self.matrix,
        })
    }

    /// Lifts the transform into an `n_modes` system, port `k` acting on
    /// `modes[k]`; all other modes are left untouched.
    pub fn embed(&self, n_modes: usize, modes: &[usize]) -> Result<Self> {
        if modes.len() != self.n_modes() {
            return Err(FogError::invalid(format!(
                "transform has {} ports but {} target modes were given",
                self.n_modes(),
                modes.len()
            )));
        }
        let mut seen = vec![false; n_modes];
        for &m in modes {
            if m >= n_modes || seen[m] {
                return Err(FogError::invalid(format!(
                    "target mode {m} is out of range or repeated"
                )));
            }
            seen[m] = true;
        }
        let mut full = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for &mj in modes {
            for q in 0..2 {
                full[(2 * mj + q, 2 * mj + q)] = 0.0;
            }
        }
        for (j, &mj) in modes.iter().enumerate() {
            for (k, &mk) in modes.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        full[(2 * mj + a, 2 * mk + b)] = self.matrix[(2 * j + a, 2 * k + b)];
                    }
                }
            }
        }
        Ok(SymplecticTransform { matrix: full })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_matrix_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        let diff = (a - b).amax();
        assert!(diff <= tol, "max entry difference {diff:e} > {tol:e}");
    }

    #[test]
    fn vacuum_has_quarter_variance() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.mean().as_slice(), &[0.0, 0.0]);
        assert_matrix_close(v.cov(), &(DMatrix::identity(2, 2) * 0.25), 0.0);

        let v3 = GaussianState::vacuum(3).unwrap();
        assert_eq!(v3.mean().len(), 6);
        assert!(v3.mean().iter().all(|&x| x == 0.0));
        for nu in v3.symplectic_eigenvalues() {
            assert_abs_diff_eq!(nu, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn vacuum_rejects_zero_modes() {
        assert!(matches!(
            GaussianState::vacuum(0),
            Err(FogError::InvalidArgument(_))
        ));
    }

    #[test]
    fn coherent_state_photons() {
        let c = GaussianState::coherent(100f64.sqrt(), 0.0);
        assert_abs_diff_eq!(c.mean()[0], 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.mean_photon_number(0).unwrap(), 100.0, epsilon = 1e-12);
        let c = GaussianState::coherent(3.0, 4.0);
        assert_abs_diff_eq!(c.mean_photon_number(0).unwrap(), 25.0, epsilon = 1e-12);
        assert_eq!(
            GaussianState::coherent(0.0, 0.0),
            GaussianState::vacuum(1).unwrap()
        );
    }

    #[test]
    fn squeezed_vacuum_variances() {
        assert_eq!(
            GaussianState::squeezed_vacuum(0.0, Quadrature::Im).unwrap(),
            GaussianState::vacuum(1).unwrap()
        );
        // 10 dB: N_s = sinh²(ln(10)/2); (√(1+N_s)+√N_s)² = 10 by direct arithmetic
        let n_s = (10f64.ln() / 2.0).sinh().powi(2);
        let g = ((1.0 + n_s).sqrt() + n_s.sqrt()).powi(2);
        assert_abs_diff_eq!(g, 10.0, epsilon = 1e-12);
        let sv = GaussianState::squeezed_vacuum(n_s, Quadrature::Im).unwrap();
        let im = sv.homodyne_stats(0, Quadrature::Im).unwrap();
        let re = sv.homodyne_stats(0, Quadrature::Re).unwrap();
        assert_abs_diff_eq!(im.variance, 0.025, epsilon = 1e-14);
        assert_abs_diff_eq!(re.variance, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(im.variance * re.variance, 1.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sv.mean_photon_number(0).unwrap(), n_s, epsilon = 1e-12);

        let re_sq = GaussianState::squeezed_vacuum(n_s, Quadrature::Re).unwrap();
        assert_abs_diff_eq!(re_sq.cov()[(0, 0)], 0.025, epsilon = 1e-14);
    }

    #[test]
    fn squeezed_vacuum_rejects_negative_photons() {
        assert!(GaussianState::squeezed_vacuum(-0.1, Quadrature::Im).is_err());
    }

    #[test]
    fn pure_states_saturate_uncertainty() {
        let states = [
            GaussianState::vacuum(2).unwrap(),
            GaussianState::coherent(1.5, -0.3),
            GaussianState::squeezed_vacuum(9.72, Quadrature::Im).unwrap(),
        ];
        for s in &states {
            for nu in s.symplectic_eigenvalues() {
                assert_abs_diff_eq!(nu, 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn conjugate_phase_at_zero() {
        let t = SymplecticTransform::conjugate_phase(0.0);
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
        assert_matrix_close(t.matrix(), &expected, 0.0);
    }

    fn complex_mul(
        a: &[[Complex<f64>; 2]; 2],
        b: &[[Complex<f64>; 2]; 2],
    ) -> [[Complex<f64>; 2]; 2] {
        let mut out = [[Complex::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn conjugate_phase_matches_interferometer_factorization() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| Complex::new(x, 0.0);
        for &phi in &[std::f64::consts::FRAC_PI_2, 0.3, -1.1] {
            let first = [[r(h), r(h)], [r(h), r(-h)]];
            let phase = [
                [Complex::from_polar(1.0, -phi), r(0.0)],
                [r(0.0), Complex::from_polar(1.0, phi)],
            ];
            let last = [[r(h), r(h)], [r(-h), r(h)]];
            let u = complex_mul(&last, &complex_mul(&phase, &first));
            let u = DMatrix::from_fn(2, 2, |i, j| u[i][j]);
            let expected = quadrature_map(&u);
            assert_matrix_close(
                SymplecticTransform::conjugate_phase(phi).matrix(),
                &expected,
                1e-15,
            );
        }
        // φ = π/2: a_out = −i b_in, b_out = i a_in, so Im[b_out] = Re[a_in]
        let t = SymplecticTransform::conjugate_phase(std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(t.matrix()[(3, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[(2, 1)], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.matrix()[(0, 3)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn conjugate_phase_is_symplectic() {
        for i in 0..50 {
            let phi = -3.0 + 0.13 * i as f64;
            assert!(SymplecticTransform::conjugate_phase(phi).form_error() <= 1e-12);
        }
    }

    #[test]
    fn splitter_array_first_row_and_orthogonality() {
        assert_matrix_close(
            SymplecticTransform::balanced_splitter_array(1)
                .unwrap()
                .matrix(),
            &DMatrix::identity(2, 2),
            0.0,
        );
        let b2 = SymplecticTransform::balanced_splitter_array(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(b2.matrix()[(0, 0)], h, epsilon = 1e-15);
        assert_abs_diff_eq!(b2.matrix()[(0, 2)], h, epsilon = 1e-15);
        assert_abs_diff_eq!(b2.matrix()[(2, 0)].abs(), h, epsilon = 1e-15);
        assert_abs_diff_eq!(b2.matrix()[(2, 2)], -b2.matrix()[(2, 0)], epsilon = 1e-15);
        for m in [3, 4, 7, 16] {
            let b = SymplecticTransform::balanced_splitter_array(m).unwrap();
            assert!(b.form_error() <= 1e-12);
            let o = b.matrix();
            assert_matrix_close(
                &(o * o.transpose()),
                &DMatrix::identity(2 * m, 2 * m),
                1e-12,
            );
            for k in 0..m {
                assert_abs_diff_eq!(o[(0, 2 * k)], 1.0 / (m as f64).sqrt(), epsilon = 1e-15);
            }
        }
        assert!(SymplecticTransform::balanced_splitter_array(0).is_err());
    }

    #[test]
    fn splitter_array_fans_out_coherent_light() {
        let alpha = 3.0;
        let input = GaussianState::coherent(alpha, 0.0).tensor(&GaussianState::vacuum(3).unwrap());
        // port 1 feeds the symmetric combination, so the fan-out is the inverse
        let b = SymplecticTransform::balanced_splitter_array(4).unwrap();
        let out = input.apply(&b.inverse()).unwrap();
        for j in 0..4 {
            let h = out.homodyne_stats(j, Quadrature::Re).unwrap();
            assert_abs_diff_eq!(h.mean, alpha / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(h.variance, 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn pure_loss_limits() {
        let s = GaussianState::squeezed_vacuum(2.0, Quadrature::Im)
            .unwrap()
            .tensor(&GaussianState::coherent(1.0, 2.0));
        assert_eq!(s.pure_loss(1.0, &[0, 1]).unwrap(), s);
        let gone = s.pure_loss(0.0, &[0, 1]).unwrap();
        assert_matrix_close(gone.cov(), GaussianState::vacuum(2).unwrap().cov(), 1e-15);
        assert!(gone.mean().iter().all(|&x| x == 0.0));

        let alpha = 5.0;
        let c = GaussianState::coherent(alpha, 0.0)
            .pure_loss(0.36, &[0])
            .unwrap();
        assert_abs_diff_eq!(c.mean()[0], 0.6 * alpha, epsilon = 1e-14);
        assert_matrix_close(c.cov(), &(DMatrix::identity(2, 2) * 0.25), 1e-15);
        assert!(c.pure_loss(1.5, &[0]).is_err());
        assert!(c.pure_loss(-0.1, &[0]).is_err());
    }

    #[test]
    fn pure_loss_on_subset_scales_cross_blocks() {
        let two = GaussianState::squeezed_vacuum(1.0, Quadrature::Im)
            .unwrap()
            .tensor(&GaussianState::vacuum(1).unwrap());
        let bs = SymplecticTransform::balanced_splitter_array(2).unwrap();
        let ent = two.apply(&bs).unwrap();
        let eta: f64 = 0.49;
        let lossy = ent.pure_loss(eta, &[1]).unwrap();
        // cross block between mode 0 (untouched) and mode 1 (lossy)
        assert_abs_diff_eq!(
            lossy.cov()[(1, 3)],
            eta.sqrt() * ent.cov()[(1, 3)],
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            lossy.cov()[(3, 3)],
            eta * ent.cov()[(3, 3)] + (1.0 - eta) * 0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(lossy.cov()[(1, 1)], ent.cov()[(1, 1)], epsilon = 0.0);
        assert!(lossy.is_physical());
    }

    #[test]
    fn homodyne_stats_and_errors() {
        let v = GaussianState::vacuum(2).unwrap();
        for q in [Quadrature::Re, Quadrature::Im] {
            assert_eq!(
                v.homodyne_stats(1, q).unwrap(),
                HomodyneResult {
                    mean: 0.0,
                    variance: 0.25
                }
            );
        }
        let c = GaussianState::coherent(1.7, 0.0);
        let h = c.homodyne_stats(0, Quadrature::Re).unwrap();
        assert_eq!((h.mean, h.variance), (1.7, 0.25));
        assert!(v.homodyne_stats(2, Quadrature::Re).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_consistent() {
        let v = GaussianState::vacuum(1).unwrap();
        let n = 1_000_000;
        let xs = v.sample_homodyne(0, Quadrature::Im, n, 1).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 5.0 * 0.5 / (n as f64).sqrt());

        let c = GaussianState::coherent(2.0, 0.0);
        let m = 200_000;
        let ys = c.sample_homodyne(0, Quadrature::Re, m, 7).unwrap();
        let my = ys.iter().sum::<f64>() / m as f64;
        let var = ys.iter().map(|y| (y - my).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = 0.25 * (2.0 / (m - 1) as f64).sqrt();
        assert!((var - 0.25).abs() < 3.0 * se, "sample variance {var}");

        assert_eq!(
            c.sample_homodyne(0, Quadrature::Re, 100, 42).unwrap(),
            c.sample_homodyne(0, Quadrature::Re, 100, 42).unwrap()
        );
        assert!(c.sample_homodyne(0, Quadrature::Re, 0, 1).is_err());
    }

    #[test]
    fn from_parts_validates() {
        let mean = DVector::zeros(2);
        let bad = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.1]);
        assert!(GaussianState::from_parts(mean.clone(), bad).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[0.3, 0.01, 0.0, 0.3]);
        assert!(GaussianState::from_parts(mean.clone(), asym).is_err());
        let thermal = DMatrix::identity(2, 2) * 0.75;
        let s = GaussianState::from_parts(mean, thermal).unwrap();
        assert_abs_diff_eq!(s.symplectic_eigenvalues()[0], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mean_photon_number(0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn embed_and_inverse() {
        let u = SymplecticTransform::conjugate_phase(0.4);
        let big = u.embed(3, &[2, 0]).unwrap();
        assert!(big.form_error() <= 1e-12);
        let id = big.then(&big.inverse()).unwrap();
        assert_matrix_close(id.matrix(), &DMatrix::identity(6, 6), 1e-14);
        assert!(u.embed(3, &[0, 0]).is_err());
        assert!(u.embed(3, &[0]).is_err());
        assert!(SymplecticTransform::new(DMatrix::identity(4, 4) * 2.0).is_err());
    }
}
