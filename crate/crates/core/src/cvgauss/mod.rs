//! Gaussian states as first and second moments, the lossy channel, the
//! quasi-Choi states of lossy channels and their entropic quantities.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂, …)` with `x = a + a†`, so the
//! vacuum has covariance `I` and a coherent amplitude `α` has mean
//! `(2 Re α, 2 Im α)`.

mod fock;

pub use fock::{
    fock_covariance, fock_mixture, fock_oracle, fock_oracle_rel_entropy, fock_rci, FockPreparation,
    FockState,
};

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::entro::shannon;
use crate::error::{Error, Result};
use crate::opcore::{eig_symmetrized, CMat};

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

/// Symplectic form `⊕ [[0, 1], [-1, 0]]` on `modes` modes.
pub fn omega(modes: usize) -> RMat {
    let mut w = RMat::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: RVec,
    cov: RMat,
}

impl GaussianState {
    /// Checks symmetry and the uncertainty relation `V + iΩ ⪰ 0`.
    pub fn new(mean: RVec, cov: RMat) -> Result<Self> {
        let n = cov.nrows();
        if !n.is_multiple_of(2) || cov.ncols() != n || mean.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "mean {} and covariance {}x{} do not describe whole modes",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::InvalidState(format!(
                "covariance asymmetric by {asym:e}"
            )));
        }
        let w = omega(n / 2);
        let m = CMat::from_fn(n, n, |i, j| Complex64::new(cov[(i, j)], w[(i, j)]));
        let min = eig_symmetrized(&m)?.values.last().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated by {min:e}"
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: RVec::zeros(2 * modes),
            cov: RMat::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode thermal state with covariance `ν I`.
    pub fn thermal(nu: f64) -> Result<Self> {
        if !(nu >= 1.0) {
            return Err(Error::OutOfRange(format!("thermal variance {nu} below 1")));
        }
        Ok(Self {
            mean: RVec::zeros(2),
            cov: RMat::identity(2, 2).scale(nu),
        })
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &RVec {
        &self.mean
    }

    pub fn cov(&self) -> &RMat {
        &self.cov
    }

    /// Moments of the given modes, in the given order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        if idx.iter().any(|&i| i >= self.mean.len()) {
            return Err(Error::DimensionMismatch(format!(
                "mode index out of range for {} modes",
                self.modes()
            )));
        }
        Ok(Self {
            mean: RVec::from_fn(idx.len(), |i, _| self.mean[idx[i]]),
            cov: RMat::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]),
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let (n, m) = (self.mean.len(), other.mean.len());
        let mut cov = RMat::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        cov.view_mut((n, n), (m, m)).copy_from(&other.cov);
        let mut mean = RVec::zeros(n + m);
        mean.rows_mut(0, n).copy_from(&self.mean);
        mean.rows_mut(n, m).copy_from(&other.mean);
        Self { mean, cov }
    }

    /// Shifts the mean of `mode` by the phase-space image of amplitude `alpha`.
    pub fn displaced(&self, mode: usize, alpha: Complex64) -> Self {
        let mut out = self.clone();
        out.mean[2 * mode] += 2.0 * alpha.re;
        out.mean[2 * mode + 1] += 2.0 * alpha.im;
        out
    }
}

/// Two-mode squeezed vacuum with variance `μ`.
pub fn tmsv(mu: f64) -> Result<GaussianState> {
    if !(mu >= 1.0) {
        return Err(Error::OutOfRange(format!("TMSV variance {mu} below 1")));
    }
    let c = (mu * mu - 1.0).sqrt();
    let mut v = RMat::identity(4, 4).scale(mu);
    for (i, s) in [(0, 1.0), (1, -1.0)] {
        v[(i, i + 2)] = s * c;
        v[(i + 2, i)] = s * c;
    }
    Ok(GaussianState {
        mean: RVec::zeros(4),
        cov: v,
    })
}

/// Beam splitter of transmissivity `η` against vacuum, optionally followed
/// by a fixed output displacement `γ √(1-η)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossyChannel {
    eta: f64,
    gamma: Complex64,
}

impl LossyChannel {
    pub fn new(eta: f64) -> Result<Self> {
        Self::displaced(eta, Complex64::new(0.0, 0.0))
    }

    pub fn displaced(eta: f64, gamma: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange(format!(
                "transmissivity {eta} outside [0, 1]"
            )));
        }
        Ok(Self { eta, gamma })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    /// Output displacement amplitude `γ √(1-η)`.
    pub fn offset(&self) -> Complex64 {
        self.gamma * (1.0 - self.eta).sqrt()
    }
}

/// `V -> X V Xᵀ + Y` on the block of `mode`, `X = √η I`, `Y = (1-η) I`.
pub fn apply_lossy(ch: &LossyChannel, g: &GaussianState, mode: usize) -> Result<GaussianState> {
    if mode >= g.modes() {
        return Err(Error::DimensionMismatch(format!(
            "mode {mode} of a {}-mode state",
            g.modes()
        )));
    }
    let n = g.mean.len();
    let mut x = RMat::identity(n, n);
    let s = ch.eta.sqrt();
    x[(2 * mode, 2 * mode)] = s;
    x[(2 * mode + 1, 2 * mode + 1)] = s;
    let mut cov = &x * &g.cov * x.transpose();
    cov[(2 * mode, 2 * mode)] += 1.0 - ch.eta;
    cov[(2 * mode + 1, 2 * mode + 1)] += 1.0 - ch.eta;
    let cov = (&cov + cov.transpose()).scale(0.5);
    let mean = &x * &g.mean;
    let out = GaussianState { mean, cov };
    Ok(out.displaced(mode, ch.offset()))
}

/// TMSV with its second mode sent through the lossy channel.
pub fn quasi_choi(eta: f64, mu: f64) -> Result<GaussianState> {
    apply_lossy(&LossyChannel::new(eta)?, &tmsv(mu)?, 1)
}

fn sqrt_psd(v: &RMat) -> Result<(RMat, RMat)> {
    let e = SymmetricEigen::new(v.clone());
    if e.eigenvalues.iter().any(|&x| x <= 0.0) {
        return Err(Error::IllConditioned(
            "covariance matrix is not positive definite".into(),
        ));
    }
    let d = e.eigenvalues.map(|x| x.sqrt());
    let di = e.eigenvalues.map(|x| 1.0 / x.sqrt());
    let q = &e.eigenvectors;
    Ok((
        q * RMat::from_diagonal(&d) * q.transpose(),
        q * RMat::from_diagonal(&di) * q.transpose(),
    ))
}

/// `R = V^{1/2}` and the Hermitian `K = i R Ω R` whose eigenvalues are
/// `±ν_k`.
fn williamson_kernel(v: &RMat) -> Result<(RMat, RMat, CMat)> {
    let (r, ri) = sqrt_psd(v)?;
    let k = &r * omega(v.nrows() / 2) * &r;
    let kc = CMat::from_fn(k.nrows(), k.ncols(), |i, j| Complex64::new(0.0, k[(i, j)]));
    Ok((r, ri, kc))
}

/// Symplectic eigenvalues in descending order.
pub fn symplectic_eigenvalues(g: &GaussianState) -> Result<Vec<f64>> {
    let (_, _, k) = williamson_kernel(&g.cov)?;
    let vals = eig_symmetrized(&k)?.values;
    Ok(vals[..g.modes()].to_vec())
}

/// Entropy in bits of a thermal mode with symplectic eigenvalue `ν`.
pub fn thermal_entropy(nu: f64) -> f64 {
    if nu <= 1.0 {
        return 0.0;
    }
    let (a, b) = ((nu + 1.0) / 2.0, (nu - 1.0) / 2.0);
    a * a.log2() - if b > 0.0 { b * b.log2() } else { 0.0 }
}

pub fn symplectic_entropy(g: &GaussianState) -> Result<f64> {
    Ok(symplectic_eigenvalues(g)?
        .into_iter()
        .map(thermal_entropy)
        .sum())
}

/// `S(A) - S(AB)` of the lossy quasi-Choi state.
pub fn gaussian_rci(eta: f64, mu: f64) -> Result<f64> {
    let g = quasi_choi(eta, mu)?;
    Ok(symplectic_entropy(&g.reduce(&[0])?)? - symplectic_entropy(&g)?)
}

/// `S(ρ₁‖ρ₂)` in bits from moments, via the Gibbs exponent of `ρ₂`.
pub fn gaussian_rel_entropy(g1: &GaussianState, g2: &GaussianState) -> Result<f64> {
    if g1.modes() != g2.modes() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} modes",
            g1.modes(),
            g2.modes()
        )));
    }
    let m = g2.modes();
    let (r, ri, k) = williamson_kernel(&g2.cov)?;
    let e = eig_symmetrized(&k)?;
    let nus = &e.values[..m];
    if let Some(&nu) = nus.iter().find(|&&nu| nu <= 1.0 + 1e-9) {
        return Err(Error::IllConditioned(format!(
            "second state has symplectic eigenvalue {nu}, relative entropy is not finite in general"
        )));
    }
    // acoth(K) on the spectrum ±ν
    let acoth = e.map(|x| 0.5 * ((x + 1.0) / (x - 1.0)).ln());
    let rc = r.map(|x| Complex64::new(x, 0.0));
    let ric = ri.map(|x| Complex64::new(x, 0.0));
    let w = omega(m).map(|x| Complex64::new(0.0, 0.5 * x));
    let q = (w * rc * acoth * ric).map(|z| z.re);
    let q = (&q + q.transpose()).scale(0.5);
    let delta = g1.mean() - g2.mean();
    let second = g1.cov() + &delta * delta.transpose();
    let mut cross = (q.component_mul(&second)).sum();
    for &nu in nus {
        let beta = ((nu + 1.0) / (nu - 1.0)).ln();
        cross += ((nu + 1.0) / 2.0).ln() - beta / 2.0;
    }
    let s1 = symplectic_entropy(g1)?;
    Ok((cross / LN_2 - s1).max(0.0))
}

/// `-log₂(1-η)`, infinite at `η = 1`.
pub fn plob_bound(eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange(format!(
            "transmissivity {eta} outside [0, 1]"
        )));
    }
    Ok(-(1.0 - eta).log2())
}

/// `(upper - H(p), upper)` with `upper = -Σ p_i log₂(1-η_i)`.
pub fn lossy_mixture_bounds(probs: &[f64], etas: &[f64]) -> Result<(f64, f64)> {
    if probs.len() != etas.len() || probs.is_empty() {
        return Err(Error::InvalidEnsemble(
            "probabilities and transmissivities must align".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidEnsemble(format!(
            "probabilities sum to {total}"
        )));
    }
    let mut upper = 0.0;
    for (&p, &eta) in probs.iter().zip(etas) {
        if eta == 1.0 && p > 0.0 {
            return Err(Error::Unbounded(
                "a lossless component makes the bound infinite".into(),
            ));
        }
        if p > 0.0 {
            upper += p * plob_bound(eta)?;
        }
    }
    Ok((upper - shannon(probs), upper))
}

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// `-∫₀^{η_max} p(η) log₂(1-η) dη` by double-exponential quadrature. The
/// density must integrate to one on `[0, η_max]`.
pub fn continuous_mixture_upper(
    density: impl Fn(f64) -> f64,
    eta_max: f64,
    abs_tol: f64,
) -> Result<Quadrature> {
    if !(eta_max > 0.0 && eta_max < 1.0) {
        return Err(Error::OutOfRange(format!(
            "eta_max = {eta_max} must lie in (0, 1)"
        )));
    }
    let norm = quadrature::double_exponential::integrate(&density, 0.0, eta_max, abs_tol);
    if (norm.integral - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidEnsemble(format!(
            "density integrates to {}",
            norm.integral
        )));
    }
    let out = quadrature::double_exponential::integrate(
        |eta| -density(eta) * (1.0 - eta).log2(),
        0.0,
        eta_max,
        abs_tol,
    );
    Ok(Quadrature {
        value: out.integral,
        error_estimate: out.error_estimate,
    })
}

/// Moment-level check that the displaced lossy channel shifts input means
/// by `√η z` whatever `γ` is, and differs from the plain channel only by
/// the output offset `γ √(1-η)`. Samples are `(γ, z)` pairs.
pub fn classical_env_covariance_check(
    eta: f64,
    samples: &[(Complex64, Complex64)],
) -> Result<bool> {
    let plain = LossyChannel::new(eta)?;
    let inputs = [GaussianState::vacuum(1), GaussianState::thermal(2.5)?];
    for &(gamma, z) in samples {
        let ch = LossyChannel::displaced(eta, gamma)?;
        for g in &inputs {
            let base = apply_lossy(&ch, g, 0)?;
            let moved = apply_lossy(&ch, &g.displaced(0, z), 0)?;
            let expect = base.displaced(0, z * eta.sqrt());
            if (moved.mean() - expect.mean()).amax() > 1e-10
                || (moved.cov() - base.cov()).amax() > 1e-10
            {
                return Ok(false);
            }
            let reference = apply_lossy(&plain, g, 0)?.displaced(0, ch.offset());
            if (base.mean() - reference.mean()).amax() > 1e-10
                || (base.cov() - reference.cov()).amax() > 1e-10
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
