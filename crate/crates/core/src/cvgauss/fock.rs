//! Brute-force Fock-space representation of the Gaussian states used by
//! the moment calculus, as an independent check.

use num_complex::Complex64;

use super::{quasi_choi, tmsv, GaussianState, RMat, RVec};
use crate::entro::{rel_entropy_matrix, spectral_entropy};
use crate::error::{Error, Result};
use crate::opcore::{partial_trace, CMat, DensityMatrix, SubsystemSignature, TOL};

/// Zero-mean states with a known Fock expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FockPreparation {
    /// Single-mode thermal state, `ν = 1` is the vacuum.
    Thermal {
        nu: f64,
    },
    /// Two independent thermal modes.
    ThermalPair {
        nu_a: f64,
        nu_b: f64,
    },
    Tmsv {
        mu: f64,
    },
    /// TMSV with mode B through a lossy channel.
    QuasiChoi {
        eta: f64,
        mu: f64,
    },
}

impl FockPreparation {
    pub fn modes(&self) -> usize {
        match self {
            Self::Thermal { .. } => 1,
            _ => 2,
        }
    }

    /// The same state as moments.
    pub fn gaussian(&self) -> Result<GaussianState> {
        match *self {
            Self::Thermal { nu } => GaussianState::thermal(nu),
            Self::ThermalPair { nu_a, nu_b } => {
                Ok(GaussianState::thermal(nu_a)?.tensor(&GaussianState::thermal(nu_b)?))
            }
            Self::Tmsv { mu } => tmsv(mu),
            Self::QuasiChoi { eta, mu } => quasi_choi(eta, mu),
        }
    }
}

/// Truncated state, renormalized, with the trace lost to truncation.
#[derive(Clone, Debug)]
pub struct FockState {
    pub state: DensityMatrix,
    pub trace_deficit: f64,
    pub cutoff: usize,
}

fn thermal_diag(nu: f64, cutoff: usize) -> Result<Vec<f64>> {
    if !(nu >= 1.0) {
        return Err(Error::OutOfRange(format!("thermal variance {nu} below 1")));
    }
    let x = (nu - 1.0) / (nu + 1.0);
    Ok((0..cutoff).map(|n| (1.0 - x) * x.powi(n as i32)).collect())
}

/// `√C(n,k) η^{(n-k)/2} (1-η)^{k/2}`.
fn loss_amplitude(n: usize, k: usize, eta: f64) -> f64 {
    let mut binom = 1.0;
    for j in 0..k {
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    binom.sqrt() * eta.powf((n - k) as f64 / 2.0) * (1.0 - eta).powf(k as f64 / 2.0)
}

fn quasi_choi_matrix(eta: f64, mu: f64, cutoff: usize) -> Result<CMat> {
    if !(mu >= 1.0) || !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange(format!(
            "need mu ≥ 1 and eta in [0, 1], got {mu}, {eta}"
        )));
    }
    let l2 = (mu - 1.0) / (mu + 1.0);
    let c: Vec<f64> = (0..cutoff)
        .map(|n| (1.0 - l2).sqrt() * l2.sqrt().powi(n as i32))
        .collect();
    let d = cutoff * cutoff;
    let mut m = CMat::zeros(d, d);
    for k in 0..cutoff {
        let amp: Vec<f64> = (k..cutoff)
            .map(|n| c[n] * loss_amplitude(n, k, eta))
            .collect();
        for (i, n) in (k..cutoff).enumerate() {
            if amp[i] == 0.0 {
                continue;
            }
            for (j, n2) in (k..cutoff).enumerate() {
                if amp[j] == 0.0 {
                    continue;
                }
                m[(n * cutoff + n - k, n2 * cutoff + n2 - k)] =
                    Complex64::new(amp[i] * amp[j], 0.0);
            }
        }
    }
    Ok(m)
}

/// Fock matrix of `prep` truncated to `cutoff` photons per mode. Fails when
/// more than `1e-6` of the trace lies beyond the cutoff.
pub fn fock_oracle(prep: &FockPreparation, cutoff: usize) -> Result<FockState> {
    if cutoff < 10 {
        return Err(Error::OutOfRange(format!("cutoff {cutoff} below 10")));
    }
    let (m, sig) = match *prep {
        FockPreparation::Thermal { nu } => (
            CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                cutoff,
                thermal_diag(nu, cutoff)?
                    .into_iter()
                    .map(|x| Complex64::new(x, 0.0)),
            )),
            SubsystemSignature::single(crate::opcore::Party::A, cutoff),
        ),
        FockPreparation::ThermalPair { nu_a, nu_b } => {
            let a = thermal_diag(nu_a, cutoff)?;
            let b = thermal_diag(nu_b, cutoff)?;
            let diag = a
                .iter()
                .flat_map(|x| b.iter().map(move |y| Complex64::new(x * y, 0.0)));
            (
                CMat::from_diagonal(&nalgebra::DVector::from_iterator(cutoff * cutoff, diag)),
                SubsystemSignature::bipartite(cutoff, cutoff),
            )
        }
        FockPreparation::Tmsv { mu } => (
            quasi_choi_matrix(1.0, mu, cutoff)?,
            SubsystemSignature::bipartite(cutoff, cutoff),
        ),
        FockPreparation::QuasiChoi { eta, mu } => (
            quasi_choi_matrix(eta, mu, cutoff)?,
            SubsystemSignature::bipartite(cutoff, cutoff),
        ),
    };
    let tr = m.trace().re;
    let trace_deficit = 1.0 - tr;
    if trace_deficit > 1e-6 {
        return Err(Error::TruncationDeficit(trace_deficit));
    }
    Ok(FockState {
        state: DensityMatrix::new(m.unscale(tr), sig)?,
        trace_deficit,
        cutoff,
    })
}

/// `S(A) - S(AB)` of a two-mode preparation in the truncated Fock basis.
pub fn fock_rci(prep: &FockPreparation, cutoff: usize) -> Result<f64> {
    let f = fock_oracle(prep, cutoff)?;
    fock_rci_matrix(f.state.matrix(), cutoff)
}

pub(crate) fn fock_rci_matrix(m: &CMat, cutoff: usize) -> Result<f64> {
    let a = partial_trace(m, &[cutoff, cutoff], &[0])?;
    Ok(spectral_entropy(&a)? - spectral_entropy(m)?)
}

/// Relative entropy of two truncated preparations. Only exact zeros of the
/// second state count as its kernel.
pub fn fock_oracle_rel_entropy(
    p1: &FockPreparation,
    p2: &FockPreparation,
    cutoff: usize,
) -> Result<f64> {
    if p1.modes() != p2.modes() {
        return Err(Error::DimensionMismatch(
            "preparations differ in mode count".into(),
        ));
    }
    let a = fock_oracle(p1, cutoff)?;
    let b = fock_oracle(p2, cutoff)?;
    rel_entropy_matrix(a.state.matrix(), b.state.matrix(), 0.0, TOL.psd_slack)
}

/// Sparse action of quadrature `q` (`x_k` for even `q`, `p_k` for odd) on a
/// superposition of basis kets.
fn apply_quadrature(
    q: usize,
    cutoff: usize,
    modes: usize,
    ket: &[(Complex64, usize)],
) -> Vec<(Complex64, usize)> {
    let mode = q / 2;
    let stride = cutoff.pow((modes - 1 - mode) as u32);
    let mut out = Vec::with_capacity(2 * ket.len());
    for &(z, idx) in ket {
        let n = (idx / stride) % cutoff;
        // a|n> = √n |n-1>, a†|n> = √(n+1) |n+1>
        let (down, up) = if q.is_multiple_of(2) {
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
        } else {
            (Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0))
        };
        if n > 0 {
            out.push((z * down * (n as f64).sqrt(), idx - stride));
        }
        if n + 1 < cutoff {
            out.push((z * up * ((n + 1) as f64).sqrt(), idx + stride));
        }
    }
    out
}

/// First and second moments of a truncated Fock state with one or two
/// modes, in the quadrature convention of the moment calculus.
pub fn fock_covariance(rho: &DensityMatrix, cutoff: usize) -> Result<(RVec, RMat)> {
    let dim = rho.dim();
    let modes = if dim == cutoff {
        1
    } else if dim == cutoff * cutoff {
        2
    } else {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not a power of the cutoff {cutoff}"
        )));
    };
    let m = rho.matrix();
    let expect = |ops: &[usize]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            let mut ket = vec![(Complex64::new(1.0, 0.0), r)];
            for &q in ops.iter().rev() {
                ket = apply_quadrature(q, cutoff, modes, &ket);
            }
            for (z, s) in ket {
                acc += m[(r, s)] * z;
            }
        }
        acc
    };
    let n = 2 * modes;
    let mean = RVec::from_fn(n, |i, _| expect(&[i]).re);
    let mut cov = RMat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = 0.5 * (expect(&[i, j]) + expect(&[j, i])).re - mean[i] * mean[j];
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok((mean, cov))
}

/// Mixture of two-mode preparations, each truncated at `cutoff`.
pub fn fock_mixture(
    probs: &[f64],
    preps: &[FockPreparation],
    cutoff: usize,
) -> Result<DensityMatrix> {
    let states = preps
        .iter()
        .map(|p| fock_oracle(p, cutoff).map(|f| f.state))
        .collect::<Result<Vec<_>>>()?;
    DensityMatrix::mix(probs, &states.iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvgauss::{gaussian_rci, gaussian_rel_entropy, symplectic_entropy};
    use crate::entro::shannon;

    #[test]
    fn tmsv_truncation_deficit() {
        let f = fock_oracle(&FockPreparation::Tmsv { mu: 1.2 }, 30).unwrap();
        assert!(f.trace_deficit <= 1e-10);
        assert!(fock_oracle(&FockPreparation::Tmsv { mu: 1e4 }, 20).is_err());
        assert!(fock_oracle(&FockPreparation::Tmsv { mu: 1.2 }, 5).is_err());
    }

    #[test]
    fn vacuum_is_exact() {
        let f = fock_oracle(&FockPreparation::Thermal { nu: 1.0 }, 10).unwrap();
        assert_eq!(f.trace_deficit, 0.0);
        assert_eq!(f.state.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(
            f.state.matrix().iter().filter(|z| z.norm() != 0.0).count(),
            1
        );
    }

    #[test]
    fn rci_matches_fock() {
        let g = gaussian_rci(0.5, 1.5).unwrap();
        let f = fock_rci(&FockPreparation::QuasiChoi { eta: 0.5, mu: 1.5 }, 40).unwrap();
        assert!((g - f).abs() < 1e-6, "{g} vs {f}");
    }

    #[test]
    fn moments_match_fock() {
        for prep in [
            FockPreparation::Tmsv { mu: 2.0 },
            FockPreparation::QuasiChoi { eta: 0.3, mu: 1.8 },
            FockPreparation::ThermalPair {
                nu_a: 1.5,
                nu_b: 2.0,
            },
            FockPreparation::Thermal { nu: 2.0 },
        ] {
            let f = fock_oracle(&prep, 40).unwrap();
            let (mean, cov) = fock_covariance(&f.state, 40).unwrap();
            let g = prep.gaussian().unwrap();
            assert!((&mean - g.mean()).amax() < 1e-6);
            assert!(
                (&cov - g.cov()).amax() < 1e-6,
                "{prep:?}: {cov} vs {}",
                g.cov()
            );
            let s = spectral_entropy(f.state.matrix()).unwrap();
            assert!((s - symplectic_entropy(&g).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn relative_entropy_matches_fock() {
        // quasi-Choi state against the product of its marginals
        let (eta, mu) = (0.9, 1.5);
        let p1 = FockPreparation::QuasiChoi { eta, mu };
        let p2 = FockPreparation::ThermalPair {
            nu_a: mu,
            nu_b: eta * mu + 1.0 - eta,
        };
        let fock = fock_oracle_rel_entropy(&p1, &p2, 40).unwrap();
        let moments =
            gaussian_rel_entropy(&p1.gaussian().unwrap(), &p2.gaussian().unwrap()).unwrap();
        assert!((fock - moments).abs() < 1e-6, "{fock} vs {moments}");
        let th = fock_oracle_rel_entropy(
            &FockPreparation::Thermal { nu: 1.2 },
            &FockPreparation::Thermal { nu: 3.0 },
            40,
        )
        .unwrap();
        let g = gaussian_rel_entropy(
            &GaussianState::thermal(1.2).unwrap(),
            &GaussianState::thermal(3.0).unwrap(),
        )
        .unwrap();
        assert!((th - g).abs() < 1e-6);
    }

    #[test]
    fn mixed_quasi_choi_rci_sandwich() {
        let (mu, probs, etas) = (1.5, [0.4, 0.6], [0.3, 0.8]);
        let preps = etas.map(|eta| FockPreparation::QuasiChoi { eta, mu });
        let mix = fock_mixture(&probs, &preps, 30).unwrap();
        let lhs = fock_rci_matrix(mix.matrix(), 30).unwrap();
        let avg: f64 = probs
            .iter()
            .zip(etas)
            .map(|(p, eta)| p * gaussian_rci(eta, mu).unwrap())
            .sum();
        assert!(lhs >= avg - shannon(&probs) - 1e-9);
    }
}
