use chansim::cvgauss::{
    fock_covariance, fock_oracle, fock_rci, gaussian_rci, symplectic_entropy, FockPreparation,
};
use chansim::entro::vn_entropy;
use clap::ValueEnum;
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrepKind {
    Thermal,
    ThermalPair,
    Tmsv,
    QuasiChoi,
}

pub fn preparation(
    kind: PrepKind,
    nu: Option<f64>,
    nu_b: Option<f64>,
    mu: Option<f64>,
    eta: Option<f64>,
) -> Result<FockPreparation, Failure> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("{kind:?} needs --{flag}")))
    };
    Ok(match kind {
        PrepKind::Thermal => FockPreparation::Thermal {
            nu: need(nu, "nu")?,
        },
        PrepKind::ThermalPair => FockPreparation::ThermalPair {
            nu_a: need(nu, "nu")?,
            nu_b: need(nu_b, "nu-b")?,
        },
        PrepKind::Tmsv => FockPreparation::Tmsv {
            mu: need(mu, "mu")?,
        },
        PrepKind::QuasiChoi => FockPreparation::QuasiChoi {
            eta: need(eta, "eta")?,
            mu: need(mu, "mu")?,
        },
    })
}

#[derive(Serialize)]
pub struct Comparison {
    pub preparation: String,
    pub cutoff: usize,
    pub trace_deficit: f64,
    pub max_mean_deviation: f64,
    pub max_cov_deviation: f64,
    pub entropy_moments: f64,
    pub entropy_fock: f64,
    pub rci_moments: Option<f64>,
    pub rci_fock: Option<f64>,
}

impl Comparison {
    pub fn rows(&self) -> Vec<(&'static str, f64, f64)> {
        let mut rows = vec![("entropy", self.entropy_moments, self.entropy_fock)];
        if let (Some(m), Some(f)) = (self.rci_moments, self.rci_fock) {
            rows.push(("rci", m, f));
        }
        rows
    }
}

pub fn compare(prep: &FockPreparation, cutoff: usize) -> Result<Comparison, Failure> {
    let f = fock_oracle(prep, cutoff)?;
    let g = prep.gaussian()?;
    let (mean, cov) = fock_covariance(&f.state, cutoff)?;
    let (rci_moments, rci_fock) = match *prep {
        FockPreparation::QuasiChoi { eta, mu } => {
            (Some(gaussian_rci(eta, mu)?), Some(fock_rci(prep, cutoff)?))
        }
        _ => (None, None),
    };
    Ok(Comparison {
        preparation: format!("{prep:?}"),
        cutoff,
        trace_deficit: f.trace_deficit,
        max_mean_deviation: (&mean - g.mean()).amax(),
        max_cov_deviation: (&cov - g.cov()).amax(),
        entropy_moments: symplectic_entropy(&g)?,
        entropy_fock: vn_entropy(&f.state)?,
        rci_moments,
        rci_fock,
    })
}
