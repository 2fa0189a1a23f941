//! Capacity reports assembled from the simulation bounds.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::channels::ChannelEnsemble;
use crate::condsim::{finite_size_bound, memory_bound, FiniteSizeParams};
use crate::cvgauss::{continuous_mixture_upper, lossy_mixture_bounds, Quadrature};
use crate::entro::{h2, reverse_coherent_info};
use crate::error::{Error, Result};

/// Two-way capacities: entanglement distillation, quantum communication,
/// private communication and secret key. `None` where only bounds exist.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CapacityChain {
    pub d2: Option<f64>,
    pub q2: Option<f64>,
    pub p2: Option<f64>,
    pub k: Option<f64>,
}

impl CapacityChain {
    pub fn all(v: f64) -> Self {
        Self {
            d2: Some(v),
            q2: Some(v),
            p2: Some(v),
            k: Some(v),
        }
    }

    /// `D₂ = Q₂ ≤ P₂ = K` on the known entries.
    pub fn is_ordered(&self) -> bool {
        let eq = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => (x - y).abs() <= 1e-12,
            _ => true,
        };
        let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => x <= y + 1e-12,
            _ => true,
        };
        eq(self.d2, self.q2) && eq(self.p2, self.k) && le(self.q2, self.p2) && le(self.d2, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub channel_id: String,
    pub params: BTreeMap<String, f64>,
    pub lower: Option<f64>,
    pub upper: f64,
    pub exact: bool,
    pub method_notes: Vec<(String, String)>,
    pub capacity_chain: CapacityChain,
}

impl CapacityReport {
    fn new(channel_id: &str, params: &[(&str, f64)]) -> Self {
        Self {
            channel_id: channel_id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lower: None,
            upper: f64::INFINITY,
            exact: false,
            method_notes: Vec::new(),
            capacity_chain: CapacityChain::default(),
        }
    }

    fn note(mut self, quantity: &str, method: &str) -> Self {
        self.method_notes
            .push((quantity.to_string(), method.to_string()));
        self
    }

    /// Short method tag for tabular output.
    pub fn method(&self) -> String {
        self.method_notes
            .iter()
            .map(|(q, m)| format!("{q}:{m}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Checks the report invariants.
    pub fn validate(&self) -> Result<()> {
        if let Some(lo) = self.lower {
            if lo > self.upper + 1e-9 {
                return Err(Error::Numerical(format!(
                    "lower {lo} exceeds upper {}",
                    self.upper
                )));
            }
        }
        if self.exact && self.lower != Some(self.upper) {
            return Err(Error::Numerical(
                "exact report with differing bounds".into(),
            ));
        }
        if !self.capacity_chain.is_ordered() {
            return Err(Error::Numerical(format!(
                "capacity chain out of order: {:?}",
                self.capacity_chain
            )));
        }
        Ok(())
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// All four two-way capacities of the dephrasure channel,
/// `(1-p)(1-H₂(q))`.
pub fn dephrasure_capacities(p: f64, q: f64) -> Result<CapacityReport> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    let v = pipeline_bound(1.0 - h2(q)?, p)?;
    let mut r = CapacityReport::new("dephrasure", &[("p", p), ("q", q)])
        .note(
            "upper",
            "ree-chain: (1-p) E_R(dephasing Choi) + p E_R(flag state)",
        )
        .note(
            "lower",
            "erasure post-selection then dephasing distillation 1-H2(q)",
        );
    r.lower = Some(v);
    r.upper = v;
    r.exact = true;
    r.capacity_chain = CapacityChain::all(v);
    r.validate()?;
    Ok(r)
}

/// `K ≤ 1 - p` for the damping-mixture channel; no lower bound.
pub fn dad_bound(p: f64) -> Result<CapacityReport> {
    check_unit("p", p)?;
    let mut r = CapacityReport::new("dad", &[("p", p)]).note(
        "upper",
        "ree-chain: component REEs 0 (replacer) and 1 (identity)",
    );
    r.upper = 1.0 - p;
    r.validate()?;
    Ok(r)
}

/// `(1-p) E_R` of a channel followed by erasure with probability `p`.
pub fn pipeline_bound(inner_ree: f64, p: f64) -> Result<f64> {
    check_unit("p", p)?;
    if !(inner_ree >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "inner REE {inner_ree} is negative"
        )));
    }
    Ok((1.0 - p) * inner_ree)
}

pub fn pipeline_report(inner_ree: f64, p: f64) -> Result<CapacityReport> {
    let mut r = CapacityReport::new("pipeline", &[("inner_ree", inner_ree), ("p", p)])
        .note("upper", "ree-chain: (1-p) times the inner program REE");
    r.upper = pipeline_bound(inner_ree, p)?;
    r.validate()?;
    Ok(r)
}

/// `Σ p_i E_R(σ_i)` above, reverse coherent information of the mixture
/// (clamped at zero) below.
pub fn ensemble_bound(ens: &ChannelEnsemble, ree_per_component: &[f64]) -> Result<CapacityReport> {
    if ree_per_component.len() != ens.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} REE values for {} components",
            ree_per_component.len(),
            ens.len()
        )));
    }
    let upper = ens
        .probabilities()
        .iter()
        .zip(ree_per_component)
        .map(|(p, e)| p * e)
        .sum();
    let rci = reverse_coherent_info(&ens.mixture()?)?;
    let mut r = CapacityReport::new("ensemble", &[("components", ens.len() as f64)])
        .note("upper", "ree-chain over control-program blocks")
        .note("lower", "reverse coherent information of the mixture");
    r.upper = upper;
    r.lower = Some(rci.max(0.0));
    r.validate()?;
    Ok(r)
}

/// Repeaterless mixture upper bound and the entropy-corrected lower bound.
pub fn lossy_mixture_report(probs: &[f64], etas: &[f64]) -> Result<CapacityReport> {
    let (lo, hi) = lossy_mixture_bounds(probs, etas)?;
    let mut params: Vec<(String, f64)> = Vec::new();
    for (i, (p, e)) in probs.iter().zip(etas).enumerate() {
        params.push((format!("p{i}"), *p));
        params.push((format!("eta{i}"), *e));
    }
    let mut r = CapacityReport::new("lossy-mixture", &[])
        .note("upper", "average of -log2(1-eta_i)")
        .note(
            "lower",
            "mixture reverse coherent information, concavity minus H(p)",
        );
    r.params = params.into_iter().collect();
    r.upper = hi;
    r.lower = Some(lo.max(0.0));
    r.validate()?;
    Ok(r)
}

/// Upper bound for a continuous transmissivity density on `[0, η_max]`.
pub fn continuous_report(
    label: &str,
    density: impl Fn(f64) -> f64,
    eta_max: f64,
    abs_tol: f64,
) -> Result<(CapacityReport, Quadrature)> {
    let q = continuous_mixture_upper(density, eta_max, abs_tol)?;
    let mut r = CapacityReport::new(
        "lossy-continuous",
        &[("eta_max", eta_max), ("quadrature_error", q.error_estimate)],
    )
    .note(
        "upper",
        &format!("integral of -p(eta) log2(1-eta), density {label}"),
    );
    r.upper = q.value;
    r.validate()?;
    Ok((r, q))
}

/// Correlated uses: `Σ_i p_i Σ_k E_R(σ^{k,i_k})` per use.
pub fn memory_report(component_ree: &[Vec<f64>], joint_p: &[f64]) -> Result<CapacityReport> {
    let v = memory_bound(component_ree, joint_p)?;
    let mut r = CapacityReport::new("memory", &[("uses", component_ree.len() as f64)]).note(
        "upper",
        "ree-chain over the joint control register, per block sum of use REEs",
    );
    r.upper = v;
    r.validate()?;
    Ok(r)
}

/// `n`-use bound with failure probability `ε`.
pub fn finite_size_report(params: &FiniteSizeParams, sum_ree: f64) -> Result<CapacityReport> {
    let mut r = CapacityReport::new(
        "finite-size",
        &[
            ("n", params.n() as f64),
            ("eps", params.eps()),
            ("alpha", params.alpha()),
            ("asymptotic", sum_ree),
        ],
    )
    .note(
        "upper",
        "asymptotic bound rescaled by 1-4 eps alpha plus 2 H2(eps)/n",
    );
    r.upper = finite_size_bound(params, sum_ree)?;
    r.validate()?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::QuantumChannel;
    use crate::condsim::product_distribution;
    use crate::entro::{ree_ppt, ReeOptions};

    #[test]
    fn dephrasure_values() {
        assert_eq!(dephrasure_capacities(0.0, 0.0).unwrap().upper, 1.0);
        let r = dephrasure_capacities(0.2, 0.1).unwrap();
        assert!((r.upper - 0.42480).abs() < 1e-4);
        assert!(r.exact && r.lower == Some(r.upper));
        assert_eq!(dephrasure_capacities(1.0, 0.3).unwrap().upper, 0.0);
        assert!(dephrasure_capacities(1.2, 0.3).is_err());
    }

    #[test]
    fn dephrasure_equals_pipeline_and_dominates_rci() {
        for i in 0..50 {
            for j in 0..50 {
                let (p, q) = (i as f64 / 49.0, j as f64 / 49.0);
                let r = dephrasure_capacities(p, q).unwrap();
                assert_eq!(r.upper, pipeline_bound(1.0 - h2(q).unwrap(), p).unwrap());
                let rci = (1.0 - p) * (1.0 - h2(q).unwrap()) - h2(p).unwrap();
                assert!(rci.max(0.0) <= r.upper + 1e-15);
                assert!(r.capacity_chain.is_ordered());
            }
        }
    }

    #[test]
    fn dad_values() {
        assert_eq!(dad_bound(0.0).unwrap().upper, 1.0);
        let r = dad_bound(0.3).unwrap();
        assert!((r.upper - 0.7).abs() < 1e-15);
        assert_eq!(r.lower, None);
        assert_eq!(dad_bound(1.0).unwrap().upper, 0.0);
    }

    #[test]
    fn pipeline_from_numerical_program() {
        let q = 0.15;
        let inner = QuantumChannel::dephasing(q).unwrap();
        let ree = ree_ppt(&inner.choi(), &ReeOptions::default())
            .unwrap()
            .value;
        let half = pipeline_bound(ree, 0.5).unwrap();
        assert!((half - 0.5 * ree).abs() < 1e-15);
        assert!((half - 0.5 * (1.0 - h2(q).unwrap())).abs() < 1e-4);
        assert_eq!(pipeline_bound(ree, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn ensemble_reports() {
        let p = 0.3;
        let r = ensemble_bound(&ChannelEnsemble::dad(p).unwrap(), &[0.0, 1.0]).unwrap();
        assert!((r.upper - (1.0 - p)).abs() < 1e-15);
        let (p, q) = (0.2, 0.1);
        let ens = ChannelEnsemble::dephrasure(p, q).unwrap();
        let r = ensemble_bound(&ens, &[1.0 - h2(q).unwrap(), 0.0]).unwrap();
        assert!((r.upper - (1.0 - p) * (1.0 - h2(q).unwrap())).abs() < 1e-15);
        let rci = (1.0 - p) * (1.0 - h2(q).unwrap()) - h2(p).unwrap();
        assert!((r.lower.unwrap() - rci.max(0.0)).abs() < 1e-10);
    }

    #[test]
    fn degrading_a_component_never_raises_the_bound() {
        let ens = ChannelEnsemble::dad(0.4).unwrap();
        let a = ensemble_bound(&ens, &[0.0, 1.0]).unwrap().upper;
        let b = ensemble_bound(&ens, &[0.0, 0.6]).unwrap().upper;
        assert!(b <= a);
    }

    #[test]
    fn lossy_mixture_matches_cv_module() {
        let r = lossy_mixture_report(&[0.5, 0.5], &[0.5, 0.8]).unwrap();
        assert!((r.upper - 1.660964).abs() < 1e-4);
        assert!((r.lower.unwrap() - 0.660964).abs() < 1e-4);
        let (lo, hi) = lossy_mixture_bounds(&[0.5, 0.5], &[0.5, 0.8]).unwrap();
        assert_eq!((r.lower.unwrap(), r.upper), (lo, hi));
    }

    #[test]
    fn memory_and_finite_size_reports() {
        let ree = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        assert_eq!(
            memory_report(&ree, &[0.5, 0.0, 0.0, 0.5]).unwrap().upper,
            1.0
        );
        let joint = product_distribution(&[vec![0.2, 0.8], vec![0.5, 0.5]]);
        assert!((memory_report(&ree, &joint).unwrap().upper - 1.3).abs() < 1e-12);
        let fs = finite_size_report(&FiniteSizeParams::new(1000, 0.01, 1.0).unwrap(), 0.7).unwrap();
        assert!((fs.upper - 0.7293).abs() < 1e-3);
    }

    #[test]
    fn chain_order_detects_violations() {
        let bad = CapacityChain {
            d2: Some(0.5),
            q2: Some(0.5),
            p2: Some(0.4),
            k: Some(0.4),
        };
        assert!(!bad.is_ordered());
        assert!(CapacityChain::all(0.3).is_ordered());
    }
}
