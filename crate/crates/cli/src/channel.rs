use chansim::bounds::{
    continuous_report, dad_bound, dephrasure_capacities, finite_size_report, lossy_mixture_report,
    memory_report, pipeline_report, CapacityReport,
};
use chansim::channels::QuantumChannel;
use chansim::condsim::FiniteSizeParams;
use chansim::entro::{ree_ppt, ReeOptions};
use clap::ValueEnum;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelId {
    Dephrasure,
    Dad,
    Pipeline,
    LossyMixture,
    LossyContinuous,
    Memory,
    FiniteSize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Density {
    /// Constant on `[0, eta_max]`.
    Uniform,
    /// Proportional to `eta` on `[0, eta_max]`.
    Linear,
}

#[derive(clap::Args, Clone, Debug)]
pub struct ChannelArgs {
    /// Erasure (dephrasure, pipeline) or damping (dad) probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Dephasing probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// REE of the inner program state in a pipeline.
    #[arg(long)]
    pub inner_ree: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub probs: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Density::Uniform)]
    pub density: Density,
    #[arg(long)]
    pub eta_max: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    /// Component REEs of one use, comma separated; repeat once per use.
    #[arg(long = "ree")]
    pub ree: Vec<String>,
    /// Joint distribution over component tuples, first use slowest.
    #[arg(long, value_delimiter = ',')]
    pub joint: Vec<f64>,
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Asymptotic bound the finite-size correction is applied to.
    #[arg(long)]
    pub sum_ree: Option<f64>,
}

impl ChannelArgs {
    pub fn set(&mut self, name: &str, v: f64) {
        match name.replace('_', "-").as_str() {
            "p" => self.p = Some(v),
            "q" => self.q = Some(v),
            "inner-ree" => self.inner_ree = Some(v),
            "eta-max" => self.eta_max = Some(v),
            "n" => self.n = Some(v.round()),
            "eps" => self.eps = Some(v),
            "alpha" => self.alpha = v,
            "sum-ree" => self.sum_ree = Some(v),
            _ => {}
        }
    }
}

fn sweepable(ch: ChannelId) -> &'static [&'static str] {
    match ch {
        ChannelId::Dephrasure => &["p", "q"],
        ChannelId::Dad => &["p"],
        ChannelId::Pipeline => &["p", "q", "inner-ree"],
        ChannelId::LossyMixture | ChannelId::Memory => &[],
        ChannelId::LossyContinuous => &["eta-max"],
        ChannelId::FiniteSize => &["n", "eps", "alpha", "sum-ree"],
    }
}

pub fn check_sweepable(ch: ChannelId, name: &str) -> Result<(), Failure> {
    let allowed = sweepable(ch);
    if allowed.contains(&name.replace('_', "-").as_str()) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "parameter `{name}` cannot be swept for {ch}; allowed: {allowed:?}"
        )))
    }
}

impl std::fmt::Display for ChannelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, ch: ChannelId) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{ch} needs --{flag}")))
}

pub fn report(ch: ChannelId, a: &ChannelArgs) -> Result<CapacityReport, Failure> {
    let r = match ch {
        ChannelId::Dephrasure => dephrasure_capacities(need(a.p, "p", ch)?, need(a.q, "q", ch)?)?,
        ChannelId::Dad => dad_bound(need(a.p, "p", ch)?)?,
        ChannelId::Pipeline => {
            let inner = match (a.inner_ree, a.q) {
                (Some(e), _) => e,
                (None, Some(q)) => {
                    ree_ppt(
                        &QuantumChannel::dephasing(q)?.choi(),
                        &ReeOptions::default(),
                    )?
                    .value
                }
                (None, None) => {
                    return Err(Failure::Usage("pipeline needs --inner-ree or --q".into()))
                }
            };
            pipeline_report(inner, need(a.p, "p", ch)?)?
        }
        ChannelId::LossyMixture => {
            if a.probs.is_empty() || a.probs.len() != a.etas.len() {
                return Err(Failure::Usage(
                    "lossy-mixture needs --probs and --etas of equal length".into(),
                ));
            }
            lossy_mixture_report(&a.probs, &a.etas)?
        }
        ChannelId::LossyContinuous => {
            let m = need(a.eta_max, "eta-max", ch)?;
            if !(m > 0.0) {
                return Err(Failure::Usage(format!("eta-max must be positive, got {m}")));
            }
            let (r, _) = match a.density {
                Density::Uniform => continuous_report("uniform", |_| 1.0 / m, m, a.abs_tol)?,
                Density::Linear => {
                    continuous_report("linear", |x| 2.0 * x / (m * m), m, a.abs_tol)?
                }
            };
            r
        }
        ChannelId::Memory => {
            if a.ree.is_empty() || a.joint.is_empty() {
                return Err(Failure::Usage(
                    "memory needs --ree (once per use) and --joint".into(),
                ));
            }
            let uses = a
                .ree
                .iter()
                .map(|s| {
                    s.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<f64>()
                                .map_err(|e| Failure::Usage(format!("--ree `{s}`: {e}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            memory_report(&uses, &a.joint)?
        }
        ChannelId::FiniteSize => {
            let n = need(a.n, "n", ch)?;
            if !(n >= 1.0) || n.fract() != 0.0 && n < 1e15 {
                return Err(Failure::Usage(format!(
                    "n must be a positive integer, got {n}"
                )));
            }
            let params = FiniteSizeParams::new(n as u64, need(a.eps, "eps", ch)?, a.alpha)?;
            finite_size_report(&params, need(a.sum_ree, "sum-ree", ch)?)?
        }
    };
    Ok(r)
}
