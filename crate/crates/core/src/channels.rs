//! Channel algebra over Kraus lists, Choi states, and the named channels
//! used throughout the crate.

use crate::condsim::SimulationDescriptor;
use crate::error::{Error, Result};
use crate::opcore::{
    c, cr, eig_hermitian, identity, ket_bra, kron, max_abs, max_abs_diff, CMat, DensityMatrix,
    Party, SubsystemSignature, TOL,
};

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::OutOfRange(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// Completely positive trace-preserving map `d_in -> d_out`, stored as a
/// Kraus list. The Choi state is derived on demand.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMat>,
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators, checking `Σ K†K = I`.
    pub fn from_kraus(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        let mut sum = CMat::zeros(d_in, d_in);
        for k in &kraus {
            if k.shape() != (d_out, d_in) {
                return Err(Error::InvalidChannel(
                    "Kraus operators with different shapes".into(),
                ));
            }
            sum += k.adjoint() * k;
        }
        let dev = max_abs_diff(&sum, &identity(d_in));
        if dev > TOL.state_equality {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving: |Σ K†K - I| = {dev:e}"
            )));
        }
        Ok(Self { d_in, d_out, kraus })
    }

    /// Recovers a minimal Kraus list from a Choi state on `A:d_in ⊗ B:d_out`
    /// by eigendecomposition of `d_in · ρ`, dropping eigenvalues below the
    /// support threshold.
    pub fn from_choi(choi: &DensityMatrix) -> Result<Self> {
        let sig = choi.signature();
        if sig.len() != 2 {
            return Err(Error::InvalidSignature(
                "Choi state must be bipartite A ⊗ B".into(),
            ));
        }
        let (d_in, d_out) = (sig.dims()[0], sig.dims()[1]);
        let j = choi.matrix().scale(d_in as f64);
        let eig = eig_hermitian(&j)?;
        let mut kraus = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam < TOL.support {
                continue;
            }
            let v = eig.vectors.column(k);
            let s = lam.sqrt();
            kraus.push(CMat::from_fn(d_out, d_in, |o, i| v[i * d_out + o] * s));
        }
        Self::from_kraus(kraus)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// `Σ_k K_k X K_k†` for an arbitrary (not necessarily positive) operator.
    pub fn apply_op(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.d_in || x.ncols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, channel input is {}",
                x.nrows(),
                x.ncols(),
                self.d_in
            )));
        }
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    /// Channel action on a state. The output is labelled with the input's
    /// party when the input is a single subsystem, `B` otherwise.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_op(rho.matrix())?;
        let party = match rho.signature().labels() {
            [p] => *p,
            _ => Party::B,
        };
        DensityMatrix::new(out, SubsystemSignature::single(party, self.d_out))
    }

    /// Unit-trace Choi state `(I ⊗ E)(|Φ><Φ|)` on `A:d_in ⊗ B:d_out`.
    pub fn choi(&self) -> DensityMatrix {
        let d = self.d_in;
        let mut m = CMat::zeros(d * self.d_out, d * self.d_out);
        for i in 0..d {
            for j in 0..d {
                let block = self
                    .apply_op(&ket_bra(d, i, j))
                    .expect("basis operator fits");
                m += kron(&ket_bra(d, i, j), &block);
            }
        }
        DensityMatrix::new(
            m.unscale(d as f64),
            SubsystemSignature::bipartite(d, self.d_out),
        )
        .expect("Choi state of a CPTP map is a state")
    }

    /// `outer ∘ self`: apply `self` first, then `outer`.
    pub fn then(&self, outer: &QuantumChannel) -> Result<Self> {
        if outer.d_in != self.d_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.d_in, self.d_out, outer.d_in, outer.d_out
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * outer.kraus.len());
        for g in &outer.kraus {
            for f in &self.kraus {
                let k = g * f;
                if max_abs(&k) > 0.0 {
                    kraus.push(k);
                }
            }
        }
        Self::from_kraus(kraus)
    }

    pub fn tensor(&self, other: &QuantumChannel) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        Self {
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
            kraus,
        }
    }

    /// Embeds the output into a larger space spanned by the first `d_out`
    /// basis vectors.
    pub fn embed_output(&self, d_new: usize) -> Result<Self> {
        if d_new < self.d_out {
            return Err(Error::DimensionMismatch(
                "embedding must not shrink the output".into(),
            ));
        }
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                CMat::from_fn(d_new, self.d_in, |o, i| {
                    if o < self.d_out {
                        k[(o, i)]
                    } else {
                        cr(0.0)
                    }
                })
            })
            .collect();
        Ok(Self {
            d_in: self.d_in,
            d_out: d_new,
            kraus,
        })
    }

    /// `|Σ K†K - I|_max`.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut sum = CMat::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        max_abs_diff(&sum, &identity(self.d_in))
    }

    /// Max deviation between two channels over the operator basis `|i><j|`.
    pub fn distance_on_basis(&self, other: &QuantumChannel) -> Result<f64> {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return Err(Error::DimensionMismatch(
                "channels with different shapes".into(),
            ));
        }
        let mut worst = 0.0_f64;
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let e = ket_bra(self.d_in, i, j);
                worst = worst.max(max_abs_diff(&self.apply_op(&e)?, &other.apply_op(&e)?));
            }
        }
        Ok(worst)
    }

    // ---- named channels ----

    pub fn identity(d: usize) -> Self {
        Self {
            d_in: d,
            d_out: d,
            kraus: vec![identity(d)],
        }
    }

    /// Qubit dephasing `ρ -> (1-q)ρ + q ZρZ`.
    pub fn dephasing(q: f64) -> Result<Self> {
        check_probability("q", q)?;
        Self::from_kraus(vec![
            identity(2).scale((1.0 - q).sqrt()),
            pauli_z().scale(q.sqrt()),
        ])
    }

    /// Qubit Pauli channel with probabilities `(p_I, p_X, p_Y, p_Z)`.
    pub fn pauli(probs: [f64; 4]) -> Result<Self> {
        for (n, p) in ["p_I", "p_X", "p_Y", "p_Z"].iter().zip(probs) {
            check_probability(n, p)?;
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!(
                "Pauli probabilities sum to {total}"
            )));
        }
        let ops = [identity(2), pauli_x(), pauli_y(), pauli_z()];
        Self::from_kraus(
            ops.iter()
                .zip(probs)
                .map(|(u, p)| u.scale(p.sqrt()))
                .collect(),
        )
    }

    /// Qudit erasure: output dimension `d + 1`, flag `|e>` is basis index `d`.
    pub fn erasure(d: usize, p: f64) -> Result<Self> {
        check_probability("p", p)?;
        let mut kraus =
            vec![Self::identity(d).embed_output(d + 1)?.kraus[0].scale((1.0 - p).sqrt())];
        for j in 0..d {
            let mut k = CMat::zeros(d + 1, d);
            k[(d, j)] = cr(p.sqrt());
            kraus.push(k);
        }
        Self::from_kraus(kraus)
    }

    /// Replacement channel `ρ -> Tr(ρ) σ` from `d_in` into `σ`'s space.
    pub fn replacer(sigma: &DensityMatrix, d_in: usize) -> Result<Self> {
        let eig = eig_hermitian(sigma.matrix())?;
        let d_out = sigma.dim();
        let mut kraus = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam < TOL.support {
                continue;
            }
            let v = eig.vectors.column(k);
            for j in 0..d_in {
                kraus.push(CMat::from_fn(d_out, d_in, |o, i| {
                    if i == j {
                        v[o] * lam.sqrt()
                    } else {
                        cr(0.0)
                    }
                }));
            }
        }
        Self::from_kraus(kraus)
    }

    /// Qubit channel `ρ -> Tr(ρ)|0><0|`.
    pub fn replacer0() -> Self {
        Self::replacer(&DensityMatrix::basis(Party::B, 2, 0), 2).expect("valid replacer")
    }

    /// Erasure-flag channel `ρ -> Tr(ρ)|e><e|` from a qudit into `d + 1`.
    pub fn erasure_flag(d: usize) -> Self {
        Self::replacer(&DensityMatrix::basis(Party::B, d + 1, d), d).expect("valid replacer")
    }

    /// Dephasing then erasure, built from its four Kraus operators.
    pub fn dephrasure(p: f64, q: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        let mut e0 = CMat::zeros(3, 2);
        e0[(0, 0)] = cr(((1.0 - p) * (1.0 - q)).sqrt());
        e0[(1, 1)] = cr(((1.0 - p) * (1.0 - q)).sqrt());
        let mut e1 = CMat::zeros(3, 2);
        e1[(0, 0)] = cr(((1.0 - p) * q).sqrt());
        e1[(1, 1)] = cr(-((1.0 - p) * q).sqrt());
        let mut e2 = CMat::zeros(3, 2);
        e2[(2, 0)] = cr(p.sqrt());
        let mut e3 = CMat::zeros(3, 2);
        e3[(2, 1)] = cr(p.sqrt());
        Self::from_kraus(vec![e0, e1, e2, e3])
    }

    /// `p·replacer0 + (1-p)·identity`.
    pub fn dad(p: f64) -> Result<Self> {
        ChannelEnsemble::dad(p)?.mixture()
    }

    /// `erasure(p) ∘ inner`.
    pub fn pipeline(inner: &QuantumChannel, p: f64) -> Result<Self> {
        inner.then(&Self::erasure(inner.d_out, p)?)
    }
}

/// One component of a channel mixture.
#[derive(Clone, Debug)]
pub struct EnsembleEntry {
    pub prob: f64,
    pub channel: QuantumChannel,
    pub sim: Option<SimulationDescriptor>,
}

/// Probability-weighted list of channels sharing input and output spaces.
#[derive(Clone, Debug)]
pub struct ChannelEnsemble {
    entries: Vec<EnsembleEntry>,
}

impl ChannelEnsemble {
    pub fn new(components: Vec<(f64, QuantumChannel)>) -> Result<Self> {
        Self::from_entries(
            components
                .into_iter()
                .map(|(prob, channel)| EnsembleEntry {
                    prob,
                    channel,
                    sim: None,
                })
                .collect(),
        )
    }

    pub fn from_entries(entries: Vec<EnsembleEntry>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("empty ensemble".into()))?;
        let (d_in, d_out) = (first.channel.d_in, first.channel.d_out);
        let mut total = 0.0;
        for (i, e) in entries.iter().enumerate() {
            if e.prob < 0.0 || e.prob.is_nan() {
                return Err(Error::InvalidEnsemble(format!(
                    "entry {i} has probability {}",
                    e.prob
                )));
            }
            if e.channel.d_in != d_in || e.channel.d_out != d_out {
                return Err(Error::InvalidEnsemble(format!(
                    "entry {i} maps {} -> {}, expected {d_in} -> {d_out}",
                    e.channel.d_in, e.channel.d_out
                )));
            }
            total += e.prob;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { entries })
    }

    /// `p·replacer0 + (1-p)·identity` (components in that order).
    pub fn dad(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Self::new(vec![
            (p, QuantumChannel::replacer0()),
            (1.0 - p, QuantumChannel::identity(2)),
        ])
    }

    /// `(1-p)·dephasing(q) + p·E_e` on the common qutrit output.
    pub fn dephrasure(p: f64, q: f64) -> Result<Self> {
        check_probability("p", p)?;
        Self::new(vec![
            (1.0 - p, QuantumChannel::dephasing(q)?.embed_output(3)?),
            (p, QuantumChannel::erasure_flag(2)),
        ])
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [EnsembleEntry] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.prob).collect()
    }

    pub fn d_in(&self) -> usize {
        self.entries[0].channel.d_in
    }

    pub fn d_out(&self) -> usize {
        self.entries[0].channel.d_out
    }

    /// Average channel, Kraus list `{√p_i K_k^(i)}`.
    pub fn mixture(&self) -> Result<QuantumChannel> {
        let mut kraus = Vec::new();
        for e in &self.entries {
            if e.prob == 0.0 {
                continue;
            }
            kraus.extend(e.channel.kraus.iter().map(|k| k.scale(e.prob.sqrt())));
        }
        QuantumChannel::from_kraus(kraus)
    }
}
