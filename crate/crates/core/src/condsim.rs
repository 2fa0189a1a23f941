//! Control-program simulation of channel mixtures, the REE chain bound it
//! implies, finite-size corrections and correlated (memory) uses.

use crate::channels::{ChannelEnsemble, QuantumChannel};
use crate::entro::h2;
use crate::error::{Error, Result};
use crate::opcore::{
    ket_bra, kron, max_abs_diff, submatrix, CMat, DensityMatrix, Party, SubsystemSignature,
};
use crate::telecov::{covariance_table, teleport_matrix, CorrectionTable, Covariance, WeylGroup};

/// How the local operations consume a program state.
#[derive(Clone, Debug)]
pub enum Locc {
    /// Bell detection on `(A, T)` followed by the tabulated corrections.
    Teleportation(CorrectionTable),
    /// An arbitrary channel `P ⊗ T -> T` acting on program and target.
    Generic(QuantumChannel),
}

/// Program state plus the map that turns it into one channel use.
#[derive(Clone, Debug)]
pub struct SimulationDescriptor {
    program: DensityMatrix,
    locc: Locc,
    d_in: usize,
    d_out: usize,
}

impl SimulationDescriptor {
    pub fn new(program: DensityMatrix, locc: Locc, d_in: usize) -> Result<Self> {
        let sig = program.signature();
        if sig.len() != 2 {
            return Err(Error::InvalidSignature("program must be A ⊗ B".into()));
        }
        let d_out = match &locc {
            Locc::Teleportation(t) => {
                if t.dim() != d_in || sig.dims()[0] != d_in {
                    return Err(Error::DimensionMismatch(format!(
                        "teleportation needs A:{d_in}, got A:{} and table {}",
                        sig.dims()[0],
                        t.dim()
                    )));
                }
                sig.dims()[1]
            }
            Locc::Generic(ch) => {
                if ch.d_in() != program.dim() * d_in {
                    return Err(Error::DimensionMismatch(format!(
                        "generic map takes {}, program ⊗ target is {}",
                        ch.d_in(),
                        program.dim() * d_in
                    )));
                }
                ch.d_out()
            }
        };
        Ok(Self {
            program,
            locc,
            d_in,
            d_out,
        })
    }

    /// Teleportation over the Choi state, available when the channel is
    /// Weyl covariant.
    pub fn teleportation(ch: &QuantumChannel) -> Result<Self> {
        match covariance_table(ch, &WeylGroup::new(ch.d_in()))? {
            Covariance::Covariant(table) => {
                Self::new(ch.choi(), Locc::Teleportation(table), ch.d_in())
            }
            Covariance::NotCovariant => Err(Error::NotCovariant),
        }
    }

    pub fn program(&self) -> &DensityMatrix {
        &self.program
    }

    pub fn locc(&self) -> &Locc {
        &self.locc
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `L(σ ⊗ x)` for a raw program matrix `sigma` (possibly scaled).
    fn apply_with(&self, sigma: &CMat, x: &CMat) -> Result<CMat> {
        match &self.locc {
            Locc::Teleportation(table) => {
                let dims = self.program.signature().dims();
                Ok(teleport_matrix(sigma, dims[0], dims[1], x, table)?.0)
            }
            Locc::Generic(ch) => ch.apply_op(&kron(sigma, x)),
        }
    }

    /// `L(σ_P ⊗ x)` on an arbitrary operator.
    pub fn apply_op(&self, x: &CMat) -> Result<CMat> {
        self.apply_with(self.program.matrix(), x)
    }

    /// Largest deviation from `ch` over the operator basis `|i><j|`.
    pub fn deviation(&self, ch: &QuantumChannel) -> Result<f64> {
        basis_deviation(ch, |x| self.apply_op(x))
    }
}

fn basis_deviation(ch: &QuantumChannel, f: impl Fn(&CMat) -> Result<CMat>) -> Result<f64> {
    let d = ch.d_in();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let x = ket_bra(d, i, j);
            worst = worst.max(max_abs_diff(&f(&x)?, &ch.apply_op(&x)?));
        }
    }
    Ok(worst)
}

impl ChannelEnsemble {
    /// Fills every missing descriptor with teleportation over the
    /// component's Choi state.
    pub fn with_teleportation(mut self) -> Result<Self> {
        for e in self.entries_mut() {
            if e.sim.is_none() {
                e.sim = Some(SimulationDescriptor::teleportation(&e.channel)?);
            }
        }
        Ok(self)
    }

    pub fn descriptors(&self) -> Result<Vec<SimulationDescriptor>> {
        self.entries()
            .iter()
            .enumerate()
            .map(|(i, e)| e.sim.clone().ok_or(Error::MissingDescriptor(i)))
            .collect()
    }
}

/// `θ = Σ_i p_i |i><i|_C ⊗ σ_i` together with its blocks.
#[derive(Clone, Debug)]
pub struct ControlProgramState {
    probs: Vec<f64>,
    programs: Vec<DensityMatrix>,
    realized: DensityMatrix,
}

impl ControlProgramState {
    pub fn from_blocks(probs: Vec<f64>, programs: Vec<DensityMatrix>) -> Result<Self> {
        if probs.is_empty() || probs.len() != programs.len() {
            return Err(Error::InvalidEnsemble(
                "blocks and probabilities must be nonempty and aligned".into(),
            ));
        }
        let psig = programs[0].signature().clone();
        if programs.iter().any(|s| *s.signature() != psig) {
            return Err(Error::DimensionMismatch(
                "program states differ in signature".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "block probabilities sum to {total}"
            )));
        }
        let n = probs.len();
        let dp = psig.total_dim();
        let mut m = CMat::zeros(n * dp, n * dp);
        for (i, (p, s)) in probs.iter().zip(&programs).enumerate() {
            m.view_mut((i * dp, i * dp), (dp, dp))
                .copy_from(&s.matrix().scale(*p));
        }
        let sig = SubsystemSignature::single(Party::C, n).concat(&psig);
        let realized = DensityMatrix::new(m, sig)?;
        Ok(Self {
            probs,
            programs,
            realized,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn programs(&self) -> &[DensityMatrix] {
        &self.programs
    }

    pub fn realized(&self) -> &DensityMatrix {
        &self.realized
    }

    pub fn control_dim(&self) -> usize {
        self.probs.len()
    }

    fn program_dim(&self) -> usize {
        self.programs[0].dim()
    }

    /// Block `<i|θ|i>_C = p_i σ_i`, read from the realized matrix.
    pub fn block(&self, i: usize) -> CMat {
        let dp = self.program_dim();
        let idx: Vec<usize> = (i * dp..(i + 1) * dp).collect();
        submatrix(self.realized.matrix(), &idx)
    }

    /// Largest entry between distinct control blocks.
    pub fn off_block_max(&self) -> f64 {
        let dp = self.program_dim();
        let m = self.realized.matrix();
        let mut worst = 0.0_f64;
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if r / dp != c / dp {
                    worst = worst.max(m[(r, c)].norm());
                }
            }
        }
        worst
    }
}

pub fn build_control_program(ens: &ChannelEnsemble) -> Result<ControlProgramState> {
    let programs = ens.descriptors()?.into_iter().map(|d| d.program).collect();
    ControlProgramState::from_blocks(ens.probabilities(), programs)
}

/// `Tr_C Σ_i C_i ⊗ L_i (θ ⊗ x)`, one control block at a time.
pub fn conditional_apply_op(
    theta: &ControlProgramState,
    descriptors: &[SimulationDescriptor],
    x: &CMat,
) -> Result<CMat> {
    if descriptors.len() != theta.control_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} descriptors for {} control blocks",
            descriptors.len(),
            theta.control_dim()
        )));
    }
    let d_in = descriptors[0].d_in;
    let d_out = descriptors[0].d_out;
    if x.nrows() != d_in
        || descriptors
            .iter()
            .any(|d| d.d_in != d_in || d.d_out != d_out)
    {
        return Err(Error::DimensionMismatch(format!(
            "input is {}, descriptors disagree or expect {d_in}",
            x.nrows()
        )));
    }
    let mut out = CMat::zeros(d_out, d_out);
    for (i, desc) in descriptors.iter().enumerate() {
        if theta.probs[i] == 0.0 {
            continue;
        }
        out += desc.apply_with(&theta.block(i), x)?;
    }
    Ok(out)
}

pub fn conditional_apply(
    theta: &ControlProgramState,
    descriptors: &[SimulationDescriptor],
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    let out = conditional_apply_op(theta, descriptors, rho.matrix())?;
    let d = out.nrows();
    DensityMatrix::new(out, SubsystemSignature::single(Party::B, d))
}

/// Choi state of the conditionally simulated channel.
pub fn conditional_choi(
    theta: &ControlProgramState,
    descriptors: &[SimulationDescriptor],
) -> Result<DensityMatrix> {
    let d = descriptors
        .first()
        .ok_or_else(|| Error::InvalidEnsemble("no descriptors".into()))?
        .d_in;
    let d_out = descriptors[0].d_out;
    let mut m = CMat::zeros(d * d_out, d * d_out);
    for i in 0..d {
        for j in 0..d {
            let e = ket_bra(d, i, j);
            m += kron(&e, &conditional_apply_op(theta, descriptors, &e)?);
        }
    }
    DensityMatrix::new(m.unscale(d as f64), SubsystemSignature::bipartite(d, d_out))
}

/// Largest basis-operator deviation between the control-program simulation
/// and the mixture. Missing descriptors are filled by teleportation.
pub fn verify_simulation(ens: &ChannelEnsemble) -> Result<f64> {
    let ens = ens.clone().with_teleportation()?;
    let theta = build_control_program(&ens)?;
    let desc = ens.descriptors()?;
    basis_deviation(&ens.mixture()?, |x| conditional_apply_op(&theta, &desc, x))
}

/// `E_R(θ)` across `CA|B` next to `Σ_i p_i E_R(σ_i)`.
#[derive(Clone, Debug)]
pub struct ChainBound {
    pub e_theta: f64,
    pub sum_bound: f64,
    pub components: Vec<f64>,
}

/// Evaluates both sides of the convexity chain with `oracle` and fails if
/// the flagged state exceeds the averaged bound by more than `tol`.
pub fn ree_chain_bound(
    theta: &ControlProgramState,
    oracle: impl Fn(&DensityMatrix) -> Result<f64>,
    tol: f64,
) -> Result<ChainBound> {
    let e_theta = oracle(theta.realized())?;
    let components = theta
        .programs
        .iter()
        .map(&oracle)
        .collect::<Result<Vec<_>>>()?;
    let sum_bound = theta
        .probs
        .iter()
        .zip(&components)
        .map(|(p, e)| p * e)
        .sum();
    if e_theta > sum_bound + tol {
        return Err(Error::ChainViolation {
            e_theta,
            sum_bound,
            tol,
        });
    }
    Ok(ChainBound {
        e_theta,
        sum_bound,
        components,
    })
}

/// Number of uses, failure probability and dimension constant.
#[derive(Clone, Copy, Debug)]
pub struct FiniteSizeParams {
    n: u64,
    eps: f64,
    alpha: f64,
}

impl FiniteSizeParams {
    pub fn new(n: u64, eps: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("n must be positive".into()));
        }
        if !(alpha >= 1.0) {
            return Err(Error::OutOfRange(format!(
                "alpha = {alpha} must be at least 1"
            )));
        }
        if !(eps > 0.0) || 1.0 - 4.0 * eps * alpha <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "eps = {eps} must lie in (0, 1/(4 alpha))"
            )));
        }
        Ok(Self { n, eps, alpha })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `R_n ≤ E/(1-4εα) + 2 H₂(ε)/((1-4εα) n)`.
pub fn finite_size_bound(params: &FiniteSizeParams, sum_ree: f64) -> Result<f64> {
    let k = 1.0 - 4.0 * params.eps * params.alpha;
    Ok(sum_ree / k + 2.0 * h2(params.eps)? / (k * params.n as f64))
}

/// Row-major index tuple of a flat position.
pub fn unflatten(mut flat: usize, sizes: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        idx[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    idx
}

fn check_joint(sizes: &[usize], joint_p: &[f64]) -> Result<()> {
    let n: usize = sizes.iter().product();
    if sizes.is_empty() || joint_p.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "joint distribution has {} entries, index space has {n}",
            joint_p.len()
        )));
    }
    let total: f64 = joint_p.iter().sum();
    if joint_p.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidEnsemble(format!(
            "joint probabilities sum to {total}"
        )));
    }
    Ok(())
}

/// `θ = Σ_i p_i |i><i| ⊗ σ^{1,i_1} ⊗ … ⊗ σ^{M,i_M}` over row-major tuples.
pub fn build_memory_control_program(
    mem: &[ChannelEnsemble],
    joint_p: &[f64],
) -> Result<ControlProgramState> {
    let sizes: Vec<usize> = mem.iter().map(|e| e.len()).collect();
    check_joint(&sizes, joint_p)?;
    let descs = mem
        .iter()
        .map(|e| e.descriptors())
        .collect::<Result<Vec<_>>>()?;
    let mut programs = Vec::with_capacity(joint_p.len());
    for flat in 0..joint_p.len() {
        let idx = unflatten(flat, &sizes);
        let mut state: Option<DensityMatrix> = None;
        for (k, &i) in idx.iter().enumerate() {
            let s = descs[k][i].program();
            state = Some(match state {
                None => s.clone(),
                Some(acc) => acc.tensor(s),
            });
        }
        programs.push(state.expect("at least one use"));
    }
    ControlProgramState::from_blocks(joint_p.to_vec(), programs)
}

/// `Σ_i p_i Σ_k E_R(σ^{k,i_k})` from per-use component values.
pub fn memory_bound(component_ree: &[Vec<f64>], joint_p: &[f64]) -> Result<f64> {
    let sizes: Vec<usize> = component_ree.iter().map(|v| v.len()).collect();
    check_joint(&sizes, joint_p)?;
    let mut total = 0.0;
    for (flat, &p) in joint_p.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let idx = unflatten(flat, &sizes);
        let s: f64 = idx
            .iter()
            .enumerate()
            .map(|(k, &i)| component_ree[k][i])
            .sum();
        total += p * s;
    }
    Ok(total)
}

/// Joint table of a product distribution, row-major.
pub fn product_distribution(marginals: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![1.0];
    for m in marginals {
        out = out
            .iter()
            .flat_map(|a| m.iter().map(move |b| a * b))
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entro::{ree_ppt, ReeOptions};
    use crate::opcore::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dad(p: f64) -> ChannelEnsemble {
        ChannelEnsemble::dad(p)
            .unwrap()
            .with_teleportation()
            .unwrap()
    }

    #[test]
    fn single_block_is_flag_times_program() {
        let ens = ChannelEnsemble::new(vec![(1.0, QuantumChannel::identity(2))])
            .unwrap()
            .with_teleportation()
            .unwrap();
        let theta = build_control_program(&ens).unwrap();
        let expect = DensityMatrix::basis(Party::C, 1, 0).tensor(&DensityMatrix::bell(2));
        assert!(max_abs_diff(theta.realized().matrix(), expect.matrix()) < 1e-15);
    }

    #[test]
    fn dad_control_program_blocks() {
        let theta = build_control_program(&dad(0.3)).unwrap();
        assert_eq!(theta.control_dim(), 2);
        assert!(
            max_abs_diff(
                &theta.block(0),
                &QuantumChannel::replacer0().choi().matrix().scale(0.3)
            ) < 1e-15
        );
        assert!(max_abs_diff(&theta.block(1), &DensityMatrix::bell(2).matrix().scale(0.7)) < 1e-15);
        assert!(theta.off_block_max() <= 1e-14);
        let reduced = theta
            .realized()
            .partial_trace(&[Party::A, Party::B])
            .unwrap();
        let avg = DensityMatrix::mix(
            &[0.3, 0.7],
            &[theta.programs()[0].clone(), theta.programs()[1].clone()]
                .iter()
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(max_abs_diff(reduced.matrix(), avg.matrix()) < 1e-15);
    }

    #[test]
    fn dad_conditional_output_on_excited_state() {
        let ens = dad(0.3);
        let theta = build_control_program(&ens).unwrap();
        let rho = DensityMatrix::basis(Party::T, 2, 1);
        let out = conditional_apply(&theta, &ens.descriptors().unwrap(), &rho).unwrap();
        let mut expect = CMat::zeros(2, 2);
        expect[(0, 0)] = 0.3.into();
        expect[(1, 1)] = 0.7.into();
        assert!(max_abs_diff(out.matrix(), &expect) < 1e-12);
    }

    #[test]
    fn conditional_choi_equals_mixture_choi() {
        for p in [0.0, 0.25, 0.6, 1.0] {
            let ens = dad(p);
            let theta = build_control_program(&ens).unwrap();
            let choi = conditional_choi(&theta, &ens.descriptors().unwrap()).unwrap();
            assert!(max_abs_diff(choi.matrix(), ens.mixture().unwrap().choi().matrix()) < 1e-10);
        }
        for (p, q) in [(0.2, 0.1), (0.5, 0.5), (0.9, 0.0)] {
            assert!(verify_simulation(&ChannelEnsemble::dephrasure(p, q).unwrap()).unwrap() < 1e-9);
        }
    }

    #[test]
    fn random_pauli_ensemble_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let comps = (0..5)
            .map(|_| {
                let w = random::probabilities(&mut rng, 4);
                QuantumChannel::pauli([w[0], w[1], w[2], w[3]]).unwrap()
            })
            .collect::<Vec<_>>();
        let probs = random::probabilities(&mut rng, 5);
        let ens = ChannelEnsemble::new(probs.into_iter().zip(comps).collect()).unwrap();
        assert!(verify_simulation(&ens).unwrap() < 1e-9);
    }

    #[test]
    fn single_channel_ensemble_reduces_to_component() {
        let ch = QuantumChannel::dephasing(0.3).unwrap();
        let desc = SimulationDescriptor::teleportation(&ch).unwrap();
        assert!(desc.deviation(&ch).unwrap() < 1e-9);
        let ens = ChannelEnsemble::new(vec![(1.0, ch)])
            .unwrap()
            .with_teleportation()
            .unwrap();
        let theta = build_control_program(&ens).unwrap();
        let x = ket_bra(2, 0, 1);
        let a = conditional_apply_op(&theta, &ens.descriptors().unwrap(), &x).unwrap();
        assert!(max_abs_diff(&a, &desc.apply_op(&x).unwrap()) < 1e-15);
    }

    #[test]
    fn generic_descriptor_with_swap_then_trace() {
        // program |0><0| on A ⊗ B (1-dim B), L discards the target and
        // outputs the program qubit: a replacer simulation
        let mut k = Vec::new();
        for t in 0..2 {
            let mut m = CMat::zeros(2, 4);
            for a in 0..2 {
                m[(a, a * 2 + t)] = 1.0.into();
            }
            k.push(m);
        }
        let l = QuantumChannel::from_kraus(k).unwrap();
        let program =
            DensityMatrix::basis(Party::A, 2, 0).tensor(&DensityMatrix::basis(Party::B, 1, 0));
        let desc = SimulationDescriptor::new(program, Locc::Generic(l), 2).unwrap();
        assert!(desc.deviation(&QuantumChannel::replacer0()).unwrap() < 1e-15);
    }

    #[test]
    fn missing_descriptor_is_reported() {
        let ens = ChannelEnsemble::dad(0.5).unwrap();
        assert!(matches!(
            build_control_program(&ens),
            Err(Error::MissingDescriptor(0))
        ));
    }

    #[test]
    fn not_covariant_component_has_no_teleportation_descriptor() {
        let mut k0 = CMat::zeros(2, 2);
        k0[(0, 0)] = 1.0.into();
        k0[(1, 1)] = 0.5_f64.sqrt().into();
        let mut k1 = CMat::zeros(2, 2);
        k1[(0, 1)] = 0.5_f64.sqrt().into();
        let ad = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        assert!(matches!(
            SimulationDescriptor::teleportation(&ad),
            Err(Error::NotCovariant)
        ));
    }

    #[test]
    fn chain_bound_for_dad_and_dephrasure() {
        let opts = ReeOptions::default();
        let oracle = |s: &DensityMatrix| ree_ppt(s, &opts).map(|r| r.value);
        let p = 0.3;
        let chain =
            ree_chain_bound(&build_control_program(&dad(p)).unwrap(), oracle, 1e-4).unwrap();
        assert!((chain.sum_bound - (1.0 - p)).abs() < 1e-4, "{chain:?}");
        let (p, q) = (0.2, 0.1);
        let ens = ChannelEnsemble::dephrasure(p, q)
            .unwrap()
            .with_teleportation()
            .unwrap();
        let chain = ree_chain_bound(&build_control_program(&ens).unwrap(), oracle, 1e-4).unwrap();
        let expect = (1.0 - p) * (1.0 - h2(q).unwrap());
        assert!((chain.sum_bound - expect).abs() < 1e-3, "{chain:?}");
    }

    #[test]
    fn single_block_chain_is_tight() {
        let opts = ReeOptions::default();
        let oracle = |s: &DensityMatrix| ree_ppt(s, &opts).map(|r| r.value);
        let ens = ChannelEnsemble::new(vec![(1.0, QuantumChannel::dephasing(0.2).unwrap())])
            .unwrap()
            .with_teleportation()
            .unwrap();
        let chain = ree_chain_bound(&build_control_program(&ens).unwrap(), oracle, 1e-4).unwrap();
        assert!((chain.e_theta - chain.sum_bound).abs() < 1e-4);
    }

    #[test]
    fn finite_size_worked_example() {
        let params = FiniteSizeParams::new(1000, 0.01, 1.0).unwrap();
        let v = finite_size_bound(&params, 0.7).unwrap();
        assert!((v - 0.7293).abs() < 1e-3);
        let mut last = f64::INFINITY;
        for n in [10, 100, 1000, 10_000, 100_000] {
            let v = finite_size_bound(&FiniteSizeParams::new(n, 0.01, 1.0).unwrap(), 0.7).unwrap();
            assert!(v < last);
            last = v;
        }
        let far = finite_size_bound(
            &FiniteSizeParams::new(1_000_000_000, 1e-9, 1.0).unwrap(),
            0.7,
        )
        .unwrap();
        assert!((far - 0.7).abs() < 1e-6);
        assert!(FiniteSizeParams::new(10, 0.25, 1.0).is_err());
        assert!(FiniteSizeParams::new(10, 0.1, 0.5).is_err());
    }

    #[test]
    fn memory_single_use_matches_plain_program() {
        let ens = dad(0.4);
        let a = build_memory_control_program(std::slice::from_ref(&ens), &[0.4, 0.6]).unwrap();
        let b = build_control_program(&ens).unwrap();
        assert!(max_abs_diff(a.realized().matrix(), b.realized().matrix()) < 1e-15);
    }

    #[test]
    fn memory_bounds() {
        let ree = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        assert_eq!(memory_bound(&ree, &[0.5, 0.0, 0.0, 0.5]).unwrap(), 1.0);
        let (m1, m2) = (vec![0.3, 0.7], vec![0.6, 0.4]);
        let joint = product_distribution(&[m1.clone(), m2.clone()]);
        let v = memory_bound(&ree, &joint).unwrap();
        let marg = m1[1] * 1.0 + m2[1] * 1.0;
        assert!((v - marg).abs() < 1e-12);
        assert!(memory_bound(&ree, &[0.5, 0.5]).is_err());

        let ens = dad(0.5);
        let theta =
            build_memory_control_program(&[ens.clone(), ens], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(theta.control_dim(), 4);
        assert_eq!(theta.programs()[0].dim(), 16);
    }

    #[test]
    fn unflatten_row_major() {
        assert_eq!(unflatten(5, &[2, 3]), vec![1, 2]);
        assert_eq!(unflatten(0, &[2, 3]), vec![0, 0]);
    }
}
