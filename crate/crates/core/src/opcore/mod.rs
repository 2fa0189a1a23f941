//! Finite-dimensional state substrate.
//!
//! Every multipartite object carries a [`SubsystemSignature`]: an ordered
//! list of local dimensions tagged with the party that owns each factor.
//! Party tags follow the simulation picture: `C` is the classical control
//! register, `A`/`B` are the program halves held by Alice and Bob, `T` is the
//! target system fed into the channel and `E` an environment.

mod linalg;
pub mod random;

pub(crate) use linalg::eig_symmetrized;
pub use linalg::{
    block_components, c, cr, eig_hermitian, eigenvalues_blocked, hermiticity_error, identity,
    ket_bra, kron, max_abs, max_abs_diff, partial_trace, partial_transpose, permute_subsystems,
    submatrix, trace_prod_re, CMat, HermitianEigen,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// Numeric policy shared by every module.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Max absolute deviation of `m - m^dagger`.
    pub hermiticity: f64,
    /// Eigenvalues down to `-psd_slack` count as nonnegative and are clamped
    /// to zero before entropies are taken.
    pub psd_slack: f64,
    /// Trace deviation and generic state-equality threshold.
    pub state_equality: f64,
    /// Eigenvalues below this are treated as outside the support.
    pub support: f64,
    /// Threshold for operator-basis identities (simulation checks).
    pub simulation: f64,
    /// Feasibility slack for PPT membership.
    pub ppt_slack: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermiticity: 1e-12,
    psd_slack: 1e-10,
    state_equality: 1e-10,
    support: 1e-10,
    simulation: 1e-9,
    ppt_slack: 1e-8,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Party {
    /// Control (flag) register.
    C,
    /// Alice's program half.
    A,
    /// Bob's program half.
    B,
    /// Target (channel input).
    T,
    /// Environment.
    E,
}

impl Party {
    /// Side of the Alice|Bob cut used for entanglement measures. Only `B`
    /// belongs to Bob; the control flag sits with Alice.
    pub fn is_bob(self) -> bool {
        matches!(self, Party::B)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsystemSignature {
    dims: Vec<usize>,
    labels: Vec<Party>,
}

impl SubsystemSignature {
    pub fn new(dims: Vec<usize>, labels: Vec<Party>) -> Result<Self> {
        if dims.len() != labels.len() {
            return Err(Error::InvalidSignature(format!(
                "{} dims but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidSignature(
                "dimensions must be positive and nonempty".into(),
            ));
        }
        Ok(Self { dims, labels })
    }

    pub fn single(party: Party, d: usize) -> Self {
        Self::new(vec![d], vec![party]).expect("positive dimension")
    }

    /// `A:d_a ⊗ B:d_b`.
    pub fn bipartite(d_a: usize, d_b: usize) -> Self {
        Self::new(vec![d_a, d_b], vec![Party::A, Party::B]).expect("positive dimensions")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[Party] {
        &self.labels
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self { dims, labels }
    }

    /// Positions whose label is in `set`; errors on labels absent from the
    /// signature.
    pub fn positions(&self, set: &[Party]) -> Result<Vec<usize>> {
        for p in set {
            if !self.labels.contains(p) {
                return Err(Error::UnknownLabel(*p));
            }
        }
        Ok((0..self.len())
            .filter(|&k| set.contains(&self.labels[k]))
            .collect())
    }

    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            dims: positions.iter().map(|&k| self.dims[k]).collect(),
            labels: positions.iter().map(|&k| self.labels[k]).collect(),
        }
    }

    /// Positions on Bob's side of the Alice|Bob cut.
    pub fn bob_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.labels[k].is_bob())
            .collect()
    }

    pub fn alice_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| !self.labels[k].is_bob())
            .collect()
    }

    /// `(d_Alice, d_Bob)` for the Alice|Bob cut.
    pub fn cut_dims(&self) -> (usize, usize) {
        let da = self
            .alice_positions()
            .iter()
            .map(|&k| self.dims[k])
            .product();
        let db = self.bob_positions().iter().map(|&k| self.dims[k]).product();
        (da, db)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix with a subsystem
/// signature.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMat,
    sig: SubsystemSignature,
}

impl DensityMatrix {
    /// Validates hermiticity, positivity and normalization.
    pub fn new(mat: CMat, sig: SubsystemSignature) -> Result<Self> {
        if mat.nrows() != sig.total_dim() || mat.ncols() != sig.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} does not match signature dimension {}",
                mat.nrows(),
                mat.ncols(),
                sig.total_dim()
            )));
        }
        let herm = hermiticity_error(&mat);
        if herm > TOL.hermiticity {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TOL.state_equality {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = eigenvalues_blocked(&mat)?.last().copied().unwrap_or(0.0);
        if min_eig < -TOL.psd_slack {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { mat, sig })
    }

    /// Rescales a PSD matrix to unit trace before validating.
    pub fn normalized(mat: CMat, sig: SubsystemSignature) -> Result<Self> {
        let tr = mat.trace().re;
        if tr <= 0.0 {
            return Err(Error::InvalidState("nonpositive trace".into()));
        }
        Self::new(mat.unscale(tr), sig)
    }

    pub fn from_ket(ket: &[num_complex::Complex64], sig: SubsystemSignature) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(ket);
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self::new(&v * v.adjoint() / cr(norm2), sig)
    }

    /// `|i><i|` on a single subsystem.
    pub fn basis(party: Party, d: usize, i: usize) -> Self {
        Self {
            mat: ket_bra(d, i, i),
            sig: SubsystemSignature::single(party, d),
        }
    }

    pub fn maximally_mixed(sig: SubsystemSignature) -> Self {
        let d = sig.total_dim();
        Self {
            mat: identity(d).unscale(d as f64),
            sig,
        }
    }

    /// `|Φ><Φ|` with `|Φ> = Σ_i |ii>/√d` on `A:d ⊗ B:d`.
    pub fn bell(d: usize) -> Self {
        let mut ket = vec![cr(0.0); d * d];
        for i in 0..d {
            ket[i * d + i] = cr(1.0 / (d as f64).sqrt());
        }
        Self::from_ket(&ket, SubsystemSignature::bipartite(d, d)).expect("Bell state is valid")
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn signature(&self) -> &SubsystemSignature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Relabels the subsystems without touching the matrix.
    pub fn with_signature(self, sig: SubsystemSignature) -> Result<Self> {
        if sig.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch("relabel changes dimension".into()));
        }
        Ok(Self { mat: self.mat, sig })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: kron(&self.mat, &other.mat),
            sig: self.sig.concat(&other.sig),
        }
    }

    /// Reduced state on the subsystems whose labels are in `keep`.
    pub fn partial_trace(&self, keep: &[Party]) -> Result<Self> {
        let pos = self.sig.positions(keep)?;
        let mat = partial_trace(&self.mat, self.sig.dims(), &pos)?;
        Ok(Self {
            mat,
            sig: self.sig.select(&pos),
        })
    }

    /// Partial transpose over Bob's side of the Alice|Bob cut.
    pub fn partial_transpose_bob(&self) -> CMat {
        partial_transpose(&self.mat, self.sig.dims(), &self.sig.bob_positions())
    }

    /// Smallest eigenvalue of the partial transpose across the Alice|Bob cut.
    pub fn min_partial_transpose_eigenvalue(&self) -> Result<f64> {
        let pt = self.partial_transpose_bob();
        Ok(eigenvalues_blocked(&pt)?.last().copied().unwrap_or(0.0))
    }

    pub fn is_ppt(&self) -> Result<bool> {
        Ok(self.min_partial_transpose_eigenvalue()? >= -TOL.ppt_slack)
    }

    /// Reorders the subsystems so Alice's factors come first, then Bob's.
    /// Returns the reordered matrix and `(d_Alice, d_Bob)`.
    pub fn alice_bob_matrix(&self) -> (CMat, usize, usize) {
        let mut perm = self.sig.alice_positions();
        perm.extend(self.sig.bob_positions());
        let m = permute_subsystems(&self.mat, self.sig.dims(), &perm);
        let (da, db) = self.sig.cut_dims();
        (m, da, db)
    }

    /// Spectrum clamped at zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigenvalues_blocked(&self.mat)?
            .into_iter()
            .map(|x| if x < TOL.psd_slack { x.max(0.0) } else { x })
            .collect())
    }

    /// Convex combination `Σ w_k ρ_k` of states sharing one signature.
    pub fn mix(weights: &[f64], states: &[&DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidState(
                "mixture needs matching nonempty lists".into(),
            ));
        }
        let sig = states[0].sig.clone();
        let mut mat = CMat::zeros(sig.total_dim(), sig.total_dim());
        for (w, s) in weights.iter().zip(states) {
            if s.sig != sig {
                return Err(Error::DimensionMismatch(
                    "mixing states with different signatures".into(),
                ));
            }
            mat += s.mat.scale(*w);
        }
        Self::new(mat, sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tensor_of_maximally_mixed_qubits() {
        let half = DensityMatrix::maximally_mixed(SubsystemSignature::single(Party::A, 2));
        let quarter = half.tensor(&DensityMatrix::maximally_mixed(SubsystemSignature::single(
            Party::B,
            2,
        )));
        assert!(max_abs_diff(quarter.matrix(), &identity(4).unscale(4.0)) == 0.0);
    }

    #[test]
    fn tensor_of_basis_states() {
        let s = DensityMatrix::basis(Party::A, 2, 0).tensor(&DensityMatrix::basis(Party::B, 2, 1));
        assert!(max_abs_diff(s.matrix(), &ket_bra(4, 1, 1)) == 0.0);
    }

    #[test]
    fn tensor_signature_concatenates() {
        let s = DensityMatrix::basis(Party::A, 2, 0).tensor(&DensityMatrix::basis(Party::B, 3, 2));
        assert_eq!(s.signature().dims(), &[2, 3]);
        assert_eq!(s.signature().labels(), &[Party::A, Party::B]);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let m = DensityMatrix::bell(2).partial_trace(&[Party::A]).unwrap();
        assert!(max_abs_diff(m.matrix(), &identity(2).unscale(2.0)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_keeps_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random::density(&mut rng, SubsystemSignature::single(Party::A, 2));
        let sigma = random::density(&mut rng, SubsystemSignature::single(Party::B, 3));
        let kept = rho.tensor(&sigma).partial_trace(&[Party::A]).unwrap();
        assert!(max_abs_diff(kept.matrix(), rho.matrix()) < 1e-14);
    }

    #[test]
    fn partial_trace_over_control_sums_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let probs = [0.2, 0.5, 0.3];
        let sig = SubsystemSignature::bipartite(2, 2);
        let states: Vec<_> = (0..3)
            .map(|_| random::density(&mut rng, sig.clone()))
            .collect();
        let mut theta = CMat::zeros(12, 12);
        let mut avg = CMat::zeros(4, 4);
        for (i, (p, s)) in probs.iter().zip(&states).enumerate() {
            theta += kron(&ket_bra(3, i, i), s.matrix()).scale(*p);
            avg += s.matrix().scale(*p);
        }
        let full_sig = SubsystemSignature::single(Party::C, 3).concat(&sig);
        let theta = DensityMatrix::new(theta, full_sig).unwrap();
        let reduced = theta.partial_trace(&[Party::A, Party::B]).unwrap();
        assert!(max_abs_diff(reduced.matrix(), &avg) < 1e-14);
    }

    #[test]
    fn partial_trace_unknown_label() {
        let s = DensityMatrix::bell(2);
        assert!(matches!(
            s.partial_trace(&[Party::C]),
            Err(Error::UnknownLabel(Party::C))
        ));
    }

    #[test]
    fn eig_examples() {
        let e = eig_hermitian(
            DensityMatrix::maximally_mixed(SubsystemSignature::single(Party::A, 2)).matrix(),
        )
        .unwrap();
        assert!(e.values.iter().all(|v| (v - 0.5).abs() < 1e-15));
        let e = eig_hermitian(DensityMatrix::bell(2).matrix()).unwrap();
        let expect = [1.0, 0.0, 0.0, 0.0];
        for (v, x) in e.values.iter().zip(expect) {
            assert!((v - x).abs() < 1e-14);
        }
    }

    #[test]
    fn signature_rejects_mismatch() {
        assert!(SubsystemSignature::new(vec![2, 2], vec![Party::A]).is_err());
        assert!(SubsystemSignature::new(vec![2, 0], vec![Party::A, Party::B]).is_err());
        let bad = DensityMatrix::new(identity(3), SubsystemSignature::single(Party::A, 3));
        assert!(bad.is_err());
    }

    proptest! {
        #[test]
        fn partial_traces_commute(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sig = SubsystemSignature::new(vec![2, 3, 2], vec![Party::C, Party::A, Party::B]).unwrap();
            let rho = random::density(&mut rng, sig);
            let ab_then_a = rho.partial_trace(&[Party::A, Party::B]).unwrap().partial_trace(&[Party::A]).unwrap();
            let ca_then_a = rho.partial_trace(&[Party::C, Party::A]).unwrap().partial_trace(&[Party::A]).unwrap();
            prop_assert!(max_abs_diff(ab_then_a.matrix(), ca_then_a.matrix()) <= 1e-12);
        }

        #[test]
        fn tensor_then_trace_second(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::density(&mut rng, SubsystemSignature::single(Party::A, 3));
            let b = random::hermitian(&mut rng, 2);
            // unnormalized second factor: result scales by its trace
            let full = kron(a.matrix(), &b);
            let kept = partial_trace(&full, &[3, 2], &[0]).unwrap();
            let expect = a.matrix() * b.trace();
            prop_assert!(max_abs_diff(&kept, &expect) <= 1e-12);
        }

        #[test]
        fn eig_reconstructs(seed in any::<u64>(), n in 1usize..=64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random::hermitian(&mut rng, n);
            let e = eig_hermitian(&h).unwrap();
            prop_assert!(max_abs_diff(&e.reconstruct(), &h) <= 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
