//! Qudit teleportation over a program state and detection of
//! teleportation covariance.
//!
//! The Bell measurement on Alice's `(A, T)` uses the projectors
//! `|Φ_k> = (I ⊗ U_k)|Φ>` with `U_k = X^a Z^b`. Outcome `k` leaves Bob with
//! `E(U_k† ρ U_k) / d²` when the program is the Choi state of `E`, so the
//! correction for outcome `k` undoes the covariance unitary of the Weyl
//! element `U_k†`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::opcore::{
    cr, identity, ket_bra, max_abs_diff, CMat, DensityMatrix, SubsystemSignature, TOL,
};

/// The `d²` Weyl operators `X^a Z^b`, `X|j> = |j+1>`, `Z|j> = ω^j |j>`.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    d: usize,
    ops: Vec<CMat>,
}

impl WeylGroup {
    pub fn new(d: usize) -> Self {
        let omega = Complex64::from_polar(1.0, TAU / d as f64);
        let mut x = CMat::zeros(d, d);
        let mut z = CMat::zeros(d, d);
        for j in 0..d {
            x[((j + 1) % d, j)] = cr(1.0);
            z[(j, j)] = omega.powu(j as u32);
        }
        let mut ops = Vec::with_capacity(d * d);
        let mut xa = identity(d);
        for _a in 0..d {
            let mut zb = identity(d);
            for _b in 0..d {
                ops.push(&xa * &zb);
                zb = &zb * &z;
            }
            xa = &xa * &x;
        }
        Self { d, ops }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.d + b
    }

    pub fn element(&self, a: usize, b: usize) -> &CMat {
        &self.ops[self.index(a, b)]
    }

    pub fn elements(&self) -> impl Iterator<Item = ((usize, usize), &CMat)> {
        let d = self.d;
        self.ops
            .iter()
            .enumerate()
            .map(move |(k, u)| ((k / d, k % d), u))
    }

    /// Index of the element proportional to `(X^a Z^b)†`.
    pub fn inverse_index(&self, a: usize, b: usize) -> (usize, usize) {
        ((self.d - a) % self.d, (self.d - b) % self.d)
    }
}

/// Output unitary for every Weyl element of the input group.
#[derive(Clone, Debug)]
pub struct CorrectionTable {
    d: usize,
    entries: Vec<Option<CMat>>,
}

impl CorrectionTable {
    pub fn empty(d: usize) -> Self {
        Self {
            d,
            entries: vec![None; d * d],
        }
    }

    /// `V = U` for every element: the table of the identity channel.
    pub fn standard(group: &WeylGroup) -> Self {
        Self {
            d: group.d,
            entries: group.ops.iter().cloned().map(Some).collect(),
        }
    }

    pub fn insert(&mut self, a: usize, b: usize, v: CMat) -> Result<()> {
        let err = unitarity_error(&v);
        if err > TOL.hermiticity {
            return Err(Error::InvalidChannel(format!(
                "correction is not unitary ({err:e})"
            )));
        }
        self.entries[a * self.d + b] = Some(v);
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> Result<&CMat> {
        self.entries[a * self.d + b]
            .as_ref()
            .ok_or(Error::MissingCorrection(a, b))
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

pub fn unitarity_error(u: &CMat) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

/// Outcome of a covariance search.
#[derive(Clone, Debug)]
pub enum Covariance {
    Covariant(CorrectionTable),
    NotCovariant,
}

impl Covariance {
    pub fn table(&self) -> Option<&CorrectionTable> {
        match self {
            Covariance::Covariant(t) => Some(t),
            Covariance::NotCovariant => None,
        }
    }
}

/// Per-outcome record of a teleportation run.
#[derive(Clone, Debug)]
pub struct TeleportOutcome {
    pub weyl: (usize, usize),
    pub probability: f64,
}

/// Bob's unnormalized operator after Bell outcome `U` on `(A, T)`:
/// `<Φ_U|_{AT} (σ_{AB} ⊗ X_T) |Φ_U>_{AT}`.
fn bob_conditional(program: &CMat, d: usize, d_b: usize, input: &CMat, u: &CMat) -> CMat {
    // |Φ_U> = Σ_{a,t} coef[a][t] |a>|t>,  coef[a][t] = U[t, a] / √d
    let norm = 1.0 / (d as f64).sqrt();
    let coef = |a: usize, t: usize| u[(t, a)] * norm;
    let mut out = CMat::zeros(d_b, d_b);
    for b1 in 0..d_b {
        for b2 in 0..d_b {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..d {
                for t in 0..d {
                    let l = coef(a, t).conj();
                    if l == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for a2 in 0..d {
                        for t2 in 0..d {
                            let r = coef(a2, t2);
                            if r == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            acc += l * r * program[(a * d_b + b1, a2 * d_b + b2)] * input[(t, t2)];
                        }
                    }
                }
            }
            out[(b1, b2)] = acc;
        }
    }
    out
}

/// Teleports an arbitrary operator `x` on the target through `program`
/// (`A:d ⊗ B:d_b`), applying `V_{U_k†}†` after outcome `k`. Returns the
/// averaged output and the per-outcome probabilities (meaningful when `x`
/// is a state).
pub fn teleport_op(
    program: &DensityMatrix,
    x: &CMat,
    corrections: &CorrectionTable,
) -> Result<(CMat, Vec<TeleportOutcome>)> {
    let sig = program.signature();
    if sig.len() != 2 {
        return Err(Error::InvalidSignature(
            "program must be bipartite A ⊗ B".into(),
        ));
    }
    teleport_matrix(
        program.matrix(),
        sig.dims()[0],
        sig.dims()[1],
        x,
        corrections,
    )
}

/// Same as [`teleport_op`] on a raw (possibly unnormalized) program matrix.
pub(crate) fn teleport_matrix(
    program: &CMat,
    d: usize,
    d_b: usize,
    x: &CMat,
    corrections: &CorrectionTable,
) -> Result<(CMat, Vec<TeleportOutcome>)> {
    if x.nrows() != d || corrections.dim() != d || program.nrows() != d * d_b {
        return Err(Error::DimensionMismatch(format!(
            "program {}x{} for A:{d} B:{d_b}, input {}, corrections {}",
            program.nrows(),
            program.ncols(),
            x.nrows(),
            corrections.dim()
        )));
    }
    let group = WeylGroup::new(d);
    let mut total = CMat::zeros(d_b, d_b);
    let mut outcomes = Vec::with_capacity(group.len());
    // fixed (a, b) order keeps the reduction bitwise reproducible
    for ((a, b), u) in group.elements() {
        let bob = bob_conditional(program, d, d_b, x, u);
        let (ia, ib) = group.inverse_index(a, b);
        let v = corrections.get(ia, ib)?;
        if v.nrows() != d_b {
            return Err(Error::DimensionMismatch(format!(
                "correction is {}x{}, Bob holds dimension {d_b}",
                v.nrows(),
                v.ncols()
            )));
        }
        total += v.adjoint() * &bob * v;
        outcomes.push(TeleportOutcome {
            weyl: (a, b),
            probability: bob.trace().re,
        });
    }
    Ok((total, outcomes))
}

/// Deterministic teleportation channel action on a state.
pub fn teleport(
    program: &DensityMatrix,
    input: &DensityMatrix,
    corrections: &CorrectionTable,
) -> Result<DensityMatrix> {
    let (out, _) = teleport_op(program, input.matrix(), corrections)?;
    let party = program.signature().labels()[1];
    DensityMatrix::new(
        out,
        SubsystemSignature::single(party, program.signature().dims()[1]),
    )
}

/// Output-side correction candidates for a `d_in -> d_out` channel: the
/// Weyl group of the input padded with the identity on any extra (flag)
/// levels, then the Weyl group of the output. The element with the same
/// index as the input element is tried first.
fn candidates(d_in: usize, d_out: usize, a: usize, b: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    if d_out >= d_in {
        let g = WeylGroup::new(d_in);
        let pad = |u: &CMat| {
            let mut v = identity(d_out);
            for i in 0..d_in {
                for j in 0..d_in {
                    v[(i, j)] = u[(i, j)];
                }
            }
            v
        };
        out.push(pad(g.element(a, b)));
        out.extend(g.elements().map(|(_, u)| pad(u)));
    }
    if d_out != d_in {
        out.extend(WeylGroup::new(d_out).elements().map(|(_, u)| u.clone()));
    }
    out
}

/// Whether `E(U X U†) = V E(X) V†` for every basis operator `X = |i><j|`.
fn satisfies(ch: &QuantumChannel, u: &CMat, v: &CMat) -> Result<bool> {
    let d = ch.d_in();
    for i in 0..d {
        for j in 0..d {
            let x = ket_bra(d, i, j);
            let lhs = ch.apply_op(&(u * &x * u.adjoint()))?;
            let rhs = v * ch.apply_op(&x)? * v.adjoint();
            if max_abs_diff(&lhs, &rhs) > TOL.simulation {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches a correction table that makes `ch` teleportation covariant
/// under `group`. Phases drop out because the relation is checked on the
/// conjugation action.
pub fn covariance_table(ch: &QuantumChannel, group: &WeylGroup) -> Result<Covariance> {
    joint_table(std::slice::from_ref(ch), group)
}

fn joint_table(chans: &[QuantumChannel], group: &WeylGroup) -> Result<Covariance> {
    let d = group.dim();
    let first = &chans[0];
    if chans.iter().any(|ch| ch.d_in() != d) {
        return Err(Error::DimensionMismatch(format!(
            "channel input differs from group dimension {d}"
        )));
    }
    if chans.iter().any(|ch| ch.d_out() != first.d_out()) {
        return Ok(Covariance::NotCovariant);
    }
    let mut table = CorrectionTable::empty(d);
    'elements: for ((a, b), u) in group.elements() {
        for v in candidates(d, first.d_out(), a, b) {
            let mut all = true;
            for ch in chans {
                if !satisfies(ch, u, &v)? {
                    all = false;
                    break;
                }
            }
            if all {
                table.insert(a, b, v)?;
                continue 'elements;
            }
        }
        return Ok(Covariance::NotCovariant);
    }
    Ok(Covariance::Covariant(table))
}

/// Whether one correction table serves every channel at once. Channels
/// whose output spaces differ cannot share a table; a component that is not
/// covariant on its own makes the answer false.
pub fn joint_covariance(chans: &[QuantumChannel], group: &WeylGroup) -> Result<bool> {
    if chans.is_empty() {
        return Ok(true);
    }
    for ch in chans {
        if let Covariance::NotCovariant = covariance_table(ch, group)? {
            return Ok(false);
        }
    }
    Ok(matches!(
        joint_table(chans, group)?,
        Covariance::Covariant(_)
    ))
}

/// `max |teleport(choi(E), X) - E(X)|` over the operator basis.
pub fn simulation_error(
    ch: &QuantumChannel,
    program: &DensityMatrix,
    table: &CorrectionTable,
) -> Result<f64> {
    let d = ch.d_in();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let x = ket_bra(d, i, j);
            let (out, _) = teleport_op(program, &x, table)?;
            worst = worst.max(max_abs_diff(&out, &ch.apply_op(&x)?));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pauli_x, pauli_z, ChannelEnsemble};
    use crate::opcore::{random, Party};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weyl_operators_unitary_and_orthogonal() {
        for d in 2..=4 {
            let g = WeylGroup::new(d);
            assert_eq!(g.len(), d * d);
            for (_, u) in g.elements() {
                assert!(unitarity_error(u) < 1e-12);
            }
            for (k1, u) in g.elements() {
                for (k2, v) in g.elements() {
                    if k1 != k2 {
                        assert!((u.adjoint() * v).trace().norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_teleportation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3] {
            let g = WeylGroup::new(d);
            let rho = random::density(&mut rng, SubsystemSignature::single(Party::T, d));
            let out = teleport(
                &DensityMatrix::bell(d),
                &rho,
                &CorrectionTable::standard(&g),
            )
            .unwrap();
            assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn outcome_probabilities_uniform_for_bell_program() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rho = random::density(&mut rng, SubsystemSignature::single(Party::T, 2));
        let g = WeylGroup::new(2);
        let (_, outcomes) = teleport_op(
            &DensityMatrix::bell(2),
            rho.matrix(),
            &CorrectionTable::standard(&g),
        )
        .unwrap();
        for o in outcomes {
            assert!((o.probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_simulated_by_its_choi() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = WeylGroup::new(2);
        let ch = QuantumChannel::dephasing(0.3).unwrap();
        let rho = random::density(&mut rng, SubsystemSignature::single(Party::T, 2));
        let out = teleport(&ch.choi(), &rho, &CorrectionTable::standard(&g)).unwrap();
        assert!(max_abs_diff(out.matrix(), ch.apply(&rho).unwrap().matrix()) < 1e-10);
    }

    #[test]
    fn dephasing_covariant_with_same_unitaries() {
        let g = WeylGroup::new(2);
        let table = covariance_table(&QuantumChannel::dephasing(0.2).unwrap(), &g).unwrap();
        let table = table.table().expect("dephasing is covariant");
        for ((a, b), u) in g.elements() {
            assert!(max_abs_diff(table.get(a, b).unwrap(), u) < 1e-15);
        }
    }

    #[test]
    fn replacer0_corrections() {
        let g = WeylGroup::new(2);
        let ch = QuantumChannel::replacer0();
        let cov = covariance_table(&ch, &g).unwrap();
        let table = cov.table().expect("replacer0 is covariant");
        // Z acts as Z, X is absorbed (identity correction)
        assert!(max_abs_diff(table.get(0, 1).unwrap(), &pauli_z()) < 1e-15);
        assert!(max_abs_diff(table.get(1, 0).unwrap(), &identity(2)) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let rho = random::density(&mut rng, SubsystemSignature::single(Party::T, 2));
        let out = teleport(&ch.choi(), &rho, table).unwrap();
        assert!(max_abs_diff(out.matrix(), &ket_bra(2, 0, 0)) < 1e-10);
        assert!(simulation_error(&ch, &ch.choi(), table).unwrap() < 1e-9);
        assert!(max_abs_diff(&pauli_x(), g.element(1, 0)) < 1e-15);
    }

    #[test]
    fn dephrasure_components_individually_covariant() {
        let g = WeylGroup::new(2);
        assert!(
            covariance_table(&QuantumChannel::dephasing(0.4).unwrap(), &g)
                .unwrap()
                .table()
                .is_some()
        );
        assert!(covariance_table(&QuantumChannel::erasure_flag(2), &g)
            .unwrap()
            .table()
            .is_some());
    }

    #[test]
    fn joint_covariance_cases() {
        let g = WeylGroup::new(2);
        let id = QuantumChannel::identity(2);
        assert!(joint_covariance(&[id.clone(), id.clone()], &g).unwrap());
        assert!(!joint_covariance(&[QuantumChannel::replacer0(), id], &g).unwrap());
        // the natural components live on different output spaces
        let native = [
            QuantumChannel::dephasing(0.1).unwrap(),
            QuantumChannel::erasure_flag(2),
        ];
        assert!(!joint_covariance(&native, &g).unwrap());
    }

    #[test]
    fn embedded_dephrasure_components_share_flag_padded_table() {
        // On the common qutrit output the flag-padded Paulis serve both
        // components, and one teleportation over the averaged Choi state
        // reproduces the dephrasure channel.
        let g = WeylGroup::new(2);
        let ens = ChannelEnsemble::dephrasure(0.3, 0.2).unwrap();
        let chans: Vec<_> = ens.entries().iter().map(|e| e.channel.clone()).collect();
        assert!(joint_covariance(&chans, &g).unwrap());
        let mix = ens.mixture().unwrap();
        let table = covariance_table(&mix, &g).unwrap();
        assert!(simulation_error(&mix, &mix.choi(), table.table().unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn amplitude_damping_not_weyl_covariant() {
        let gamma: f64 = 0.3;
        let mut k0 = CMat::zeros(2, 2);
        k0[(0, 0)] = cr(1.0);
        k0[(1, 1)] = cr((1.0 - gamma).sqrt());
        let mut k1 = CMat::zeros(2, 2);
        k1[(0, 1)] = cr(gamma.sqrt());
        let ad = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        assert!(covariance_table(&ad, &WeylGroup::new(2))
            .unwrap()
            .table()
            .is_none());
    }

    #[test]
    fn missing_correction_is_an_error() {
        let rho = DensityMatrix::maximally_mixed(SubsystemSignature::single(Party::T, 2));
        let err = teleport(&DensityMatrix::bell(2), &rho, &CorrectionTable::empty(2));
        assert!(matches!(err, Err(Error::MissingCorrection(_, _))));
    }
}
