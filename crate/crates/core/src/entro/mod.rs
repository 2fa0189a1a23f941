//! Entropies in bits: binary, Shannon, von Neumann, relative entropy,
//! (reverse) coherent information and the relative entropy of entanglement.

mod ree;

pub use ree::{ree_ppt, ReeMethod, ReeOptions, ReeResult};

use std::f64::consts::LN_2;

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::opcore::{
    block_components, eig_symmetrized, eigenvalues_blocked, submatrix, CMat, DensityMatrix, Party,
    TOL,
};

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `-x log₂ x - (1-x) log₂(1-x)`.
pub fn h2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

/// Shannon entropy of a probability vector, zeros skipped.
pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// Entropy of the spectrum of a Hermitian matrix, eigenvalues below the PSD
/// slack treated as zero.
pub fn spectral_entropy(m: &CMat) -> Result<f64> {
    let vals = eigenvalues_blocked(m)?;
    Ok(-vals
        .into_iter()
        .filter(|&x| x > TOL.psd_slack)
        .map(xlog2x)
        .sum::<f64>())
}

pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(spectral_entropy(rho.matrix())?.max(0.0))
}

/// `Tr ρ (log₂ρ - log₂σ)`; `+∞` when `ρ` has weight above the support
/// tolerance on the kernel of `σ`.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    rel_entropy_matrix(rho.matrix(), sigma.matrix(), TOL.support, TOL.support)
}

/// Eigenvalues of `σ` at or below `kernel` count as its kernel; weight of `ρ`
/// above `weight` there makes the result infinite.
pub(crate) fn rel_entropy_matrix(
    rho: &CMat,
    sigma: &CMat,
    kernel: f64,
    weight: f64,
) -> Result<f64> {
    let mut neg_s = 0.0;
    let mut cross = 0.0;
    for block in block_components(&[rho, sigma]) {
        let r = submatrix(rho, &block);
        let s = submatrix(sigma, &block);
        let er = eig_symmetrized(&r)?;
        neg_s += er
            .values
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| xlog2x(x))
            .sum::<f64>();
        let es = eig_symmetrized(&s)?;
        for (k, &lam) in es.values.iter().enumerate() {
            let v = es.vectors.column(k);
            let w = (v.adjoint() * &r * v)[(0, 0)].re;
            if lam <= kernel {
                if w > weight {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            cross += w * lam.log2();
        }
    }
    Ok((neg_s - cross).max(0.0))
}

/// `I_C = S(B) - S(AB)` of the Choi state.
pub fn coherent_info(ch: &QuantumChannel) -> Result<f64> {
    let choi = ch.choi();
    Ok(vn_entropy(&choi.partial_trace(&[Party::B])?)? - vn_entropy(&choi)?)
}

/// `I_RC = S(A) - S(AB)` of the Choi state.
pub fn reverse_coherent_info(ch: &QuantumChannel) -> Result<f64> {
    reverse_coherent_info_state(&ch.choi())
}

pub fn reverse_coherent_info_state(rho: &DensityMatrix) -> Result<f64> {
    let alice: Vec<Party> = rho
        .signature()
        .labels()
        .iter()
        .copied()
        .filter(|p| !p.is_bob())
        .collect();
    Ok(vn_entropy(&rho.partial_trace(&alice)?)? - vn_entropy(rho)?)
}

/// Relative entropy to a PPT candidate, an upper bound on the REE.
pub fn ree_upper(rho: &DensityMatrix, candidate: &DensityMatrix) -> Result<f64> {
    let min = candidate.min_partial_transpose_eigenvalue()?;
    if min < -TOL.ppt_slack {
        return Err(Error::NotPpt(min));
    }
    rel_entropy(rho, candidate)
}

/// Diagonal part of `ρ` in the computational basis (always separable).
pub fn dephased(rho: &DensityMatrix) -> DensityMatrix {
    let m = CMat::from_diagonal(&rho.matrix().diagonal());
    DensityMatrix::new(m, rho.signature().clone()).expect("diagonal of a state is a state")
}

/// Product of the Alice and Bob marginals, in the original subsystem order.
pub fn marginal_product(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let sig = rho.signature();
    let (m, da, db) = rho.alice_bob_matrix();
    let dims = [da, db];
    let ra = crate::opcore::partial_trace(&m, &dims, &[0])?;
    let rb = crate::opcore::partial_trace(&m, &dims, &[1])?;
    let prod = crate::opcore::kron(&ra, &rb);
    // undo the Alice-first reordering
    let mut perm = sig.alice_positions();
    perm.extend(sig.bob_positions());
    let reordered_dims: Vec<usize> = perm.iter().map(|&k| sig.dims()[k]).collect();
    let mut inverse = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let back = crate::opcore::permute_subsystems(&prod, &reordered_dims, &inverse);
    DensityMatrix::new(back, sig.clone())
}

pub(crate) fn nats_to_bits(x: f64) -> f64 {
    x / LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelEnsemble;
    use crate::opcore::{kron, random, SubsystemSignature};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(h2(0.5).unwrap(), 1.0);
        assert_eq!(h2(0.0).unwrap(), 0.0);
        assert_eq!(h2(1.0).unwrap(), 0.0);
        assert!((h2(0.11).unwrap() - 0.49993).abs() < 1e-4);
        assert!(h2(1.5).is_err());
        assert!(h2(f64::NAN).is_err());
    }

    #[test]
    fn von_neumann_basics() {
        let pure = DensityMatrix::bell(2);
        assert!(vn_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(SubsystemSignature::single(Party::A, 2));
        assert!((vn_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mixture_entropy_sandwich() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let sig = SubsystemSignature::single(Party::A, 3);
            let states: Vec<_> = (0..3)
                .map(|_| random::density(&mut rng, sig.clone()))
                .collect();
            let p = random::probabilities(&mut rng, 3);
            let mix = DensityMatrix::mix(&p, &states.iter().collect::<Vec<_>>()).unwrap();
            let avg: f64 = p
                .iter()
                .zip(&states)
                .map(|(w, s)| w * vn_entropy(s).unwrap())
                .sum();
            let s = vn_entropy(&mix).unwrap();
            assert!(avg <= s + 1e-12);
            assert!(s <= avg + shannon(&p) + 1e-12);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rho = random::density(&mut rng, SubsystemSignature::bipartite(2, 2));
        assert!(rel_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(SubsystemSignature::bipartite(2, 2));
        assert!((rel_entropy(&DensityMatrix::bell(2), &mm).unwrap() - 2.0).abs() < 1e-12);
        let zero = DensityMatrix::basis(Party::A, 2, 0);
        let one = DensityMatrix::basis(Party::A, 2, 1);
        assert_eq!(rel_entropy(&zero, &one).unwrap(), f64::INFINITY);
    }

    #[test]
    fn klein_inequality_and_joint_convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let sig = SubsystemSignature::bipartite(2, 2);
        for _ in 0..20 {
            let r: Vec<_> = (0..2)
                .map(|_| random::density(&mut rng, sig.clone()))
                .collect();
            let s: Vec<_> = (0..2)
                .map(|_| random::density(&mut rng, sig.clone()))
                .collect();
            assert!(rel_entropy(&r[0], &s[0]).unwrap() >= 0.0);
            let p = random::probabilities(&mut rng, 2);
            let rm = DensityMatrix::mix(&p, &[&r[0], &r[1]]).unwrap();
            let sm = DensityMatrix::mix(&p, &[&s[0], &s[1]]).unwrap();
            let lhs = rel_entropy(&rm, &sm).unwrap();
            let rhs = p[0] * rel_entropy(&r[0], &s[0]).unwrap()
                + p[1] * rel_entropy(&r[1], &s[1]).unwrap();
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn dephrasure_information_formulas() {
        for &(p, q) in &[(0.2, 0.1), (0.0, 0.3), (0.5, 0.0), (0.9, 0.45)] {
            let ch = QuantumChannel::dephrasure(p, q).unwrap();
            let base = (1.0 - p) * (1.0 - h2(q).unwrap());
            assert!((reverse_coherent_info(&ch).unwrap() - (base - h2(p).unwrap())).abs() < 1e-10);
            assert!((coherent_info(&ch).unwrap() - (base - p)).abs() < 1e-10);
            let mix = ChannelEnsemble::dephrasure(p, q)
                .unwrap()
                .mixture()
                .unwrap();
            assert!(
                (reverse_coherent_info(&mix).unwrap() - reverse_coherent_info(&ch).unwrap()).abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn upper_bounds_from_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let a = random::density(&mut rng, SubsystemSignature::single(Party::A, 2));
        let b = random::density(&mut rng, SubsystemSignature::single(Party::B, 2));
        let prod = a.tensor(&b);
        assert!(ree_upper(&prod, &prod).unwrap().abs() < 1e-12);

        let bell = DensityMatrix::bell(2);
        let mut cand = CMat::zeros(4, 4);
        cand[(0, 0)] = 0.5.into();
        cand[(3, 3)] = 0.5.into();
        let cand = DensityMatrix::new(cand, SubsystemSignature::bipartite(2, 2)).unwrap();
        assert!((ree_upper(&bell, &cand).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(ree_upper(&prod, &bell), Err(Error::NotPpt(_))));

        let q = 0.2;
        let choi = QuantumChannel::dephasing(q).unwrap().choi();
        let v = ree_upper(&choi, &dephased(&choi)).unwrap();
        assert!((v - (1.0 - h2(q).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn marginal_product_keeps_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let sig =
            SubsystemSignature::new(vec![2, 3, 2], vec![Party::C, Party::B, Party::A]).unwrap();
        let rho = random::density(&mut rng, sig);
        let prod = marginal_product(&rho).unwrap();
        let ra = rho.partial_trace(&[Party::C, Party::A]).unwrap();
        let rb = rho.partial_trace(&[Party::B]).unwrap();
        // (C, A) ⊗ B reordered to (C, B, A)
        let expect = crate::opcore::permute_subsystems(
            &kron(ra.matrix(), rb.matrix()),
            &[2, 2, 3],
            &[0, 2, 1],
        );
        assert!(crate::opcore::max_abs_diff(prod.matrix(), &expect) < 1e-14);
    }
}
