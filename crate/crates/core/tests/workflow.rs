//! Cross-module flows through the public API.

use chansim::bounds::{
    dad_bound, dephrasure_capacities, ensemble_bound, finite_size_report, lossy_mixture_report,
};
use chansim::channels::{ChannelEnsemble, QuantumChannel};
use chansim::condsim::{
    build_control_program, conditional_apply, ree_chain_bound, verify_simulation, FiniteSizeParams,
};
use chansim::cvgauss::{gaussian_rci, lossy_mixture_bounds, plob_bound};
use chansim::entro::{h2, ree_ppt, reverse_coherent_info, ReeOptions};
use chansim::opcore::{max_abs_diff, random, Party, SubsystemSignature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn dephrasure_end_to_end() {
    let (p, q) = (0.3, 0.15);
    let ens = ChannelEnsemble::dephrasure(p, q)
        .unwrap()
        .with_teleportation()
        .unwrap();
    let theta = build_control_program(&ens).unwrap();
    let opts = ReeOptions::default();
    let chain = ree_chain_bound(&theta, |s| ree_ppt(s, &opts).map(|r| r.value), 1e-3).unwrap();
    let report = dephrasure_capacities(p, q).unwrap();
    assert!((chain.sum_bound - report.upper).abs() < 1e-3);
    let rci = reverse_coherent_info(&QuantumChannel::dephrasure(p, q).unwrap()).unwrap();
    assert!(rci <= report.lower.unwrap() + 1e-12);
}

#[test]
fn conditional_output_matches_mixture_on_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ens = ChannelEnsemble::dad(0.4)
        .unwrap()
        .with_teleportation()
        .unwrap();
    let theta = build_control_program(&ens).unwrap();
    let mix = ens.mixture().unwrap();
    for _ in 0..5 {
        let rho = random::density(&mut rng, SubsystemSignature::single(Party::A, 2));
        let out = conditional_apply(&theta, &ens.descriptors().unwrap(), &rho).unwrap();
        let expected = mix.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), expected.matrix()) < 1e-9);
    }
    assert!(verify_simulation(&ens).unwrap() < 1e-9);
}

#[test]
fn ensemble_report_sandwich() {
    let ens = ChannelEnsemble::dad(0.25).unwrap();
    let r = ensemble_bound(&ens, &[0.0, 1.0]).unwrap();
    assert!((r.upper - 0.75).abs() < 1e-12);
    assert!(r.lower.unwrap() <= r.upper);
    assert_eq!(dad_bound(0.25).unwrap().upper, r.upper);
}

#[test]
fn lossy_reports_follow_repeaterless_bound() {
    let r = lossy_mixture_report(&[1.0], &[0.6]).unwrap();
    assert!((r.upper - plob_bound(0.6).unwrap()).abs() < 1e-12);
    assert!(gaussian_rci(0.6, 1e3).unwrap() <= r.upper);
}

#[test]
fn finite_size_report_above_asymptote() {
    let r = finite_size_report(&FiniteSizeParams::new(10_000, 0.01, 1.0).unwrap(), 0.5).unwrap();
    assert!(r.upper > 0.5 * 0.96);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dephrasure_reports_are_consistent(p in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let r = dephrasure_capacities(p, q).unwrap();
        prop_assert!(r.validate().is_ok());
        prop_assert!((r.upper - (1.0 - p) * (1.0 - h2(q).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn lossy_sandwich_is_ordered(p in 0.01..0.99f64, e1 in 0.0..0.95f64, e2 in 0.0..0.95f64) {
        let (lo, hi) = lossy_mixture_bounds(&[p, 1.0 - p], &[e1, e2]).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }
}
