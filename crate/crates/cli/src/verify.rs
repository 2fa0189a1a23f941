use chansim::channels::{ChannelEnsemble, QuantumChannel};
use chansim::condsim::{
    build_control_program, conditional_choi, ree_chain_bound, ControlProgramState,
};
use chansim::cvgauss::{
    fock_covariance, fock_oracle, fock_oracle_rel_entropy, fock_rci, gaussian_rci,
    gaussian_rel_entropy, symplectic_entropy, FockPreparation,
};
use chansim::entro::{h2, ree_ppt, vn_entropy, ReeOptions};
use chansim::opcore::{max_abs_diff, random, CMat, Party, SubsystemSignature};
use chansim::telecov::{covariance_table, joint_covariance, simulation_error, WeylGroup};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Condsim,
    Teleport,
    Ree,
    Gaussian,
    All,
}

struct Checks {
    override_tol: Option<f64>,
    failed: usize,
}

impl Checks {
    fn value(&mut self, name: &str, deviation: f64, threshold: f64) {
        let threshold = self.override_tol.unwrap_or(threshold);
        let ok = deviation <= threshold;
        self.print(
            name,
            &format!("{deviation:.3e}"),
            &format!("{threshold:.0e}"),
            ok,
        );
    }

    fn flag(&mut self, name: &str, got: bool, expected: bool) {
        self.print(
            name,
            &got.to_string(),
            &format!("expect {expected}"),
            got == expected,
        );
    }

    fn error(&mut self, name: &str, e: impl std::fmt::Display) {
        self.print(name, &format!("error: {e}"), "-", false);
    }

    fn print(&mut self, name: &str, measured: &str, threshold: &str, ok: bool) {
        if !ok {
            self.failed += 1;
        }
        println!(
            "{:<48} {:>14} {:>14}  {}",
            name,
            measured,
            threshold,
            if ok { "pass" } else { "FAIL" }
        );
    }
}

fn random_pauli(rng: &mut ChaCha8Rng) -> QuantumChannel {
    let w = random::probabilities(rng, 4);
    QuantumChannel::pauli([w[0], w[1], w[2], w[3]]).expect("simplex point")
}

fn random_channel(rng: &mut ChaCha8Rng, d: usize, env: usize) -> QuantumChannel {
    let q = random::ginibre(rng, d * env, d).qr().q();
    let kraus = (0..env)
        .map(|k| CMat::from_fn(d, d, |i, j| q[(k * d + i, j)]))
        .collect();
    QuantumChannel::from_kraus(kraus).expect("isometry blocks")
}

fn condsim(c: &mut Checks, seed: u64) {
    let one = |c: &mut Checks, name: String, ens: chansim::Result<ChannelEnsemble>| {
        let dev = ens.and_then(|e| {
            let e = e.with_teleportation()?;
            let theta = build_control_program(&e)?;
            let choi = conditional_choi(&theta, &e.descriptors()?)?;
            Ok(max_abs_diff(choi.matrix(), e.mixture()?.choi().matrix()))
        });
        match dev {
            Ok(d) => c.value(&name, d, 1e-9),
            Err(e) => c.error(&name, e),
        }
    };
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        one(c, format!("condsim dad p={p}"), ChannelEnsemble::dad(p));
    }
    for i in 0..5 {
        for j in 0..5 {
            let (p, q) = (i as f64 / 4.0, j as f64 / 4.0);
            one(
                c,
                format!("condsim dephrasure p={p} q={q}"),
                ChannelEnsemble::dephrasure(p, q),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps: Vec<_> = (0..5).map(|_| random_pauli(&mut rng)).collect();
    let probs = random::probabilities(&mut rng, 5);
    one(
        c,
        "condsim random pauli ensemble".into(),
        ChannelEnsemble::new(probs.into_iter().zip(comps).collect()),
    );
}

fn teleport(c: &mut Checks, seed: u64) {
    let g = WeylGroup::new(2);
    let mut chans = vec![("identity".to_string(), QuantumChannel::identity(2))];
    for q in [0.0, 0.1, 0.5] {
        chans.push((
            format!("dephasing q={q}"),
            QuantumChannel::dephasing(q).expect("valid q"),
        ));
    }
    chans.push(("replacer0".into(), QuantumChannel::replacer0()));
    chans.push(("erasure flag".into(), QuantumChannel::erasure_flag(2)));
    for (label, ch) in &chans {
        let name = format!("teleport {label}");
        let err = covariance_table(ch, &g).and_then(|cov| match cov.table() {
            Some(t) => simulation_error(ch, &ch.choi(), t),
            None => Ok(f64::INFINITY),
        });
        match err {
            Ok(e) => c.value(&name, e, 1e-9),
            Err(e) => c.error(&name, e),
        }
    }
    let joint = |c: &mut Checks, name: &str, chans: &[QuantumChannel], expected: bool| {
        match joint_covariance(chans, &g) {
            Ok(v) => c.flag(name, v, expected),
            Err(e) => c.error(name, e),
        }
    };
    joint(
        c,
        "joint covariance dad",
        &[QuantumChannel::replacer0(), QuantumChannel::identity(2)],
        false,
    );
    joint(
        c,
        "joint covariance dephrasure",
        &[
            QuantumChannel::dephasing(0.2).expect("valid q"),
            QuantumChannel::erasure_flag(2),
        ],
        false,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paulis: Vec<_> = (0..4).map(|_| random_pauli(&mut rng)).collect();
    joint(c, "joint covariance pauli ensemble", &paulis, true);
}

fn ree(c: &mut Checks, seed: u64) {
    let opts = ReeOptions::default();
    let value = |c: &mut Checks,
                 name: &str,
                 rho: chansim::Result<chansim::opcore::DensityMatrix>,
                 expect: f64,
                 tol: f64| {
        match rho.and_then(|r| ree_ppt(&r, &opts)) {
            Ok(r) => c.value(name, (r.value - expect).abs(), tol),
            Err(e) => c.error(name, e),
        }
    };
    value(
        c,
        "ree bell state",
        Ok(QuantumChannel::identity(2).choi()),
        1.0,
        1e-3,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..5 {
        let a = random::density(&mut rng, SubsystemSignature::single(Party::A, 2));
        let b = random::density(&mut rng, SubsystemSignature::single(Party::B, 2));
        value(
            c,
            &format!("ree product state {k}"),
            Ok(a.tensor(&b)),
            0.0,
            1e-6,
        );
    }
    for q in [0.05, 0.1, 0.25] {
        let e = 1.0 - h2(q).expect("valid q");
        value(
            c,
            &format!("ree dephasing q={q}"),
            QuantumChannel::dephasing(q).map(|ch| ch.choi()),
            e,
            1e-3,
        );
    }
    for lam in [0.6, 0.7, 0.9] {
        let e = 1.0 - h2(lam).expect("valid lambda");
        let rest = (1.0 - lam) / 3.0;
        let rho = QuantumChannel::pauli([lam, rest, rest, rest]).map(|ch| ch.choi());
        value(c, &format!("ree bell-diagonal lambda={lam}"), rho, e, 1e-3);
    }
    let oracle = |s: &chansim::opcore::DensityMatrix| ree_ppt(s, &opts).map(|r| r.value);
    for k in 0..5 {
        let chans = [
            random_pauli(&mut rng),
            random_channel(&mut rng, 2, 1 + k % 4),
        ];
        let p = random::probabilities(&mut rng, 2);
        let name = format!("ree chain ensemble {k}");
        let res = ControlProgramState::from_blocks(p, chans.iter().map(|ch| ch.choi()).collect())
            .and_then(|theta| ree_chain_bound(&theta, oracle, 1e-3));
        match res {
            Ok(b) => c.value(&name, (b.e_theta - b.sum_bound).max(0.0), 1e-3),
            Err(e) => c.error(&name, e),
        }
    }
}

fn gaussian(c: &mut Checks) {
    let cutoff = 40;
    let preps = [
        FockPreparation::Thermal { nu: 2.0 },
        FockPreparation::Tmsv { mu: 1.5 },
        FockPreparation::QuasiChoi { eta: 0.5, mu: 1.5 },
        FockPreparation::QuasiChoi { eta: 0.9, mu: 2.0 },
    ];
    for prep in preps {
        let label = format!("{prep:?}");
        let res = (|| -> chansim::Result<Vec<(&str, f64)>> {
            let f = fock_oracle(&prep, cutoff)?;
            let g = prep.gaussian()?;
            let (mean, cov) = fock_covariance(&f.state, cutoff)?;
            let mut out = vec![
                (
                    "moments",
                    (&cov - g.cov()).amax().max((&mean - g.mean()).amax()),
                ),
                (
                    "entropy",
                    (vn_entropy(&f.state)? - symplectic_entropy(&g)?).abs(),
                ),
            ];
            if let FockPreparation::QuasiChoi { eta, mu } = prep {
                out.push((
                    "rci",
                    (fock_rci(&prep, cutoff)? - gaussian_rci(eta, mu)?).abs(),
                ));
                let marg = FockPreparation::ThermalPair {
                    nu_a: mu,
                    nu_b: eta * mu + 1.0 - eta,
                };
                let fr = fock_oracle_rel_entropy(&prep, &marg, cutoff)?;
                out.push((
                    "relative entropy",
                    (fr - gaussian_rel_entropy(&g, &marg.gaussian()?)?).abs(),
                ));
            }
            Ok(out)
        })();
        match res {
            Ok(rows) => rows
                .into_iter()
                .for_each(|(q, d)| c.value(&format!("gaussian {q} {label}"), d, 1e-6)),
            Err(e) => c.error(&format!("gaussian {label}"), e),
        }
    }
}

/// Runs a suite, printing one line per check. Returns whether all passed.
pub fn run(suite: Suite, seed: u64, tolerance: Option<f64>) -> bool {
    let mut c = Checks {
        override_tol: tolerance,
        failed: 0,
    };
    println!("seed {seed}");
    let all = suite == Suite::All;
    if all || suite == Suite::Condsim {
        condsim(&mut c, seed);
    }
    if all || suite == Suite::Teleport {
        teleport(&mut c, seed);
    }
    if all || suite == Suite::Ree {
        ree(&mut c, seed);
    }
    if all || suite == Suite::Gaussian {
        gaussian(&mut c);
    }
    if c.failed == 0 {
        println!("all checks passed");
    } else {
        println!("{} check(s) failed", c.failed);
    }
    c.failed == 0
}
