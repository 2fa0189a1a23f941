//! Seeded random test objects (Ginibre states, Hermitian matrices,
//! probability vectors).

use rand::Rng;

use super::{c, CMat, DensityMatrix, SubsystemSignature};

/// Standard normal sample (Box-Muller).
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(normal(rng), normal(rng)))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = ginibre(rng, n, n);
    (&g + g.adjoint()).scale(0.5)
}

/// Full-rank mixed state from the Ginibre ensemble.
pub fn density<R: Rng + ?Sized>(rng: &mut R, sig: SubsystemSignature) -> DensityMatrix {
    let n = sig.total_dim();
    let g = ginibre(rng, n, n);
    let m = &g * g.adjoint();
    DensityMatrix::normalized(m, sig).expect("Ginibre matrix is a valid state")
}

pub fn pure<R: Rng + ?Sized>(rng: &mut R, sig: SubsystemSignature) -> DensityMatrix {
    let n = sig.total_dim();
    let ket: Vec<_> = (0..n).map(|_| c(normal(rng), normal(rng))).collect();
    DensityMatrix::from_ket(&ket, sig).expect("nonzero ket")
}

/// Uniform point on the probability simplex.
pub fn probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}
