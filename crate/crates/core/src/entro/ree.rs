//! Relative entropy of entanglement relaxed to PPT states.
//!
//! The PPT-REE `min S(ρ‖σ)` over `σ ⪰ 0`, `σ^Γ ⪰ 0`, `Tr σ = 1` is solved by
//! a primal log-barrier method: damped Newton steps on
//! `t·S(ρ‖σ) - log det σ - log det σ^Γ` with `t` increased geometrically.
//! Each centred point is within `2n/t` nats of the optimum, which is what
//! `gap_estimate` reports.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{dephased, marginal_product, nats_to_bits, rel_entropy, vn_entropy};
use crate::error::{Error, Result};
use crate::opcore::{
    eig_symmetrized, partial_transpose, permute_subsystems, CMat, DensityMatrix, Party, TOL,
};

#[derive(Clone, Copy, Debug)]
pub struct ReeOptions {
    /// Budget of Newton steps over all barrier stages.
    pub max_iter: usize,
    /// Target optimality gap in bits.
    pub tol: f64,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self {
            max_iter: 600,
            tol: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ReeMethod {
    ClosedForm,
    CandidateState,
    PptBarrier,
}

#[derive(Clone, Debug)]
pub struct ReeResult {
    /// Relative entropy to `witness`, in bits.
    pub value: f64,
    pub witness: DensityMatrix,
    pub method: ReeMethod,
    /// Bound on `value - PPT-REE` in bits.
    pub gap_estimate: f64,
    pub converged: bool,
    /// PPT coincides with separability (total dimension at most 6).
    pub separable_exact: bool,
}

/// PPT relative entropy of entanglement across the Alice|Bob cut of the
/// signature (every label except `B` sits with Alice).
pub fn ree_ppt(rho: &DensityMatrix, opts: &ReeOptions) -> Result<ReeResult> {
    let sig = rho.signature();
    let (da, db) = sig.cut_dims();
    if sig.bob_positions().is_empty() || sig.alice_positions().is_empty() {
        return Err(Error::InvalidSignature(
            "state needs subsystems on both sides of the cut".into(),
        ));
    }
    let separable_exact = (da.min(db) == 2 && da.max(db) <= 3) || da.min(db) == 1;
    if rho.min_partial_transpose_eigenvalue()? >= -TOL.ppt_slack {
        return Ok(ReeResult {
            value: 0.0,
            witness: rho.clone(),
            method: ReeMethod::ClosedForm,
            gap_estimate: 0.0,
            converged: true,
            separable_exact,
        });
    }

    let spectrum = rho.eigenvalues()?;
    if spectrum[0] >= 1.0 - 1e-12 {
        // pure state: the entropy of entanglement
        let alice: Vec<Party> = sig
            .labels()
            .iter()
            .copied()
            .filter(|p| !p.is_bob())
            .collect();
        let value = vn_entropy(&rho.partial_trace(&alice)?)?;
        return Ok(ReeResult {
            value,
            witness: pure_state_witness(rho)?,
            method: ReeMethod::ClosedForm,
            gap_estimate: 0.0,
            converged: true,
            separable_exact,
        });
    }

    let mut best: Option<(f64, DensityMatrix)> = None;
    let maximally_mixed = DensityMatrix::maximally_mixed(sig.clone());
    for cand in [maximally_mixed, marginal_product(rho)?, dephased(rho)] {
        let v = rel_entropy(rho, &cand)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, cand));
        }
    }
    let (cand_value, cand_state) = best.expect("three candidates");

    let (m, _, _) = rho.alice_bob_matrix();
    let mut solver = Barrier::new(&m, da, db)?;
    let outcome = solver.solve(opts);
    let (sigma, value, gap, converged) = match outcome {
        Ok(r) => r,
        Err(Error::Numerical(_)) => (None, f64::INFINITY, f64::INFINITY, false),
        Err(e) => return Err(e),
    };
    if let Some(sigma) = sigma.filter(|_| value <= cand_value) {
        let mut perm = sig.alice_positions();
        perm.extend(sig.bob_positions());
        let dims: Vec<usize> = perm.iter().map(|&k| sig.dims()[k]).collect();
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let back = permute_subsystems(&sigma, &dims, &inverse);
        let back = (&back + back.adjoint()).scale(0.5);
        let witness = DensityMatrix::normalized(back, sig.clone())?;
        let value = rel_entropy(rho, &witness)?;
        return Ok(ReeResult {
            value,
            witness,
            method: ReeMethod::PptBarrier,
            gap_estimate: gap,
            converged,
            separable_exact,
        });
    }
    Ok(ReeResult {
        value: cand_value,
        witness: cand_state,
        method: ReeMethod::CandidateState,
        gap_estimate: cand_value,
        converged: false,
        separable_exact,
    })
}

/// `Σ_k s_k² |a_k b_k><a_k b_k|` from the Schmidt decomposition of a pure
/// state, the separable state attaining its REE.
fn pure_state_witness(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let sig = rho.signature();
    let (m, da, db) = rho.alice_bob_matrix();
    let top = eig_symmetrized(&m)?;
    let psi = top.vectors.column(0);
    let coeffs = CMat::from_fn(da, db, |a, b| psi[a * db + b]);
    let svd = coeffs.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut sigma = CMat::zeros(da * db, da * db);
    for (k, s) in svd.singular_values.iter().enumerate() {
        let w = s * s;
        if w == 0.0 {
            continue;
        }
        for i in 0..da * db {
            let ki = u[(i / db, k)] * vt[(k, i % db)];
            for j in 0..da * db {
                let kj = u[(j / db, k)] * vt[(k, j % db)];
                sigma[(i, j)] += ki * kj.conj() * w;
            }
        }
    }
    let mut perm = sig.alice_positions();
    perm.extend(sig.bob_positions());
    let dims: Vec<usize> = perm.iter().map(|&k| sig.dims()[k]).collect();
    let mut inverse = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    DensityMatrix::normalized(permute_subsystems(&sigma, &dims, &inverse), sig.clone())
}

/// Sparse Hermitian basis element `Σ coef |r><c|`.
type Sparse = Vec<(Complex64, usize, usize)>;

fn hermitian_basis(n: usize) -> Vec<Sparse> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        out.push(vec![(Complex64::new(1.0, 0.0), k, k)]);
    }
    for k in 0..n {
        for l in (k + 1)..n {
            out.push(vec![
                (Complex64::new(s, 0.0), k, l),
                (Complex64::new(s, 0.0), l, k),
            ]);
            out.push(vec![
                (Complex64::new(0.0, s), k, l),
                (Complex64::new(0.0, -s), l, k),
            ]);
        }
    }
    out
}

fn transpose_bob(e: &Sparse, db: usize) -> Sparse {
    e.iter()
        .map(|&(z, r, c)| {
            let (a1, b1) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            (z, a1 * db + b2, a2 * db + b1)
        })
        .collect()
}

/// `V† E V` for a sparse `E`.
fn rotate(e: &Sparse, v: &CMat) -> CMat {
    let n = v.nrows();
    let mut out = CMat::zeros(n, n);
    for &(z, r, c) in e {
        for i in 0..n {
            let left = v[(r, i)].conj() * z;
            for j in 0..n {
                out[(i, j)] += left * v[(c, j)];
            }
        }
    }
    out
}

fn to_dense(e: &Sparse, x: f64, out: &mut CMat) {
    for &(z, r, c) in e {
        out[(r, c)] += z * x;
    }
}

fn l1(a: f64, b: f64) -> f64 {
    if a == b {
        1.0 / a
    } else {
        (a / b).ln() / (a - b)
    }
}

/// Second divided difference of `ln`.
fn l2(x: f64, y: f64, z: f64) -> f64 {
    let mut v = [x, y, z];
    v.sort_by(|a, b| b.total_cmp(a));
    let [hi, mid, lo] = v;
    if hi - lo <= 1e-8 * hi {
        -0.5 / (mid * mid)
    } else {
        (l1(hi, mid) - l1(mid, lo)) / (hi - lo)
    }
}

struct Point {
    lam: Vec<f64>,
    u: CMat,
    mu: Vec<f64>,
    w: CMat,
    /// `-Tr ρ ln σ`
    cross: f64,
    barrier: f64,
}

struct Barrier {
    rho: CMat,
    n: usize,
    db: usize,
    basis: Vec<Sparse>,
    basis_pt: Vec<Sparse>,
    /// `-S(ρ)` in nats
    neg_entropy: f64,
}

impl Barrier {
    fn new(rho: &CMat, _da: usize, db: usize) -> Result<Self> {
        let n = rho.nrows();
        let basis = hermitian_basis(n);
        let basis_pt = basis.iter().map(|e| transpose_bob(e, db)).collect();
        let er = eig_symmetrized(rho)?;
        let neg_entropy = er
            .values
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * x.ln())
            .sum();
        Ok(Self {
            rho: rho.clone(),
            n,
            db,
            basis,
            basis_pt,
            neg_entropy,
        })
    }

    fn point(&self, sigma: &CMat) -> Result<Option<Point>> {
        let es = eig_symmetrized(sigma)?;
        if es.values.iter().any(|&x| x <= 0.0) {
            return Ok(None);
        }
        let pt = partial_transpose(sigma, &[self.n / self.db, self.db], &[1]);
        let ep = eig_symmetrized(&pt)?;
        if ep.values.iter().any(|&x| x <= 0.0) {
            return Ok(None);
        }
        let rt = es.vectors.adjoint() * &self.rho * &es.vectors;
        let cross = -(0..self.n)
            .map(|k| rt[(k, k)].re * es.values[k].ln())
            .sum::<f64>();
        let barrier = -es.values.iter().map(|x| x.ln()).sum::<f64>()
            - ep.values.iter().map(|x| x.ln()).sum::<f64>();
        Ok(Some(Point {
            lam: es.values,
            u: es.vectors,
            mu: ep.values,
            w: ep.vectors,
            cross,
            barrier,
        }))
    }

    fn objective(&self, p: &Point) -> f64 {
        self.neg_entropy + p.cross
    }

    /// Gradient and Hessian of `t·f + barrier` in the Hermitian basis.
    fn derivatives(&self, p: &Point, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let m = self.basis.len();
        let nn = n * n;
        let lam = &p.lam;
        let rt = p.u.adjoint() * &self.rho * &p.u;
        let mut lt = vec![0.0; n * n * n];
        for k in 0..n {
            for mm in 0..n {
                for l in 0..n {
                    lt[(k * n + mm) * n + l] = l2(lam[k], lam[mm], lam[l]);
                }
            }
        }
        let mut grad = DVector::<f64>::zeros(m);
        // rows: coefficient matrices, columns: rotated basis, flattened
        let mut left = DMatrix::<Complex64>::zeros(m, nn);
        let mut right = DMatrix::<Complex64>::zeros(nn, m);
        let mut left_pt = DMatrix::<Complex64>::zeros(m, nn);
        let mut right_pt = DMatrix::<Complex64>::zeros(nn, m);
        for a in 0..m {
            let ea = rotate(&self.basis[a], &p.u);
            let eh = rotate(&self.basis_pt[a], &p.w);
            let mut g = 0.0;
            for k in 0..n {
                for l in 0..n {
                    // -t Σ Γ_kl ρ_kl E_lk
                    g -= t * (l1(lam[k], lam[l]) * rt[(k, l)] * ea[(l, k)]).re;
                }
                g -= ea[(k, k)].re / lam[k];
                g -= eh[(k, k)].re / p.mu[k];
            }
            grad[a] = g;
            for i in 0..n {
                for j in 0..n {
                    // A_ij = Σ_k L[k][i][j] ρ_jk E_ki ; B_ij = Σ_l L[i][j][l] ρ_li E_jl
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += lt[(k * n + i) * n + j] * rt[(j, k)] * ea[(k, i)];
                        acc += lt[(i * n + j) * n + k] * rt[(k, i)] * ea[(j, k)];
                    }
                    left[(a, i * n + j)] = -acc * t;
                    right[(i * n + j, a)] = ea[(i, j)];
                    // barrier: Σ E_ij/(λ_i λ_j) E'_ji
                    left[(a, i * n + j)] += ea[(j, i)] / (lam[i] * lam[j]);
                    left_pt[(a, i * n + j)] = eh[(j, i)] / (p.mu[i] * p.mu[j]);
                    right_pt[(i * n + j, a)] = eh[(i, j)];
                }
            }
        }
        let h = (&left * &right + &left_pt * &right_pt).map(|z| z.re);
        let h = (&h + h.transpose()).scale(0.5);
        (grad, h)
    }

    fn step(&self, dx: &DVector<f64>) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (a, e) in self.basis.iter().enumerate() {
            to_dense(e, dx[a], &mut out);
        }
        out
    }

    /// Returns `(σ, value in bits, gap in bits, converged)`.
    fn solve(&mut self, opts: &ReeOptions) -> Result<(Option<CMat>, f64, f64, bool)> {
        let n = self.n;
        let m = self.basis.len();
        let nu = 2.0 * n as f64;
        let mut sigma = CMat::identity(n, n).unscale(n as f64);
        let mut p = self
            .point(&sigma)?
            .expect("maximally mixed state is interior");
        let mut t = 1.0;
        let mut iters = 0;
        let target = opts.tol * std::f64::consts::LN_2;
        loop {
            // centring
            loop {
                if iters >= opts.max_iter {
                    let value = nats_to_bits(self.objective(&p));
                    return Ok((Some(sigma), value, value, false));
                }
                iters += 1;
                let (g, h) = self.derivatives(&p, t);
                let mut kkt = DMatrix::<f64>::zeros(m + 1, m + 1);
                kkt.view_mut((0, 0), (m, m)).copy_from(&h);
                for a in 0..n {
                    // diagonal basis elements carry the trace
                    kkt[(a, m)] = 1.0;
                    kkt[(m, a)] = 1.0;
                }
                let mut rhs = DVector::<f64>::zeros(m + 1);
                rhs.rows_mut(0, m).copy_from(&(-&g));
                let sol = kkt
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| Error::Numerical("singular Newton system".into()))?;
                let dx = sol.rows(0, m).into_owned();
                let dec2 = -g.dot(&dx);
                if !(dec2.is_finite()) {
                    return Err(Error::Numerical("non-finite Newton decrement".into()));
                }
                if dec2 / 2.0 <= 1e-10 {
                    break;
                }
                let ds = self.step(&dx);
                let f0 = t * p.cross + p.barrier;
                let mut s = 1.0;
                let mut accepted = None;
                while s > 1e-14 {
                    let cand = &sigma + ds.scale(s);
                    if let Some(q) = self.point(&cand)? {
                        let f1 = t * q.cross + q.barrier;
                        if f1 <= f0 - 0.25 * s * dec2
                            || (dec2 < 1e-6 && f1 <= f0 + 1e-12 * f0.abs())
                        {
                            accepted = Some((cand, q));
                            break;
                        }
                    }
                    s *= 0.5;
                }
                match accepted {
                    Some((cand, q)) => {
                        sigma = cand;
                        p = q;
                    }
                    // no progress representable at this precision
                    None => break,
                }
            }
            if nu / t <= target {
                break;
            }
            t = (t * 8.0).min(nu / target * 1.000001);
        }
        let value = nats_to_bits(self.objective(&p));
        Ok((Some(sigma), value, nats_to_bits(nu / t), true))
    }
}
