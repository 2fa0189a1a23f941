//! Dense complex-matrix kernels: Kronecker products, subsystem reshuffles,
//! Hermitian eigendecomposition and spectral matrix functions.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcore::TOL;

pub type CMat = DMatrix<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// `|i><j|` in dimension `d`.
pub fn ket_bra(d: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = cr(1.0);
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff on mismatched shapes");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Largest entry of `m - m^dagger`.
pub fn hermiticity_error(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Real part of `Tr[a b]`.
pub fn trace_prod_re(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Mixed-radix digit table: `digits[idx]` is the multi-index of `idx`
/// for the given local dimensions (first subsystem most significant).
pub(crate) fn digit_table(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut d = vec![0; dims.len()];
            for k in (0..dims.len()).rev() {
                d[k] = idx % dims[k];
                idx /= dims[k];
            }
            d
        })
        .collect()
}

pub(crate) fn compose_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace keeping the subsystems at positions `keep` (in their
/// original order).
pub fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} vs subsystem product {}",
            m.nrows(),
            m.ncols(),
            total
        )));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidSignature("keep index out of range".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len())
        .filter(|k| !keep_sorted.contains(k))
        .collect();
    let kdims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kd: usize = kdims.iter().product();
    let td: usize = tdims.iter().product();
    let kdig = digit_table(&kdims);
    let tdig = digit_table(&tdims);

    // full[k][r] = flat index of (kept digits k, traced digits r)
    let mut full = vec![vec![0usize; td]; kd];
    let mut digits = vec![0usize; dims.len()];
    for (k, kds) in kdig.iter().enumerate() {
        for (r, tds) in tdig.iter().enumerate() {
            for (pos, &s) in keep_sorted.iter().enumerate() {
                digits[s] = kds[pos];
            }
            for (pos, &s) in traced.iter().enumerate() {
                digits[s] = tds[pos];
            }
            full[k][r] = compose_index(&digits, dims);
        }
    }
    let mut out = CMat::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..td {
                acc += m[(full[a][r], full[b][r])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Partial transpose on the subsystems at positions `which`.
pub fn partial_transpose(m: &CMat, dims: &[usize], which: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    let dig = digit_table(dims);
    let mut out = CMat::zeros(total, total);
    let mut di = vec![0usize; dims.len()];
    let mut dj = vec![0usize; dims.len()];
    for i in 0..total {
        for j in 0..total {
            di.copy_from_slice(&dig[i]);
            dj.copy_from_slice(&dig[j]);
            for &s in which {
                std::mem::swap(&mut di[s], &mut dj[s]);
            }
            out[(compose_index(&di, dims), compose_index(&dj, dims))] = m[(i, j)];
        }
    }
    out
}

/// Reorders subsystems: output subsystem `k` is input subsystem `perm[k]`.
pub fn permute_subsystems(m: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    assert_eq!(perm.len(), dims.len());
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let dig = digit_table(dims);
    let map: Vec<usize> = dig
        .iter()
        .map(|d| {
            let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            compose_index(&nd, &new_dims)
        })
        .collect();
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMat {
        let n = self.values.len();
        let mut d = CMat::zeros(n, n);
        for (k, &v) in self.values.iter().enumerate() {
            d[(k, k)] = cr(v);
        }
        &self.vectors * d * self.vectors.adjoint()
    }

    /// Applies `f` to the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let fk = f(lam);
            if fk == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for i in 0..n {
                let vi = v[i] * fk;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

pub fn eig_hermitian(m: &CMat) -> Result<HermitianEigen> {
    let err = hermiticity_error(m);
    if err > TOL.hermiticity {
        return Err(Error::NotHermitian(err));
    }
    eig_symmetrized(m)
}

/// Eigendecomposition of the Hermitian part of `m`, without the hermiticity
/// gate. Used internally where `m` is Hermitian by construction but has a
/// large norm (gradients, barrier Hessians).
pub(crate) fn eig_symmetrized(m: &CMat) -> Result<HermitianEigen> {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Connected components of the joint nonzero pattern of the given
/// square matrices. Each component indexes a diagonal block shared by all
/// of them.
pub fn block_components(mats: &[&CMat]) -> Vec<Vec<usize>> {
    let n = mats[0].nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for m in mats {
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != Complex64::new(0.0, 0.0) || m[(j, i)] != Complex64::new(0.0, 0.0) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

pub fn submatrix(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Eigenvalues (descending) computed block by block; exact for matrices with
/// a block-diagonal nonzero pattern and far cheaper for the large sparse
/// Fock-space states.
pub fn eigenvalues_blocked(m: &CMat) -> Result<Vec<f64>> {
    let mut vals = Vec::with_capacity(m.nrows());
    for block in block_components(&[m]) {
        if block.len() == 1 {
            let z = m[(block[0], block[0])];
            if z.im.abs() > TOL.hermiticity {
                return Err(Error::NotHermitian(z.im.abs()));
            }
            vals.push(z.re);
        } else {
            vals.extend(eig_hermitian(&submatrix(m, &block))?.values);
        }
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}
