//! Normal forms under unitary congruence (symmetric and skew matrices) and
//! the singular value decomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frob, max_abs, r, zeros, CMat, C64};

#[derive(Debug, Clone)]
pub struct FormResult {
    /// g with g·Z·gᵗ = canonical (congruence forms) or u with u·canonical·q̄ᵗ = A (SVD).
    pub transform: CMat,
    /// q for the SVD, absent for congruence forms.
    pub right: Option<CMat>,
    pub canonical: CMat,
    pub residual: f64,
}

/// The nonnegative entries that determine the orbit: singular values for
/// symmetric and general matrices, block moduli for skew ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalEntries(pub Vec<f64>);

fn symmetric_defect(z: &CMat, sign: f64) -> f64 {
    max_abs(&(z - z.transpose() * r(sign))) / (1.0 + max_abs(z))
}

/// Completes orthonormal columns to a unitary matrix with Gram-Schmidt on e₁, e₂, ….
fn complete_unitary(cols: Vec<DVector<C64>>, n: usize) -> CMat {
    let mut cols = cols;
    let mut k = 0;
    while cols.len() < n {
        let mut v = DVector::from_element(n, r(0.0));
        v[k] = r(1.0);
        k += 1;
        for _ in 0..2 {
            for q in &cols {
                let c = q.dotc(&v);
                v -= q * c;
            }
        }
        let nv = v.norm();
        if nv > 1e-8 {
            cols.push(v / r(nv));
        }
    }
    CMat::from_columns(&cols)
}

/// Takagi factorization: unitary g with gZgᵗ = diag(σ₁ ≥ … ≥ σₙ ≥ 0).
///
/// Takagi vectors u (Zū = σu) are the positive-eigenvalue eigenvectors
/// [x; y], u = x + iy, of the real symmetric matrix [[A, B], [B, −A]] with
/// Z = A + iB. Its spectrum is ± symmetric, so repeated values need no
/// special treatment; zero singular values are completed orthogonally.
pub fn takagi(z: &CMat) -> Result<FormResult> {
    let n = z.nrows();
    if z.ncols() != n || symmetric_defect(z, 1.0) > 1e-12 {
        return Err(Error::WrongSymmetry("symmetric"));
    }
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (a, b) = (z[(i % n, j % n)].re, z[(i % n, j % n)].im);
        match (i < n, j < n) {
            (true, true) => a,
            (false, false) => -a,
            _ => b,
        }
    });
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let top = eig.eigenvalues[order[0]].max(0.0);
    let mut cols = Vec::new();
    for &k in order.iter().take(n) {
        let lam = eig.eigenvalues[k];
        if lam <= 1e-12 * top.max(1e-300) {
            break;
        }
        let v = eig.eigenvectors.column(k);
        cols.push(DVector::from_fn(n, |i, _| C64::new(v[i], v[n + i])));
    }
    let u = complete_unitary(cols, n);
    let g = u.adjoint();
    let raw = &g * z * g.transpose();
    let mut canonical = zeros(n);
    for i in 0..n {
        canonical[(i, i)] = r(raw[(i, i)].re.max(0.0));
    }
    let residual = frob(&(raw - &canonical));
    Ok(FormResult { transform: g, right: None, canonical, residual })
}

/// Unitary g with gZgᵗ block diagonal, blocks [[0, x], [−x, 0]], x₁ ≥ x₂ ≥ … ≥ 0.
///
/// Deflation: for the top eigenpair (a, x²) of ZZᴴ, b = −Zā/x is a unit
/// vector orthogonal to a and Z − x(abᵗ − baᵗ) has smaller rank.
pub fn skew_standard(z: &CMat) -> Result<FormResult> {
    let n = z.nrows();
    if z.ncols() != n || symmetric_defect(z, -1.0) > 1e-12 {
        return Err(Error::WrongSymmetry("skew-symmetric"));
    }
    let scale = frob(z);
    let mut rest = z.clone();
    let mut cols: Vec<DVector<C64>> = Vec::new();
    for _ in 0..n / 2 {
        let h = &rest * rest.adjoint();
        let h = (&h + h.adjoint()) * r(0.5);
        let eig = h.symmetric_eigen();
        let (k, mu) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let x = mu.max(0.0).sqrt();
        if x <= 1e-12 * scale.max(1e-300) {
            break;
        }
        let mut a: DVector<C64> = eig.eigenvectors.column(k).into_owned();
        // keep a orthogonal to the earlier pairs despite roundoff
        for q in &cols {
            let c = q.dotc(&a);
            a -= q * c;
        }
        let na = a.norm();
        a /= r(na);
        let mut b = -(&rest * a.conjugate()) / r(x);
        for q in cols.iter().chain(std::iter::once(&a)) {
            let c = q.dotc(&b);
            b -= q * c;
        }
        let nb = b.norm();
        b /= r(nb);
        rest -= (&a * b.transpose() - &b * a.transpose()) * r(x);
        cols.push(a);
        cols.push(b);
    }
    let w = complete_unitary(cols, n);
    let g = w.adjoint();
    let raw = &g * z * g.transpose();
    let mut canonical = zeros(n);
    for k in 0..n / 2 {
        let x = raw[(2 * k, 2 * k + 1)].re.max(0.0);
        canonical[(2 * k, 2 * k + 1)] = r(x);
        canonical[(2 * k + 1, 2 * k)] = r(-x);
    }
    let residual = frob(&(raw - &canonical));
    Ok(FormResult { transform: g, right: None, canonical, residual })
}

/// A = u·diag(σ)·q̄ᵗ with σ descending.
pub fn svd_complex(a: &CMat) -> Result<FormResult> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument("svd_complex expects a square matrix".into()));
    }
    let n = a.nrows();
    let svd = a.clone().svd(true, true);
    let (u0, vt0) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let u = CMat::from_fn(n, n, |i, k| u0[(i, order[k])]);
    let q = CMat::from_fn(n, n, |i, k| vt0[(order[k], i)].conj());
    let mut canonical = zeros(n);
    for (k, &o) in order.iter().enumerate() {
        canonical[(k, k)] = r(svd.singular_values[o]);
    }
    let residual = frob(&(&u * &canonical * q.adjoint() - a));
    Ok(FormResult { transform: u, right: Some(q), canonical, residual })
}

impl FormResult {
    pub fn diagonal_entries(&self) -> CanonicalEntries {
        CanonicalEntries((0..self.canonical.nrows()).map(|i| self.canonical[(i, i)].re).collect())
    }

    pub fn block_entries(&self) -> CanonicalEntries {
        CanonicalEntries((0..self.canonical.nrows() / 2).map(|k| self.canonical[(2 * k, 2 * k + 1)].re).collect())
    }
}
