use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// Elementary matrix with a single 1 at (i, j), zero based.
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(n);
    m[(i, j)] = r(1.0);
    m
}

pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn conj(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().sum()
}

/// tr(AB) without forming the product.
pub fn trace_prod(a: &CMat, b: &CMat) -> C64 {
    let n = a.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

fn norm1(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let nrm = norm1(a);
    let mut s = 0i32;
    if nrm > 0.5 {
        s = (nrm / 0.5).log2().ceil() as i32;
    }
    let scaled = a * r(0.5f64.powi(s));
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled * r(1.0 / k as f64);
        result += &term;
        if max_abs(&term) < 1e-18 * max_abs(&result) {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

pub fn singular_values_real(a: &RMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

fn count_above(s: &[f64], rel: f64) -> usize {
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&v| v > rel * top).count(),
        _ => 0,
    }
}

/// Numerical rank with singular values below `rel * largest` treated as zero.
pub fn rank(a: &CMat, rel: f64) -> usize {
    count_above(&singular_values(a), rel)
}

pub fn rank_real(a: &RMat, rel: f64) -> usize {
    count_above(&singular_values_real(a), rel)
}

/// Matrices as the columns of one complex matrix (column-major flattening).
pub fn as_columns(mats: &[CMat]) -> CMat {
    let len = mats.first().map_or(0, |m| m.len());
    let mut out = CMat::zeros(len, mats.len());
    for (j, m) in mats.iter().enumerate() {
        for (i, z) in m.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    out
}

/// Real embedding: each matrix becomes the column [Re vec; Im vec].
pub fn as_real_columns(mats: &[CMat]) -> RMat {
    let len = mats.first().map_or(0, |m| m.len());
    let mut out = RMat::zeros(2 * len, mats.len());
    for (j, m) in mats.iter().enumerate() {
        for (i, z) in m.iter().enumerate() {
            out[(i, j)] = z.re;
            out[(len + i, j)] = z.im;
        }
    }
    out
}

/// Greedy selection of linearly independent matrices, over C or over R.
///
/// A candidate is kept when its component orthogonal to the current span
/// exceeds `rel` times its own norm (two passes of Gram-Schmidt).
pub struct SpanBuilder {
    real: bool,
    rel: f64,
    q: Vec<DVector<C64>>,
}

impl SpanBuilder {
    pub fn complex(rel: f64) -> Self {
        SpanBuilder { real: false, rel, q: Vec::new() }
    }

    pub fn real(rel: f64) -> Self {
        SpanBuilder { real: true, rel, q: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    fn project_out(&self, v: &mut DVector<C64>) {
        for _ in 0..2 {
            for q in &self.q {
                let coef = q.dotc(v);
                if self.real {
                    *v -= q * r(coef.re);
                } else {
                    *v -= q * coef;
                }
            }
        }
    }

    /// ‖m − P m‖ / ‖m‖ for the orthogonal projection P onto the current span.
    pub fn residual(&self, m: &CMat) -> f64 {
        let mut v = DVector::from_iterator(m.len(), m.iter().copied());
        let n0 = v.norm();
        if n0 == 0.0 {
            return 0.0;
        }
        self.project_out(&mut v);
        v.norm() / n0
    }

    /// Returns true if the matrix enlarged the span.
    pub fn push(&mut self, m: &CMat) -> bool {
        let mut v = DVector::from_iterator(m.len(), m.iter().copied());
        let n0 = v.norm();
        if n0 == 0.0 {
            return false;
        }
        self.project_out(&mut v);
        let n1 = v.norm();
        if n1 <= self.rel * n0 || n1 < 1e-14 {
            return false;
        }
        self.q.push(v / r(n1));
        true
    }
}

pub fn randn<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(randn(rng), randn(rng)))
}

/// Haar-distributed unitary matrix via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = random_complex(rng, n, n);
    let qr = a.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { r(1.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMat::identity(n, n))) <= tol
}
