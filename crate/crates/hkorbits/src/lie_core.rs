//! Matrix realizations of sl(n,C), so(n,C) and sp(2m,C).

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, comm, conj, expm, max_abs, r, trace_prod, unit, zeros, CMat, SpanBuilder, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SL,
    SO,
    SP,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(Family::SL),
            "so" => Ok(Family::SO),
            "sp" => Ok(Family::SP),
            other => Err(Error::UnsupportedAlgebra(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SL => "sl",
            Family::SO => "so",
            Family::SP => "sp",
        }
    }
}

/// The symmetric form used to realize so(n); ignored for sl and sp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormChoice {
    Standard,
    AntiDiagonal,
    /// Anti-diagonal 12x12 block followed by an identity block.
    B12Block,
    /// 1 ⊕ [[0, I3], [I3, 0]] followed by an identity block.
    So7Block,
}

pub struct LieAlgebra {
    family: Family,
    n: usize,
    size: usize,
    form_choice: FormChoice,
    form: CMat,
    killing_scale: f64,
    basis: Vec<CMat>,
    compact_basis: Vec<CMat>,
    coords: OnceLock<CMat>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("family", &self.family)
            .field("n", &self.n)
            .field("form", &self.form_choice)
            .finish()
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.name(), self.n)
    }
}

fn anti_diagonal(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i + j + 1 == n { r(1.0) } else { r(0.0) })
}

fn so_form(n: usize, choice: FormChoice) -> Result<CMat> {
    match choice {
        FormChoice::Standard => Ok(CMat::identity(n, n)),
        FormChoice::AntiDiagonal => Ok(anti_diagonal(n)),
        FormChoice::B12Block => {
            if n < 12 {
                return Err(Error::UnsupportedAlgebra(format!("B12 block form needs n >= 12, got {n}")));
            }
            let mut b = CMat::identity(n, n);
            b.view_mut((0, 0), (12, 12)).copy_from(&anti_diagonal(12));
            Ok(b)
        }
        FormChoice::So7Block => {
            if n < 7 {
                return Err(Error::UnsupportedAlgebra(format!("so7 block form needs n >= 7, got {n}")));
            }
            let mut b = CMat::identity(n, n);
            for i in 1..7 {
                b[(i, i)] = r(0.0);
            }
            for i in 0..3 {
                b[(1 + i, 4 + i)] = r(1.0);
                b[(4 + i, 1 + i)] = r(1.0);
            }
            Ok(b)
        }
    }
}

fn symplectic_form(m: usize) -> CMat {
    let mut om = zeros(2 * m);
    for i in 0..m {
        om[(i, m + i)] = r(1.0);
        om[(m + i, i)] = r(-1.0);
    }
    om
}

/// Builds the realization. For `SP` the integer is the rank m (matrix size 2m);
/// for `SL` and `SO` it is the matrix size.
pub fn build_algebra(family: Family, n: usize, form_choice: FormChoice) -> Result<LieAlgebra> {
    let (size, form, killing_scale) = match family {
        Family::SL => {
            if n < 2 {
                return Err(Error::UnsupportedAlgebra(format!("sl({n})")));
            }
            (n, CMat::identity(n, n), 2.0 * n as f64)
        }
        Family::SO => {
            if n < 3 {
                return Err(Error::UnsupportedAlgebra(format!("so({n})")));
            }
            let b = so_form(n, form_choice)?;
            (n, b, n as f64 - 2.0)
        }
        Family::SP => {
            if n < 1 {
                return Err(Error::UnsupportedAlgebra("sp(0)".into()));
            }
            (2 * n, symplectic_form(n), 2.0 * n as f64 + 2.0)
        }
    };
    let form_choice = if family == Family::SO { form_choice } else { FormChoice::Standard };

    let basis = match family {
        Family::SL => {
            let mut b = Vec::with_capacity(size * size - 1);
            for i in 0..size {
                for j in 0..size {
                    if i != j {
                        b.push(unit(size, i, j));
                    }
                }
            }
            for i in 0..size - 1 {
                b.push(unit(size, i, i) - unit(size, i + 1, i + 1));
            }
            b
        }
        Family::SO => {
            let binv = form.clone().try_inverse().ok_or(Error::SingularForm)?;
            let b2 = &form * &form;
            if max_abs(&(b2 - CMat::identity(size, size))) > 1e-14
                || form.iter().any(|z| z.im != 0.0)
                || max_abs(&(form.transpose() - &form)) > 0.0
            {
                return Err(Error::UnsupportedAlgebra("so form must be real symmetric with B^2 = I".into()));
            }
            let mut b = Vec::with_capacity(size * (size - 1) / 2);
            for i in 0..size {
                for j in i + 1..size {
                    b.push((unit(size, i, j) - unit(size, j, i)) * &binv);
                }
            }
            b
        }
        Family::SP => {
            let oinv = form.clone().try_inverse().ok_or(Error::SingularForm)?;
            let mut b = Vec::with_capacity(n * (2 * n + 1));
            for i in 0..size {
                for j in i..size {
                    let mut s = unit(size, i, j);
                    s[(j, i)] += r(1.0);
                    b.push(s * &oinv);
                }
            }
            b
        }
    };

    let mut alg = LieAlgebra {
        family,
        n,
        size,
        form_choice,
        form,
        killing_scale,
        basis,
        compact_basis: Vec::new(),
        coords: OnceLock::new(),
    };

    let mut span = SpanBuilder::real(1e-9);
    let mut compact = Vec::with_capacity(alg.basis.len());
    for z in &alg.basis {
        let s = alg.sigma(z);
        for cand in [z + &s, (z - &s) * c(0.0, 1.0)] {
            if span.push(&cand) {
                compact.push(cand);
            }
        }
    }
    if compact.len() != alg.basis.len() {
        return Err(Error::UnsupportedAlgebra(format!(
            "compact form has real dimension {} instead of {}",
            compact.len(),
            alg.basis.len()
        )));
    }
    alg.compact_basis = compact;

    // check the fast Killing path against the ad-trace on one pair
    let a = &alg.basis[0];
    let sa = alg.sigma(a);
    let fast = alg.inner(a, &sa);
    let slow = alg.ad_trace_inner(a, &sa);
    if (fast - slow).norm() > 1e-9 * fast.norm().max(1.0) {
        return Err(Error::UnsupportedAlgebra(format!("Killing scale mismatch: {fast} vs {slow}")));
    }
    Ok(alg)
}

impl LieAlgebra {
    pub fn family(&self) -> Family {
        self.family
    }

    /// The integer used to build the algebra (rank for sp, matrix size otherwise).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn form_choice(&self) -> FormChoice {
        self.form_choice
    }

    pub fn form_matrix(&self) -> &CMat {
        &self.form
    }

    pub fn killing_scale(&self) -> f64 {
        self.killing_scale
    }

    pub fn complex_dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Real basis of the compact form (fixed set of sigma).
    pub fn compact_basis(&self) -> &[CMat] {
        &self.compact_basis
    }

    pub fn same_as(&self, other: &LieAlgebra) -> bool {
        self.family == other.family && self.size == other.size && self.form == other.form
    }

    /// Max-entry residual of the defining relation.
    pub fn defining_residual(&self, z: &CMat) -> f64 {
        match self.family {
            Family::SL => linalg::trace(z).norm(),
            Family::SO | Family::SP => max_abs(&(z * &self.form + &self.form * z.transpose())),
        }
    }

    pub fn contains(&self, z: &CMat, tol: f64) -> bool {
        z.nrows() == self.size && z.ncols() == self.size && self.defining_residual(z) <= tol
    }

    pub fn zero(&self) -> CMat {
        zeros(self.size)
    }

    pub fn bracket(&self, a: &CMat, b: &CMat) -> CMat {
        comm(a, b)
    }

    /// Right-nested bracket [x1, [x2, ... [x_{k-1}, x_k]]].
    pub fn multi_bracket(&self, xs: &[&CMat]) -> CMat {
        multi_bracket(xs)
    }

    /// ⟨A,B⟩ = −κ tr(AB), the negative of the Killing form.
    pub fn inner(&self, a: &CMat, b: &CMat) -> C64 {
        -trace_prod(a, b) * self.killing_scale
    }

    /// Compact real structure: −Z̄ᵗ for sl and sp, B Z̄ B for so.
    pub fn sigma(&self, z: &CMat) -> CMat {
        match self.family {
            Family::SL | Family::SP => -z.adjoint(),
            Family::SO => &self.form * conj(z) * &self.form,
        }
    }

    fn coordinate_map(&self) -> &CMat {
        self.coords.get_or_init(|| {
            let m = linalg::as_columns(&self.basis);
            m.pseudo_inverse(1e-12).expect("basis pseudo-inverse")
        })
    }

    /// Coordinates of z in the stored complex basis (least squares).
    pub fn coordinates(&self, z: &CMat) -> DVector<C64> {
        let v = DVector::from_iterator(z.len(), z.iter().copied());
        self.coordinate_map() * v
    }

    /// Matrix of ad_A in the stored basis.
    pub fn ad_matrix(&self, a: &CMat) -> CMat {
        let d = self.basis.len();
        let brs: Vec<CMat> = self.basis.iter().map(|e| comm(a, e)).collect();
        let cols = self.coordinate_map() * linalg::as_columns(&brs);
        debug_assert_eq!(cols.ncols(), d);
        cols
    }

    /// −tr(ad_A ∘ ad_B), an independent evaluation of ⟨A,B⟩.
    pub fn ad_trace_inner(&self, a: &CMat, b: &CMat) -> C64 {
        -trace_prod(&self.ad_matrix(a), &self.ad_matrix(b))
    }

    /// exp(tA) X exp(−tA).
    pub fn adjoint_flow(&self, a: &CMat, t: f64, x: &CMat) -> CMat {
        let g = expm(&(a * r(t)));
        let gi = expm(&(a * r(-t)));
        g * x * gi
    }

    /// Regular diagonal element, available when the Cartan subalgebra is diagonal.
    pub fn cartan_regular(&self) -> Option<CMat> {
        let n = self.size;
        let diag: Vec<f64> = match (self.family, self.form_choice) {
            (Family::SL, _) => (0..n).map(|i| (n as f64 - 1.0) - 2.0 * i as f64).collect(),
            (Family::SO, FormChoice::AntiDiagonal) => {
                // h_{n-1-i} = -h_i
                let m = n / 2;
                (0..n)
                    .map(|i| {
                        if i < m {
                            (m - i) as f64
                        } else if i >= n - m {
                            -((m + 1 + i - n) as f64)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            (Family::SP, _) => {
                let m = n / 2;
                (0..n).map(|i| if i < m { (m - i) as f64 } else { -((2 * m - i) as f64) }).collect()
            }
            _ => return None,
        };
        let h = CMat::from_fn(n, n, |i, j| if i == j { r(diag[i]) } else { r(0.0) });
        debug_assert!(self.defining_residual(&h) < 1e-12);
        Some(h)
    }

    /// Highest-root vector E normalized so that {[E,−σE], E, −σE} is a standard triple.
    pub fn highest_root_vector(&self) -> Option<CMat> {
        let h0 = self.cartan_regular()?;
        let weight = |z: &CMat| -> Option<f64> {
            let (mut bi, mut bj, mut best) = (0, 0, 0.0);
            for i in 0..self.size {
                for j in 0..self.size {
                    if z[(i, j)].norm() > best {
                        best = z[(i, j)].norm();
                        bi = i;
                        bj = j;
                    }
                }
            }
            let lam = h0[(bi, bi)].re - h0[(bj, bj)].re;
            let res = max_abs(&(comm(&h0, z) - z * r(lam)));
            (res < 1e-12).then_some(lam)
        };
        let mut top: Option<(f64, &CMat)> = None;
        for z in &self.basis {
            let w = weight(z)?;
            if top.is_none_or(|(tw, _)| w > tw) {
                top = Some((w, z));
            }
        }
        let (_, e) = top?;
        // annihilated by every raising basis element
        for z in &self.basis {
            if weight(z)? > 0.0 && max_abs(&comm(z, e)) > 1e-12 {
                return None;
            }
        }
        let y = -self.sigma(e);
        let hh = comm(e, &y);
        let he = comm(&hh, e);
        let mu = (he.dot(&conj(e)) / e.dot(&conj(e))).re;
        if mu <= 0.0 {
            return None;
        }
        Some(e * r((2.0 / mu).sqrt()))
    }

    /// ⟨E,σE⟩/4 for the normalized highest-root vector.
    pub fn k_squared_oracle(&self) -> Option<f64> {
        let e = self.highest_root_vector()?;
        Some(self.inner(&e, &self.sigma(&e)).re / 4.0)
    }
}

pub fn multi_bracket(xs: &[&CMat]) -> CMat {
    assert!(xs.len() >= 2, "multi_bracket needs at least two elements");
    let mut acc = xs[xs.len() - 1].clone();
    for x in xs[..xs.len() - 1].iter().rev() {
        acc = comm(x, &acc);
    }
    acc
}

/// A matrix tied to the algebra it lives in.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    owner: Arc<LieAlgebra>,
    matrix: CMat,
}

impl AlgebraElement {
    pub fn new(owner: &Arc<LieAlgebra>, matrix: CMat) -> Result<Self> {
        let res = if matrix.nrows() == owner.size && matrix.ncols() == owner.size {
            owner.defining_residual(&matrix)
        } else {
            f64::INFINITY
        };
        if res > 1e-12 * (1.0 + max_abs(&matrix)) {
            return Err(Error::NotInAlgebra(res));
        }
        Ok(AlgebraElement { owner: owner.clone(), matrix })
    }

    pub fn owner(&self) -> &Arc<LieAlgebra> {
        &self.owner
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    fn check(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.owner, &other.owner) || self.owner.same_as(&other.owner) {
            Ok(())
        } else {
            Err(Error::MixedOwners)
        }
    }

    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        Ok(AlgebraElement { owner: self.owner.clone(), matrix: comm(&self.matrix, &other.matrix) })
    }

    pub fn multi_bracket(xs: &[&AlgebraElement]) -> Result<AlgebraElement> {
        if xs.len() < 2 {
            return Err(Error::InvalidArgument("multi_bracket needs at least two elements".into()));
        }
        for x in &xs[1..] {
            xs[0].check(x)?;
        }
        let ms: Vec<&CMat> = xs.iter().map(|x| &x.matrix).collect();
        Ok(AlgebraElement { owner: xs[0].owner.clone(), matrix: multi_bracket(&ms) })
    }

    pub fn killing_inner(&self, other: &AlgebraElement) -> Result<C64> {
        self.check(other)?;
        Ok(self.owner.inner(&self.matrix, &other.matrix))
    }

    pub fn sigma(&self) -> AlgebraElement {
        AlgebraElement { owner: self.owner.clone(), matrix: self.owner.sigma(&self.matrix) }
    }

    pub fn adjoint_flow(&self, t: f64, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        Ok(AlgebraElement { owner: self.owner.clone(), matrix: self.owner.adjoint_flow(&self.matrix, t, &x.matrix) })
    }
}

/// {H, X, Y} with [H,X]=2X, [H,Y]=−2Y, [X,Y]=H.
#[derive(Debug, Clone)]
pub struct StandardTriple {
    pub h: CMat,
    pub x: CMat,
    pub y: CMat,
}

impl StandardTriple {
    /// Builds the triple with Y = −σX and H = [X,Y].
    pub fn from_nilpositive(alg: &LieAlgebra, x: CMat) -> Self {
        let y = -alg.sigma(&x);
        let h = comm(&x, &y);
        StandardTriple { h, x, y }
    }

    /// Max-entry residuals of the three bracket relations.
    pub fn residuals(&self) -> [f64; 3] {
        [
            max_abs(&(comm(&self.h, &self.x) - &self.x * r(2.0))),
            max_abs(&(comm(&self.h, &self.y) + &self.y * r(2.0))),
            max_abs(&(comm(&self.x, &self.y) - &self.h)),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_element(alg: &LieAlgebra, rng: &mut ChaCha8Rng) -> CMat {
        let mut z = alg.zero();
        for b in alg.basis() {
            let w = random_complex(rng, 1, 1)[(0, 0)];
            z += b * w;
        }
        z
    }

    fn all_algebras() -> Vec<LieAlgebra> {
        vec![
            build_algebra(Family::SL, 2, FormChoice::Standard).unwrap(),
            build_algebra(Family::SL, 5, FormChoice::Standard).unwrap(),
            build_algebra(Family::SO, 5, FormChoice::AntiDiagonal).unwrap(),
            build_algebra(Family::SO, 6, FormChoice::Standard).unwrap(),
            build_algebra(Family::SO, 7, FormChoice::So7Block).unwrap(),
            build_algebra(Family::SO, 12, FormChoice::B12Block).unwrap(),
            build_algebra(Family::SP, 3, FormChoice::Standard).unwrap(),
        ]
    }

    #[test]
    fn dimensions() {
        let sl6 = build_algebra(Family::SL, 6, FormChoice::Standard).unwrap();
        assert_eq!(sl6.complex_dimension(), 35);
        let so7 = build_algebra(Family::SO, 7, FormChoice::So7Block).unwrap();
        assert_eq!(so7.complex_dimension(), 21);
        let sp3 = build_algebra(Family::SP, 3, FormChoice::Standard).unwrap();
        assert_eq!(sp3.complex_dimension(), 21);
        assert_eq!(sp3.matrix_size(), 6);
        for alg in all_algebras() {
            assert_eq!(alg.compact_basis().len(), alg.complex_dimension());
            for b in alg.basis() {
                assert!(alg.defining_residual(b) < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_algebra(Family::SL, 1, FormChoice::Standard).is_err());
        assert!(build_algebra(Family::SO, 8, FormChoice::B12Block).is_err());
        assert!(build_algebra(Family::SO, 5, FormChoice::So7Block).is_err());
    }

    #[test]
    fn sl2_bracket_and_inner() {
        let alg = build_algebra(Family::SL, 2, FormChoice::Standard).unwrap();
        let h = alg.bracket(&unit(2, 0, 1), &unit(2, 1, 0));
        assert_eq!(h, unit(2, 0, 0) - unit(2, 1, 1));
        // K(H,H) = 8
        assert!((alg.inner(&h, &h) - r(-8.0)).norm() < 1e-14);
        assert!((alg.ad_trace_inner(&h, &h) - r(-8.0)).norm() < 1e-12);
        assert!((alg.inner(&h, &alg.sigma(&h)) - r(8.0)).norm() < 1e-14);
        assert_eq!(alg.sigma(&unit(2, 0, 1)), -unit(2, 1, 0));
    }

    #[test]
    fn killing_scales_match_ad_trace() {
        // κ_tr = 2n, n−2, 2m+2 checked against tr(ad ad) on one pair each
        for (alg, kappa) in [
            (build_algebra(Family::SL, 4, FormChoice::Standard).unwrap(), 8.0),
            (build_algebra(Family::SO, 7, FormChoice::Standard).unwrap(), 5.0),
            (build_algebra(Family::SP, 3, FormChoice::Standard).unwrap(), 8.0),
        ] {
            assert_eq!(alg.killing_scale(), kappa);
            let a = &alg.basis()[1];
            let b = alg.sigma(a);
            let oracle = -alg.ad_trace_inner(a, &b) / trace_prod(a, &b);
            assert!((oracle.re - kappa).abs() < 1e-9 * kappa && oracle.im.abs() < 1e-9);
        }
    }

    #[test]
    fn sigma_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alg in all_algebras() {
            let z = random_element(&alg, &mut rng);
            let s = alg.sigma(&z);
            assert!(alg.defining_residual(&s) < 1e-12);
            assert!(max_abs(&(alg.sigma(&s) - &z)) < 1e-13);
            // B Z̄ B = −Z̄ᵗ on the algebra
            assert!(max_abs(&(&s + z.adjoint())) < 1e-12);
            let lam = c(0.3, -1.7);
            assert!(max_abs(&(alg.sigma(&(&z * lam)) - &s * lam.conj())) < 1e-12);
            let p = alg.inner(&z, &s);
            assert!(p.re > 0.0 && p.im.abs() < 1e-12 * p.re);
        }
    }

    #[test]
    fn jacobi_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alg in all_algebras() {
            let a = random_element(&alg, &mut rng);
            let b = random_element(&alg, &mut rng);
            let cc = random_element(&alg, &mut rng);
            let jac = comm(&a, &comm(&b, &cc)) + comm(&b, &comm(&cc, &a)) + comm(&cc, &comm(&a, &b));
            assert!(max_abs(&jac) < 1e-10);
            let inv = alg.inner(&comm(&a, &b), &cc) + alg.inner(&b, &comm(&a, &cc));
            assert!(inv.norm() < 1e-9);
        }
    }

    #[test]
    fn multi_bracket_is_right_nested() {
        let alg = build_algebra(Family::SL, 3, FormChoice::Standard).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_element(&alg, &mut rng);
        let b = random_element(&alg, &mut rng);
        let d = random_element(&alg, &mut rng);
        let mb = alg.multi_bracket(&[&a, &b, &d]);
        assert!(max_abs(&(mb - comm(&a, &comm(&b, &d)))) < 1e-13);
        assert!(max_abs(&alg.multi_bracket(&[&a, &a])) == 0.0);
    }

    #[test]
    fn adjoint_flow_examples() {
        let alg = build_algebra(Family::SL, 2, FormChoice::Standard).unwrap();
        let x = unit(2, 0, 1);
        let t = StandardTriple::from_nilpositive(&alg, x.clone());
        assert_eq!(alg.adjoint_flow(&t.h, 0.0, &x), x);
        let f = alg.adjoint_flow(&t.h, 0.4, &x);
        assert!(max_abs(&(f - &x * r((0.8f64).exp()))) < 1e-13);
        // derivative at 0 is the bracket
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let big = build_algebra(Family::SO, 7, FormChoice::So7Block).unwrap();
        let a = random_element(&big, &mut rng);
        let y = random_element(&big, &mut rng);
        let h = 1e-5;
        let fd = (big.adjoint_flow(&a, h, &y) - big.adjoint_flow(&a, -h, &y)) * r(0.5 / h);
        assert!(max_abs(&(fd - comm(&a, &y))) < 1e-8 * (1.0 + max_abs(&comm(&a, &y))));
        // compact generator preserves the inner product
        let k = &big.compact_basis()[3] + &big.compact_basis()[10];
        let before = big.inner(&y, &big.sigma(&y));
        for t in [0.25, 0.5, 1.0] {
            let yt = big.adjoint_flow(&k, t, &y);
            let after = big.inner(&yt, &big.sigma(&yt));
            assert!((after - before).norm() < 1e-10 * before.norm());
        }
    }

    #[test]
    fn k_squared_oracle_values() {
        let sl6 = build_algebra(Family::SL, 6, FormChoice::Standard).unwrap();
        assert!((sl6.k_squared_oracle().unwrap() - 3.0).abs() < 1e-9);
        let so12 = build_algebra(Family::SO, 12, FormChoice::AntiDiagonal).unwrap();
        assert!((so12.k_squared_oracle().unwrap() - 5.0).abs() < 1e-9);
        let sp3 = build_algebra(Family::SP, 3, FormChoice::Standard).unwrap();
        assert!((sp3.k_squared_oracle().unwrap() - 2.0).abs() < 1e-9);
        let so7 = build_algebra(Family::SO, 7, FormChoice::So7Block).unwrap();
        assert!(so7.k_squared_oracle().is_none());
    }

    #[test]
    fn element_wrapper_checks_owner() {
        let a = Arc::new(build_algebra(Family::SL, 3, FormChoice::Standard).unwrap());
        let b = Arc::new(build_algebra(Family::SL, 4, FormChoice::Standard).unwrap());
        let x = AlgebraElement::new(&a, unit(3, 0, 1)).unwrap();
        let y = AlgebraElement::new(&b, unit(4, 0, 1)).unwrap();
        assert_eq!(x.bracket(&y).unwrap_err(), Error::MixedOwners);
        assert!(AlgebraElement::new(&a, unit(3, 0, 0)).is_err());
        let z = AlgebraElement::new(&a, unit(3, 1, 0)).unwrap();
        let h = x.bracket(&z).unwrap();
        assert_eq!(h.matrix(), &(unit(3, 0, 0) - unit(3, 1, 1)));
        assert!(x.killing_inner(&z).unwrap().re < 0.0);
    }
}
