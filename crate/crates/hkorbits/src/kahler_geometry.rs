//! The Kähler form ω_I and the endomorphism J of a G-invariant potential
//! ρ(η₁,η₂,η₃), the KKS form Σ, finite-difference oracles and the
//! hyperKähler checks built from them.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::fd;
use crate::invariants::{eta, zmap};
use crate::lie_core::LieAlgebra;
use crate::linalg::{c, frob, randn, r, CMat, SpanBuilder, C64, I};
use crate::orbit_reps::OrbitPoint;
use crate::potentials::{PotentialKind, PotentialSpec};

/// ξ_A at X: the generator A and the value ⟦AX⟧.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub generator: CMat,
    pub value: CMat,
}

impl TangentVector {
    pub fn new(alg: &LieAlgebra, generator: CMat, x: &CMat) -> TangentVector {
        let value = alg.bracket(&generator, x);
        TangentVector { generator, value }
    }

    /// Iξ_A = ξ_{iA}.
    pub fn times_i(&self) -> TangentVector {
        TangentVector { generator: &self.generator * I, value: &self.value * I }
    }

    fn combine(&self, a: f64, other: &TangentVector, b: f64) -> TangentVector {
        TangentVector {
            generator: &self.generator * r(a) + &other.generator * r(b),
            value: &self.value * r(a) + &other.value * r(b),
        }
    }
}

/// Maximal independent subset of {⟦EX⟧ : E in the algebra basis}.
pub fn tangent_basis(alg: &LieAlgebra, x: &CMat, rel: f64) -> Result<Vec<TangentVector>> {
    let mut span = SpanBuilder::complex(rel);
    let mut out = Vec::new();
    for e in alg.basis() {
        let v = TangentVector::new(alg, e.clone(), x);
        if span.push(&v.value) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::ZeroElement);
    }
    Ok(out)
}

/// The complex basis together with its I-images, orthonormalized for Re⟨U,σV⟩.
pub fn real_tangent_basis(alg: &LieAlgebra, basis: &[TangentVector]) -> Vec<TangentVector> {
    let ip = |u: &CMat, v: &CMat| alg.inner(u, &alg.sigma(v)).re;
    let mut out: Vec<TangentVector> = Vec::new();
    for v in basis.iter().flat_map(|v| [v.clone(), v.times_i()]) {
        let mut w = v;
        for _ in 0..2 {
            for q in &out {
                let k = ip(&w.value, &q.value);
                w = w.combine(1.0, q, -k);
            }
        }
        let nrm = ip(&w.value, &w.value).sqrt();
        if nrm > 1e-10 {
            out.push(w.combine(1.0 / nrm, &w.clone(), 0.0));
        }
    }
    out
}

/// ρ together with its first and second η-partials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialDerivatives {
    pub rho: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
}

impl PotentialDerivatives {
    /// ρ = η₁.
    pub fn eta1() -> PotentialDerivatives {
        PotentialDerivatives { rho: 0.0, grad: [1.0, 0.0, 0.0], hess: [[0.0; 3]; 3] }
    }

    pub fn is_zero(&self) -> bool {
        self.grad.iter().chain(self.hess.iter().flatten()).all(|v| *v == 0.0)
    }
}

fn mat3(a: [[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| a[i][j])
}

/// η-partials of a potential given as a function of the slice parameters,
/// from FD partials in (r,s,t) and the chain rule ρ_u = Σ ρ_i ∂η_i/∂u
/// (differentiated once more for the Hessian).
pub fn slice_derivatives(
    pot: &PotentialSpec,
    f: &dyn Fn([f64; 3]) -> f64,
    p: [f64; 3],
    tol: &Tolerances,
) -> Result<PotentialDerivatives> {
    if pot.kind == PotentialKind::Sl2Factor {
        let s = p[1];
        let g = |u: f64| f([p[0], u, p[2]]);
        let ds = fd::derivative(&g, s, tol.h1 * s, tol.richardson);
        let h = tol.h2 * s;
        let second = |h: f64| (g(s + h) - 2.0 * g(s) + g(s - h)) / (h * h);
        let dss = if tol.richardson { (4.0 * second(h / 2.0) - second(h)) / 3.0 } else { second(h) };
        let a = 8.0 * pot.k_squared;
        let r1 = ds / (a * s);
        let r11 = (dss - r1 * a) / (a * s).powi(2);
        let mut hess = [[0.0; 3]; 3];
        hess[0][0] = r11;
        return Ok(PotentialDerivatives { rho: f(p), grad: [r1, 0.0, 0.0], hess });
    }
    if pot.kind == PotentialKind::Generic {
        let gap = (p[0] - p[1]).abs().min((p[1] - p[2]).abs()).min((p[0] - p[2]).abs());
        if gap < 1e-3 {
            return Err(Error::SingularConfiguration(format!("parameters {p:?} are not pairwise distinct")));
        }
    }
    let jac = mat3(pot.eta_jacobian(p));
    let sv = jac.singular_values();
    let cond = sv.max() / sv.min();
    if !(cond <= tol.max_condition) {
        return Err(Error::SingularConfiguration(format!("eta Jacobian condition {cond:e} at {p:?}")));
    }
    let g = fd::gradient3(f, p, tol.h1, tol.richardson);
    let h = fd::hessian3(f, p, tol.h2, tol.richardson);
    let jinv = jac.try_inverse().ok_or_else(|| Error::SingularConfiguration("eta Jacobian".into()))?;
    let ge = jinv.transpose() * nalgebra::Vector3::new(g[0], g[1], g[2]);
    let eh = pot.eta_hessians(p);
    let mut m = mat3(h);
    for i in 0..3 {
        m -= mat3(eh[i]) * ge[i];
    }
    let hh = jinv.transpose() * m * jinv;
    let hh = (hh + hh.transpose()) * 0.5;
    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            hess[i][j] = hh[(i, j)];
        }
    }
    Ok(PotentialDerivatives { rho: f(p), grad: [ge[0], ge[1], ge[2]], hess })
}

/// Derivatives of `pot` at a slice point.
pub fn potential_derivatives(pot: &PotentialSpec, point: &OrbitPoint, tol: &Tolerances) -> Result<PotentialDerivatives> {
    pot.validate()?;
    let actual = eta(&point.spec.algebra, &point.element)?;
    let model = pot.eta_params(point.params);
    for i in 0..3 {
        if (actual[i] - model[i]).abs() > 1e-8 * actual[i].abs() {
            return Err(Error::InvalidArgument(format!(
                "potential does not fit {}: eta_{} is {} at the point but {} in the potential's slice model",
                point.spec.describe(),
                i + 1,
                actual[i],
                model[i]
            )));
        }
    }
    let f = |q: [f64; 3]| pot.rho_params(q).unwrap_or(f64::NAN);
    slice_derivatives(pot, &f, point.params, tol)
}

/// Derivatives at an arbitrary orbit point, through its η-invariants.
pub fn derivatives_at(
    pot: &PotentialSpec,
    alg: &LieAlgebra,
    y: &CMat,
    guess: [f64; 3],
    tol: &Tolerances,
) -> Result<PotentialDerivatives> {
    let p = pot.params_from_eta(eta(alg, y)?, guess)?;
    let f = |q: [f64; 3]| pot.rho_params(q).unwrap_or(f64::NAN);
    slice_derivatives(pot, &f, p, tol)
}

/// Everything ω_I and J need at one point X.
pub struct KahlerData<'a> {
    alg: &'a LieAlgebra,
    x: CMat,
    xp: CMat,
    z: CMat,
    zxp: CMat,
    xxpx: CMat,
    xpxxp: CMat,
    xxp: CMat,
    xxpxxp: CMat,
    xz: CMat,
    d: PotentialDerivatives,
}

impl<'a> KahlerData<'a> {
    pub fn new(alg: &'a LieAlgebra, x: &CMat, d: PotentialDerivatives) -> KahlerData<'a> {
        let x = x.clone();
        let xp = alg.sigma(&x);
        let z = zmap(alg, &x);
        let zxp = zmap(alg, &xp);
        let mb = |xs: &[&CMat]| alg.multi_bracket(xs);
        KahlerData {
            xxpx: mb(&[&x, &xp, &x]),
            xpxxp: mb(&[&xp, &x, &xp]),
            xxp: mb(&[&x, &xp]),
            xxpxxp: mb(&[&x, &xp, &x, &xp]),
            xz: mb(&[&x, &z]),
            alg,
            x,
            xp,
            z,
            zxp,
            d,
        }
    }

    pub fn point(&self) -> &CMat {
        &self.x
    }

    pub fn derivatives(&self) -> &PotentialDerivatives {
        &self.d
    }

    fn h(&self) -> [f64; 6] {
        let h = self.d.hess;
        [h[0][0], h[0][1], h[0][2], h[1][1], h[1][2], h[2][2]]
    }

    /// ω_I(xa, xb) for tangent values xa, xb.
    pub fn omega_i(&self, xa: &CMat, xb: &CMat) -> f64 {
        let alg = self.alg;
        let (x, xp) = (&self.x, &self.xp);
        let [r1, r2, r3] = self.d.grad;
        let [r11, r12, r13, r22, r23, r33] = self.h();
        let y = alg.sigma(xb);
        let mb = |xs: &[&CMat]| alg.multi_bracket(xs);
        let ip = |a: &CMat, b: &CMat| alg.inner(a, b);
        let lin = &y * r(2.0 * r1) - (mb(&[xp, x, &y]) * r(2.0) - mb(&[x, xp, &y])) * r(4.0 * r2)
            - (mb(&[x, x, xp, xp, &y]) * r(-2.0)
                + mb(&[x, xp, x, xp, &y]) * r(3.0)
                + mb(&[x, xp, xp, x, &y]) * r(3.0)
                + mb(&[xp, x, x, xp, &y]) * r(3.0)
                - mb(&[xp, x, xp, x, &y]) * r(12.0)
                + mb(&[xp, xp, x, x, &y]) * r(3.0))
                * r(2.0 * r3);
        let a_xp = ip(xa, xp);
        let a_q = ip(xa, &self.xpxxp);
        let a_z = ip(xa, &self.z);
        let b_x = ip(&y, x);
        let b_q = ip(&y, &self.xxpx);
        let b_z = ip(&y, &self.zxp);
        let quad = a_xp * b_x * r11 * 2.0 - (a_xp * b_q + a_q * b_x) * r12 * 4.0
            + (a_xp * b_z + a_z * b_x) * r13 * 2.0
            + a_q * b_q * r22 * 8.0
            - (a_q * b_z + a_z * b_q) * r23 * 4.0
            + a_z * b_z * r33 * 2.0;
        ip(xa, &lin).im + quad.im
    }

    /// J applied to the tangent value xa.
    pub fn j_endo(&self, xa: &CMat) -> CMat {
        let alg = self.alg;
        let (x, xp) = (&self.x, &self.xp);
        let [r1, r2, r3] = self.d.grad;
        let [r11, r12, r13, r22, r23, r33] = self.h();
        let y = alg.sigma(xa);
        let mb = |xs: &[&CMat]| alg.multi_bracket(xs);
        let ip = |a: &CMat, b: &CMat| alg.inner(a, b);
        let mut v = mb(&[x, &y]) * r(-2.0 * r1) + (mb(&[x, xp, x, &y]) * r(2.0) - mb(&[x, x, xp, &y])) * r(4.0 * r2)
            + (mb(&[x, x, x, xp, xp, &y]) * r(-2.0)
                + mb(&[x, x, xp, x, xp, &y]) * r(3.0)
                + mb(&[x, x, xp, xp, x, &y]) * r(3.0)
                + mb(&[x, xp, xp, x, x, &y]) * r(3.0)
                - mb(&[x, xp, x, xp, x, &y]) * r(12.0)
                + mb(&[x, xp, x, x, xp, &y]) * r(3.0))
                * r(2.0 * r3);
        let y_x = ip(&y, x);
        let y_q = ip(&y, &self.xxpx);
        let y_z = ip(&y, &self.zxp);
        let k1 = y_x * (-2.0 * r11) + y_q * (4.0 * r12) - y_z * (2.0 * r13);
        let k2 = y_x * (4.0 * r12) - y_q * (8.0 * r22) + y_z * (4.0 * r23);
        let k3 = y_x * (-2.0 * r13) + y_q * (4.0 * r23) - y_z * (2.0 * r33);
        v += &self.xxp * k1 + &self.xxpxxp * k2 + &self.xz * k3;
        v
    }

    /// g(U,V) = ω_I(IU, V).
    pub fn metric(&self, u: &CMat, v: &CMat) -> f64 {
        self.omega_i(&(u * I), v)
    }
}

pub fn omega_i(alg: &LieAlgebra, x: &CMat, d: PotentialDerivatives, xa: &CMat, xb: &CMat) -> f64 {
    KahlerData::new(alg, x, d).omega_i(xa, xb)
}

pub fn j_endo(alg: &LieAlgebra, x: &CMat, d: PotentialDerivatives, xa: &CMat) -> CMat {
    KahlerData::new(alg, x, d).j_endo(xa)
}

/// Σ(ξ_A, ξ_B) at X = ⟨⟦AB⟧, X⟩.
pub fn kks_sigma(alg: &LieAlgebra, x: &CMat, a: &CMat, b: &CMat) -> C64 {
    alg.inner(&alg.bracket(a, b), x)
}

/// Random element of the algebra with Frobenius norm 1.
pub fn random_element(alg: &LieAlgebra, rng: &mut ChaCha8Rng) -> CMat {
    let mut m = alg.zero();
    for b in alg.basis() {
        m += b * c(randn(rng), randn(rng));
    }
    let n = frob(&m);
    m / r(n)
}

/// Finite-difference values of ω_I = −½dIdρ from ρ alone.
pub struct OmegaOracle<'a> {
    pub pot: &'a PotentialSpec,
    pub alg: &'a LieAlgebra,
    pub h: f64,
}

impl<'a> OmegaOracle<'a> {
    fn rho(&self, y: &CMat) -> f64 {
        self.pot.rho_at(self.alg, y).unwrap_or(f64::NAN)
    }

    /// Idρ(ξ_C) at Y = −d/dε ρ(Ad(exp εiC)Y).
    fn idrho(&self, y: &CMat, cgen: &CMat) -> f64 {
        let ic = cgen * I;
        let f = |e: f64| self.rho(&self.alg.adjoint_flow(&ic, e, y));
        -fd::derivative(&f, 0.0, self.h, true)
    }

    /// −½ dθ(ξ_A, ξ_B) with θ = Idρ. Fundamental fields satisfy
    /// [ξ_A, ξ_B] = −ξ_{⟦AB⟧}, hence the plus sign on the last term.
    pub fn omega(&self, x: &CMat, a: &CMat, b: &CMat) -> f64 {
        let alg = self.alg;
        let t1 = fd::derivative(&|e: f64| self.idrho(&alg.adjoint_flow(a, e, x), b), 0.0, self.h, true);
        let t2 = fd::derivative(&|e: f64| self.idrho(&alg.adjoint_flow(b, e, x), a), 0.0, self.h, true);
        let t3 = self.idrho(x, &alg.bracket(a, b));
        -0.5 * (t1 - t2 + t3)
    }
}

/// Max relative gap between the closed-form ω_I and the FD oracle on random generator pairs.
pub fn omega_fd_check(
    pot: &PotentialSpec,
    point: &OrbitPoint,
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<f64> {
    let alg = &point.spec.algebra;
    let d = potential_derivatives(pot, point, tol)?;
    let kd = KahlerData::new(alg, &point.element, d);
    let oracle = OmegaOracle { pot, alg, h: tol.h1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let a = random_element(alg, &mut rng);
        let b = random_element(alg, &mut rng);
        let exact = kd.omega_i(&alg.bracket(&a, &point.element), &alg.bracket(&b, &point.element));
        let approx = oracle.omega(&point.element, &a, &b);
        worst = worst.max((exact - approx).abs() / exact.abs().max(1e-12));
    }
    Ok(worst)
}

/// Residuals of the hyperKähler conditions at one point.
#[derive(Debug, Clone, Serialize)]
pub struct HkReport {
    /// max ‖J²v + v‖ / ‖v‖ over the orthonormal real tangent basis.
    pub j_squared: f64,
    /// Per complex basis direction: (generator index in the algebra basis, residual on v and iv).
    pub j_squared_per_direction: Vec<(usize, f64)>,
    pub min_metric_eigenvalue: f64,
    /// max |Σ − (ω_J + iω_K)| / max |Σ| on the real tangent basis.
    pub sigma_compatibility: f64,
    /// max relative closedness defect of ω_I on random triples.
    pub closedness: f64,
    /// max ‖J(Iv) + I(Jv)‖ / ‖v‖.
    pub anticommutation: f64,
    pub real_dimension: usize,
}

impl HkReport {
    pub fn residuals(&self) -> Vec<(String, f64)> {
        vec![
            ("j_squared_plus_one".into(), self.j_squared),
            ("metric_not_positive".into(), if self.min_metric_eigenvalue > 0.0 { 0.0 } else { 1.0 }),
            ("sigma_minus_omegaJ_i_omegaK".into(), self.sigma_compatibility),
            ("d_omega_I".into(), self.closedness),
            ("JI_plus_IJ".into(), self.anticommutation),
        ]
    }
}

fn rel_res(v: &CMat, w: &CMat) -> f64 {
    frob(v) / frob(w).max(1e-300)
}

/// Checks (a) J² = −1, (b) positivity of g, (c) Σ = ω_J + iω_K, (d) dω_I = 0 on `triples` random triples.
pub fn verify_hyperkahler(
    pot: &PotentialSpec,
    point: &OrbitPoint,
    tol: &Tolerances,
    triples: usize,
    seed: u64,
) -> Result<HkReport> {
    let alg = &point.spec.algebra;
    let x = &point.element;
    let d = potential_derivatives(pot, point, tol)?;
    let kd = KahlerData::new(alg, x, d);
    let basis = tangent_basis(alg, x, tol.rank_rel)?;

    let mut per_dir = Vec::new();
    for v in &basis {
        let idx = alg.basis().iter().position(|e| e == &v.generator).unwrap_or(usize::MAX);
        let mut worst: f64 = 0.0;
        for w in [v.value.clone(), &v.value * I] {
            worst = worst.max(rel_res(&(kd.j_endo(&kd.j_endo(&w)) + &w), &w));
        }
        per_dir.push((idx, worst));
    }

    let real = real_tangent_basis(alg, &basis);
    let mut j_sq: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let jv: Vec<CMat> = real.iter().map(|v| kd.j_endo(&v.value)).collect();
    for (v, j) in real.iter().zip(&jv) {
        j_sq = j_sq.max(rel_res(&(kd.j_endo(j) + &v.value), &v.value));
        anti = anti.max(rel_res(&(kd.j_endo(&(&v.value * I)) + j * I), &v.value));
    }

    let m = real.len();
    let g = DMatrix::from_fn(m, m, |a, b| kd.metric(&real[a].value, &real[b].value));
    let g = (&g + g.transpose()) * 0.5;
    let min_eig = SymmetricEigen::new(g).eigenvalues.min();

    let mut sig_max: f64 = 0.0;
    let mut sig_err: f64 = 0.0;
    for (a, u) in real.iter().enumerate() {
        let iu = &u.value * I;
        for (b, v) in real.iter().enumerate() {
            let sigma = kks_sigma(alg, x, &u.generator, &v.generator);
            let om_j = kd.omega_i(&iu, &jv[b]);
            let om_k = kd.omega_i(&iu, &(&jv[b] * I));
            sig_err = sig_err.max((sigma - C64::new(om_j, om_k)).norm());
            sig_max = sig_max.max(sigma.norm());
            let _ = a;
        }
    }

    let closedness = closedness_check(pot, point, &kd, triples, seed, tol)?;

    Ok(HkReport {
        j_squared: j_sq,
        j_squared_per_direction: per_dir,
        min_metric_eigenvalue: min_eig,
        sigma_compatibility: sig_err / sig_max.max(1e-300),
        closedness,
        anticommutation: anti,
        real_dimension: m,
    })
}

fn closedness_check(
    pot: &PotentialSpec,
    point: &OrbitPoint,
    base: &KahlerData,
    triples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<f64> {
    let alg = &point.spec.algebra;
    let x = &point.element;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // F_BC(Y) = ω_I at Y of (ξ_B, ξ_C)
    let field = |y: &CMat, b: &CMat, cc: &CMat| -> f64 {
        match derivatives_at(pot, alg, y, point.params, tol) {
            Ok(d) => KahlerData::new(alg, y, d).omega_i(&alg.bracket(b, y), &alg.bracket(cc, y)),
            Err(_) => f64::NAN,
        }
    };
    let at_x = |b: &CMat, cc: &CMat| base.omega_i(&alg.bracket(b, x), &alg.bracket(cc, x));
    let along = |a: &CMat, b: &CMat, cc: &CMat| {
        fd::derivative(&|e: f64| field(&alg.adjoint_flow(a, e, x), b, cc), 0.0, 10.0 * tol.h1, true)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..triples {
        let a = random_element(alg, &mut rng);
        let b = random_element(alg, &mut rng);
        let cc = random_element(alg, &mut rng);
        let terms = [
            along(&a, &b, &cc),
            -along(&b, &a, &cc),
            along(&cc, &a, &b),
            at_x(&alg.bracket(&a, &b), &cc),
            -at_x(&alg.bracket(&a, &cc), &b),
            at_x(&alg.bracket(&b, &cc), &a),
        ];
        let sum: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>().max(1e-12);
        if !sum.is_finite() {
            return Err(Error::SingularConfiguration("closedness check left the admissible region".into()));
        }
        worst = worst.max(sum.abs() / scale);
    }
    Ok(worst)
}

/// Relative distance of v from the subalgebra generated by `gens`.
pub fn generated_subalgebra_residual(alg: &LieAlgebra, gens: &[&CMat], v: &CMat) -> f64 {
    let mut span = SpanBuilder::complex(1e-10);
    let mut elems: Vec<CMat> = Vec::new();
    for g in gens {
        if span.push(g) {
            elems.push((*g).clone());
        }
    }
    let mut start = 0;
    while start < elems.len() {
        let end = elems.len();
        for i in start..end {
            for j in 0..end {
                let b = alg.bracket(&elems[i], &elems[j]);
                if span.push(&b) {
                    elems.push(b);
                }
            }
        }
        start = end;
    }
    span.residual(v)
}
