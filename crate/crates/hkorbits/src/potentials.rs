//! Closed-form potentials: the per-sl₂ factor, the generic cohomogeneity-three
//! potential (closed form, κ-chain and quartic), and the so(7) family.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::fd;
use crate::invariants::{eta, zeta};
use crate::lie_core::LieAlgebra;
use crate::linalg::{CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// Sum of three factor potentials on a generic cohomogeneity-three orbit.
    Generic,
    /// The one-parameter family on (3,2²) ⊂ so(7).
    So7,
    /// A single sl₂ factor, as a function of η₁ alone.
    Sl2Factor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub k_squared: f64,
    pub c: f64,
}

/// ρ_s = √(16k⁴ + c/s²).
pub fn factor_potential_derivative(s: f64, k2: f64, c: f64) -> f64 {
    (16.0 * k2 * k2 + c / (s * s)).sqrt()
}

fn factor_antiderivative(u: f64, k2: f64, c: f64) -> f64 {
    let sc = c.sqrt();
    let q = (16.0 * k2 * k2 * u * u + c).sqrt();
    q - sc * ((sc + q) / u).ln()
}

/// Antiderivative of `factor_potential_derivative`, equal to 4k²u at u = 1
/// (and to 4k²u everywhere when c = 0).
pub fn factor_potential(u: f64, k2: f64, c: f64) -> f64 {
    if c == 0.0 {
        return 4.0 * k2 * u;
    }
    factor_antiderivative(u, k2, c) - factor_antiderivative(1.0, k2, c) + 4.0 * k2
}

/// 4k²(r+s+t) for c = 0, otherwise the sum of three factor potentials.
pub fn generic_potential(r: f64, s: f64, t: f64, k2: f64, c: f64) -> Result<f64> {
    for v in [r, s, t] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveParameter(v));
        }
    }
    if c < 0.0 {
        return Err(Error::NegativeConstant(c));
    }
    if c == 0.0 {
        return Ok(4.0 * k2 * (r + s + t));
    }
    Ok(factor_potential(r, k2, c) + factor_potential(s, k2, c) + factor_potential(t, k2, c))
}

/// η̃_i = η_i / (2^{i+1} k²).
pub fn eta_tilde(eta: [f64; 3], k2: f64) -> [f64; 3] {
    [eta[0] / (4.0 * k2), eta[1] / (8.0 * k2), eta[2] / (16.0 * k2)]
}

fn alpha_squared(et: [f64; 3]) -> f64 {
    et[0].powi(3) - 3.0 * et[0] * et[1] + 2.0 * et[2]
}

/// (λ²−η̃₁)² − (8α/√6)λ − 2(η̃₁²−η̃₂).
pub fn quartic_residual(et: [f64; 3], alpha: f64, lambda: f64) -> f64 {
    (lambda * lambda - et[0]).powi(2) - 8.0 * alpha / 6f64.sqrt() * lambda - 2.0 * (et[0] * et[0] - et[1])
}

/// Squares of the parameters: the roots of x³ − e₁x² + e₂x − e₃, ascending.
pub fn squared_params_from_eta_tilde(et: [f64; 3]) -> Result<[f64; 3]> {
    let (p1, p2) = (et[0], et[1]);
    if !(p1 > 0.0) {
        return Err(Error::Unrealizable(format!("eta~1 = {p1}")));
    }
    let e1 = p1;
    let e2 = (p1 * p1 - p2) / 2.0;
    let e3 = alpha_squared(et) / 6.0;
    let scale = e1;
    // depressed cubic y³ + py + q with x = y + e₁/3, in units of e₁
    let (a, b, cc) = (e1 / scale, e2 / (scale * scale), e3 / scale.powi(3));
    let p = b - a * a / 3.0;
    let q = -2.0 * a.powi(3) / 27.0 + a * b / 3.0 - cc;
    let mut roots = if p.abs() < 1e-14 {
        [a / 3.0; 3]
    } else {
        if p > 0.0 {
            return Err(Error::Unrealizable("complex parameter roots".into()));
        }
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = 3.0 * q / (p * m);
        if arg.abs() > 1.0 + 1e-9 {
            return Err(Error::Unrealizable("complex parameter roots".into()));
        }
        let th = arg.clamp(-1.0, 1.0).acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [m * th.cos() + a / 3.0, m * (th - tau).cos() + a / 3.0, m * (th - 2.0 * tau).cos() + a / 3.0]
    };
    for x in roots.iter_mut() {
        if *x < -1e-9 {
            return Err(Error::Unrealizable("negative squared parameter".into()));
        }
        *x = x.max(0.0) * scale;
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(roots)
}

/// Positive root λ = r+s+t of the quartic, by safeguarded Newton from √(3η̃₁).
pub fn quartic_solve(et: [f64; 3]) -> Result<f64> {
    let a2 = alpha_squared(et);
    if a2 < -1e-9 * et[0].abs().powi(3).max(1e-300) || !(et[0] > 0.0) {
        return Err(Error::Unrealizable(format!("alpha^2 = {a2}")));
    }
    let alpha = a2.max(0.0).sqrt();
    let f = |l: f64| quartic_residual(et, alpha, l);
    let df = |l: f64| 4.0 * l * (l * l - et[0]) - 8.0 * alpha / 6f64.sqrt();
    let (mut lo, mut hi) = (et[0].sqrt(), (3.0 * et[0]).sqrt());
    if f(lo) > 0.0 || f(hi) < -1e-12 * (1.0 + hi.powi(4)) {
        return Err(Error::Unrealizable("quartic has no root in [sqrt(e1), sqrt(3 e1)]".into()));
    }
    let mut l = hi;
    for _ in 0..200 {
        let fl = f(l);
        if fl > 0.0 {
            hi = l;
        } else {
            lo = l;
        }
        let d = df(l);
        let mut next = l - fl / d;
        if !(next > lo && next < hi) || d <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - l).abs() <= 1e-15 * l {
            l = next;
            break;
        }
        l = next;
    }
    let res = f(l).abs();
    if res > 1e-10 * (1.0 + l.powi(4)) {
        return Err(Error::Unrealizable(format!("quartic residual {res:e}")));
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaChain {
    pub eta_tilde: [f64; 3],
    pub alpha: f64,
    pub beta: f64,
    pub psi: f64,
    pub kappa: C64,
    pub rho: f64,
    /// The printed closed form was degenerate or complex and the quartic root was used.
    pub used_fallback: bool,
}

/// Evaluates the closed-form potential through α, β, ψ, κ (principal complex
/// branches), falling back to the quartic root when the chain degenerates.
pub fn kappa_chain(eta: [f64; 3], k2: f64) -> Result<KappaChain> {
    let et = eta_tilde(eta, k2);
    let a2 = alpha_squared(et);
    let alpha_c = C64::new(a2, 0.0).sqrt();
    let alpha = alpha_c.re;
    let beta = 9.0 * a2 - 5.0 * et[0].powi(3) + 9.0 * et[0] * et[1];
    let g = et[0] * et[0] - 3.0 * et[1];
    let psi = beta * beta + 2.0 * g.powi(3);
    let w = (C64::new(beta, 0.0) + C64::new(psi, 0.0).sqrt()).powf(1.0 / 3.0);
    let scale = et[0].abs().max(1e-300);
    let kappa = if w.norm() <= 1e-6 * scale {
        // r = s = t: the last term is 0/0 and tends to zero
        C64::new(2.0 * et[0], 0.0)
    } else {
        w * 2f64.powf(1.0 / 3.0) + 2.0 * et[0] - C64::new(2f64.powf(2.0 / 3.0) * g, 0.0) / w
    };
    let sk = kappa.sqrt();
    let inner = alpha_c * 12.0 / sk + 6.0 * et[0] - kappa;
    let rho_c = (sk + inner.sqrt()) * (2.0 * 2f64.sqrt() * k2 / 3f64.sqrt());
    let lambda_q = quartic_solve(et)?;
    let rho_q = 4.0 * k2 * lambda_q;
    let consistent = rho_c.im.abs() <= 1e-8 * rho_c.norm() && (rho_c.re - rho_q).abs() <= 1e-8 * rho_q;
    let (rho, used_fallback) = if consistent { (rho_c.re, false) } else { (rho_q, true) };
    Ok(KappaChain { eta_tilde: et, alpha, beta, psi, kappa, rho, used_fallback })
}

/// ρ(r,s,t;c) on (3,2²) ⊂ so(7), with χ = ε = +1 and f(r,s) = √c·ln(rs).
pub fn so7_potential(r: f64, s: f64, t: f64, c: f64) -> Result<f64> {
    for v in [r, s, t] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveParameter(v));
        }
    }
    if c < 0.0 {
        return Err(Error::NegativeConstant(c));
    }
    if c == 0.0 {
        return Ok(10.0 * ((2.0 * r + s).powi(2) + t * t).sqrt());
    }
    Ok(so7_potential_general(r, s, t, c))
}

fn so7_potential_general(r: f64, s: f64, t: f64, c: f64) -> f64 {
    let q = 4.0 * r * r + s * s + t * t;
    let h = c + (4.0 * r * r * s * s + q * c + c * c).sqrt();
    let w = (q + 2.0 * h).sqrt();
    let sc = c.sqrt();
    10.0 * (w + sc * (r * s).ln() - sc * (h + sc * w).ln())
}

/// The same family written in ζ₁, ζ₂, ζ₃.
///
/// The coefficient of W inside the logarithm is √(c/2), and the argument is
/// divided by √D/4 = rs so that both coordinate forms share one additive constant.
pub fn so7_potential_zeta(z: [f64; 3], c: f64) -> Result<f64> {
    if c < 0.0 {
        return Err(Error::NegativeConstant(c));
    }
    let [z1, z2, z3] = z;
    let d = z1 * z1 - z2 - 2.0 * z3;
    if d < -1e-10 * z1 * z1 || z3 < 0.0 {
        return Err(Error::Unrealizable(format!("zeta radicand {d:e}")));
    }
    let d = d.max(0.0);
    let sz3 = z3.sqrt();
    let h = c + (d / 4.0 + c * (z1 / 2.0 + sz3) + c * c).sqrt();
    let w = (z1 + 2.0 * sz3 + 4.0 * h).sqrt();
    let mut rho = w;
    if c > 0.0 {
        rho -= (2.0 * c).sqrt() * ((h + (c / 2.0).sqrt() * w) / (d.sqrt() / 4.0)).ln();
    }
    Ok(10.0 / 2f64.sqrt() * rho)
}

/// Monomials c·r^a s^b t^d of each η_i as a function of (r,s,t).
type Poly = Vec<(f64, [i32; 3])>;

fn generic_eta_polys(k2: f64) -> [Poly; 3] {
    let mk = |i: i32| -> Poly {
        let c = 2f64.powi(i + 1) * k2;
        vec![(c, [2 * i, 0, 0]), (c, [0, 2 * i, 0]), (c, [0, 0, 2 * i])]
    };
    [mk(1), mk(2), mk(3)]
}

fn so7_eta_polys() -> [Poly; 3] {
    [
        vec![(20.0, [2, 0, 0]), (10.0, [0, 2, 0]), (10.0, [0, 0, 2])],
        vec![(40.0, [4, 0, 0]), (80.0, [2, 0, 2]), (20.0, [0, 4, 0]), (40.0, [0, 2, 2]), (20.0, [0, 0, 4])],
        vec![
            (80.0, [6, 0, 0]),
            (360.0, [4, 0, 2]),
            (240.0, [2, 2, 2]),
            (240.0, [2, 0, 4]),
            (40.0, [0, 6, 0]),
            (120.0, [0, 4, 2]),
            (120.0, [0, 2, 4]),
            (40.0, [0, 0, 6]),
        ],
    ]
}

fn powi(x: f64, e: i32) -> f64 {
    if e <= 0 { if e == 0 { 1.0 } else { 0.0 } } else { x.powi(e) }
}

fn poly_eval(p: &Poly, x: [f64; 3]) -> f64 {
    p.iter().map(|(c, e)| c * powi(x[0], e[0]) * powi(x[1], e[1]) * powi(x[2], e[2])).sum()
}

fn poly_diff(p: &Poly, u: usize) -> Poly {
    p.iter()
        .filter(|(_, e)| e[u] > 0)
        .map(|(c, e)| {
            let mut e2 = *e;
            e2[u] -= 1;
            (c * e[u] as f64, e2)
        })
        .collect()
}

impl PotentialSpec {
    pub fn generic(k_squared: f64, c: f64) -> PotentialSpec {
        PotentialSpec { kind: PotentialKind::Generic, k_squared, c }
    }

    pub fn so7(c: f64) -> PotentialSpec {
        PotentialSpec { kind: PotentialKind::So7, k_squared: 2.5, c }
    }

    pub fn sl2_factor(k_squared: f64, c: f64) -> PotentialSpec {
        PotentialSpec { kind: PotentialKind::Sl2Factor, k_squared, c }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0) {
            return Err(Error::NegativeConstant(self.c));
        }
        Ok(())
    }

    fn polys(&self) -> [Poly; 3] {
        match self.kind {
            PotentialKind::So7 => so7_eta_polys(),
            _ => generic_eta_polys(self.k_squared),
        }
    }

    /// ρ as a function of the slice parameters (r, s, t). For the sl₂ factor
    /// only the middle entry s is used.
    pub fn rho_params(&self, p: [f64; 3]) -> Result<f64> {
        match self.kind {
            PotentialKind::Generic => generic_potential(p[0], p[1], p[2], self.k_squared, self.c),
            PotentialKind::So7 => so7_potential(p[0], p[1], p[2], self.c),
            PotentialKind::Sl2Factor => {
                if !(p[1] > 0.0) {
                    return Err(Error::NonPositiveParameter(p[1]));
                }
                Ok(factor_potential(p[1], self.k_squared, self.c))
            }
        }
    }

    /// (η₁, η₂, η₃) at the slice point (r, s, t).
    pub fn eta_params(&self, p: [f64; 3]) -> [f64; 3] {
        let ps = self.polys();
        [poly_eval(&ps[0], p), poly_eval(&ps[1], p), poly_eval(&ps[2], p)]
    }

    /// J[i][u] = ∂η_i/∂u.
    pub fn eta_jacobian(&self, p: [f64; 3]) -> [[f64; 3]; 3] {
        let ps = self.polys();
        let mut j = [[0.0; 3]; 3];
        for i in 0..3 {
            for u in 0..3 {
                j[i][u] = poly_eval(&poly_diff(&ps[i], u), p);
            }
        }
        j
    }

    /// H[i][u][v] = ∂²η_i/∂u∂v.
    pub fn eta_hessians(&self, p: [f64; 3]) -> [[[f64; 3]; 3]; 3] {
        let ps = self.polys();
        let mut h = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for u in 0..3 {
                let du = poly_diff(&ps[i], u);
                for v in 0..3 {
                    h[i][u][v] = poly_eval(&poly_diff(&du, v), p);
                }
            }
        }
        h
    }

    /// Slice parameters with the given η, near `guess`.
    pub fn params_from_eta(&self, eta: [f64; 3], guess: [f64; 3]) -> Result<[f64; 3]> {
        match self.kind {
            PotentialKind::Generic => {
                let sq = squared_params_from_eta_tilde(eta_tilde(eta, self.k_squared))?;
                Ok([sq[0].sqrt(), sq[1].sqrt(), sq[2].sqrt()])
            }
            PotentialKind::Sl2Factor => Ok([0.0, (eta[0] / (4.0 * self.k_squared)).sqrt(), 0.0]),
            PotentialKind::So7 => so7_params_from_eta(eta, guess),
        }
    }

    /// ρ at an arbitrary point of the orbit, through its invariants.
    pub fn rho_at(&self, alg: &LieAlgebra, x: &CMat) -> Result<f64> {
        match self.kind {
            PotentialKind::So7 => so7_potential_zeta(zeta(alg, x)?, self.c),
            _ => {
                let e = eta(alg, x)?;
                let p = self.params_from_eta(e, [1.0; 3])?;
                self.rho_params(p)
            }
        }
    }
}

/// Inverts the so(7) η-polynomials. With A = r², S = s²+t², T = t² the first
/// two fix S and T in terms of A; the third is then a single equation in A,
/// bracketed on (0, η₁/20) and refined by bisection. Among several roots the
/// one closest to the guess wins.
fn so7_params_from_eta(eta: [f64; 3], guess: [f64; 3]) -> Result<[f64; 3]> {
    let (e1, e2, e3) = (eta[0] / 10.0, eta[1] / 20.0, eta[2] / 40.0);
    let st = |a: f64| {
        let s = e1 - 2.0 * a;
        let t = (e2 - 2.0 * a * a - s * s) / (4.0 * a);
        (s, t)
    };
    let f = |a: f64| {
        let (s, t) = st(a);
        (2.0 * a.powi(3) + 9.0 * a * a * t + 6.0 * a * t * s + s.powi(3) - e3) / e3
    };
    let hi = e1 / 2.0;
    let n = 2000;
    let mut best: Option<f64> = None;
    let target = guess[0] * guess[0];
    let mut prev = (hi * 1e-9, f(hi * 1e-9));
    for k in 1..=n {
        let a = hi * k as f64 / n as f64 * (1.0 - 1e-12);
        let fa = f(a);
        if prev.1.signum() != fa.signum() || fa == 0.0 {
            let (mut lo, mut up, flo) = (prev.0, a, prev.1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + up);
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            let root = 0.5 * (lo + up);
            let (s, t) = st(root);
            if t >= -1e-12 * e1 && s - t >= -1e-12 * e1 && best.is_none_or(|b| (root - target).abs() < (b - target).abs()) {
                best = Some(root);
            }
        }
        prev = (a, fa);
    }
    let a = best.ok_or_else(|| Error::Unrealizable("no so(7) slice point with these invariants".into()))?;
    let (s, t) = st(a);
    let x = [a.sqrt(), (s - t).max(0.0).sqrt(), t.max(0.0).sqrt()];
    let back = PotentialSpec::so7(0.0).eta_params(x);
    let err = (0..3).map(|i| ((back[i] - eta[i]) / eta[i]).abs()).fold(0.0, f64::max);
    if !(err <= 1e-9) {
        return Err(Error::Unrealizable(format!("so7 parameter solve residual {err:e}")));
    }
    Ok(x)
}

/// Named residuals of the so(7) PDE system, each divided by max(1, Σ|terms|).
pub fn so7_pde_residuals(c: f64, p: [f64; 3], tol: &Tolerances) -> Result<Vec<(String, f64)>> {
    let f = |x: [f64; 3]| so7_potential(x[0], x[1], x[2], c).unwrap_or(f64::NAN);
    so7_pde_residuals_for(&f, c, p, tol)
}

/// Same system for an arbitrary candidate potential (used as a falsification probe).
pub fn so7_pde_residuals_for(
    f: &dyn Fn([f64; 3]) -> f64,
    c: f64,
    p: [f64; 3],
    tol: &Tolerances,
) -> Result<Vec<(String, f64)>> {
    if c < 0.0 {
        return Err(Error::NegativeConstant(c));
    }
    let [r, s, t] = p;
    let g = fd::gradient3(f, p, tol.h1, tol.richardson);
    let h = fd::hessian3(f, p, tol.h2, tol.richardson);
    let (pr, ps, pt) = (g[0], g[1], g[2]);
    let (prs, prt, pst, ptt) = (h[0][1], h[0][2], h[1][2], h[2][2]);
    let q = 4.0 * r * r + s * s + t * t;
    let rel = |lhs: f64, rhs: f64, terms: &[f64]| {
        let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        (lhs - rhs).abs() / scale
    };
    let mut out = Vec::new();
    let pairs = [
        ("system_1", ps * prs, pt * prt),
        ("system_2", ps * pst, pt * ptt),
        ("system_3", pr * prs, 4.0 * pt * pst),
        ("system_4", pr * prt, 4.0 * pt * ptt),
    ];
    for (name, a, b) in pairs {
        out.push((name.to_string(), rel(a, -b, &[a, b])));
    }
    let a_l = t * (100.0 - pt * pt);
    let a_r = (r * pr + s * ps) * pt;
    out.push(("a".into(), rel(a_l, a_r, &[a_l, a_r])));
    let b_l = t * (r * pr - s * ps);
    let b_r = (4.0 * r * r - s * s) * pt;
    out.push(("b".into(), rel(b_l, b_r, &[t * r * pr, t * s * ps, b_r])));
    let c_l = s * s * (ps * ps + pt * pt - 100.0);
    let c_r = r * r * (pr * pr + 4.0 * pt * pt - 400.0);
    out.push(("combined".into(), rel(c_l, c_r, &[s * s * (ps * ps + pt * pt), r * r * (pr * pr + 4.0 * pt * pt)])));
    let st_l = ps * ps + pt * pt;
    let st_r = 100.0 * (1.0 + c / (s * s));
    out.push(("rho2_st".into(), rel(st_l, st_r, &[st_l, st_r])));
    let rt_l = pr * pr + 4.0 * pt * pt;
    let rt_r = 100.0 * (4.0 + c / (r * r));
    out.push(("rho2_rt".into(), rel(rt_l, rt_r, &[rt_l, rt_r])));
    let d_l = 50.0 * t * t / (pt * pt);
    let d_r = (4.0 * r * r * s * s + c * q + c * c).sqrt() + c + q / 2.0;
    out.push(("rho_t".into(), rel(d_l, d_r, &[d_l, d_r])));
    Ok(out)
}
