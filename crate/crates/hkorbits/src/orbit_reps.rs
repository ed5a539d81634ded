//! Explicit orbit representatives, scaled points X(r,s,t) and Jordan types.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie_core::{build_algebra, Family, FormChoice, LieAlgebra, StandardTriple};
use crate::linalg::{c, comm, max_abs, r, singular_values, zeros, CMat};

/// Which of the explicitly known orbits a spec refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    /// (2,1ᵏ) or (2²,1ᵏ) in sl(n): the two orbits below (2³,1ᵏ).
    SlFewPairs(usize),
    /// (2³,1ᵏ) in sl(n), n ≥ 6.
    SlPairs,
    /// (3,1ᵏ) in sl(n), n ≥ 3.
    SlThree,
    /// (5) in so(5).
    So5Regular,
    /// (3²) in so(6).
    So6ThreeThree,
    /// (3,2²,1ᵏ) in so(n), n ≥ 7.
    SoThreeTwoTwo,
    /// (2⁶,1ᵏ) in so(n), n ≥ 12.
    SoSixPairs,
    /// (2³,1^{2m−6}) in sp(2m), m ≥ 3.
    SpPairs,
}

#[derive(Debug, Clone)]
pub struct OrbitSpec {
    pub algebra: Arc<LieAlgebra>,
    pub label: Vec<usize>,
    pub kind: OrbitKind,
    /// Cohomogeneity listed in the reference tables.
    pub expected_cohomogeneity: Option<usize>,
    pub height: Option<usize>,
}

pub fn parse_partition(s: &str) -> Result<Vec<usize>> {
    let mut parts = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let v: usize = tok.parse().map_err(|_| Error::InvalidArgument(format!("bad partition entry '{tok}'")))?;
        if v == 0 {
            return Err(Error::InvalidArgument("partition entries must be positive".into()));
        }
        parts.push(v);
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("partition '{s}' is not weakly decreasing")));
    }
    Ok(parts)
}

pub fn format_partition(p: &[usize]) -> String {
    p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn pad(head: &[usize], total: usize) -> Option<Vec<usize>> {
    let s: usize = head.iter().sum();
    if s > total {
        return None;
    }
    let mut v = head.to_vec();
    v.extend(std::iter::repeat_n(1, total - s));
    Some(v)
}

impl OrbitSpec {
    /// Resolves a partition label to one of the known orbits and builds the
    /// realization whose form matches its representative.
    pub fn new(family: Family, n: usize, label: &[usize]) -> Result<OrbitSpec> {
        let unknown = || Error::UnknownOrbit { algebra: format!("{}({n})", family.name()), label: format_partition(label) };
        let size = if family == Family::SP { 2 * n } else { n };
        if label.iter().sum::<usize>() != size {
            return Err(unknown());
        }
        let is = |head: &[usize]| pad(head, size).as_deref() == Some(label);
        let (kind, form, expected) = match family {
            Family::SL if n >= 2 && is(&[2]) => (OrbitKind::SlFewPairs(1), FormChoice::Standard, Some(1)),
            Family::SL if n >= 4 && is(&[2, 2]) => (OrbitKind::SlFewPairs(2), FormChoice::Standard, Some(2)),
            Family::SL if n >= 6 && is(&[2, 2, 2]) => (OrbitKind::SlPairs, FormChoice::Standard, Some(3)),
            Family::SL if n >= 3 && is(&[3]) => {
                let e = match n {
                    4 => Some(5),
                    n if n >= 5 => Some(4),
                    _ => None,
                };
                (OrbitKind::SlThree, FormChoice::Standard, e)
            }
            Family::SO if n == 5 && is(&[5]) => (OrbitKind::So5Regular, FormChoice::AntiDiagonal, Some(6)),
            Family::SO if n == 6 && is(&[3, 3]) => (OrbitKind::So6ThreeThree, FormChoice::AntiDiagonal, Some(5)),
            Family::SO if n >= 7 && is(&[3, 2, 2]) => {
                (OrbitKind::SoThreeTwoTwo, FormChoice::So7Block, Some(if n == 7 { 3 } else { 4 }))
            }
            Family::SO if n >= 12 && is(&[2, 2, 2, 2, 2, 2]) => (OrbitKind::SoSixPairs, FormChoice::B12Block, Some(3)),
            Family::SP if n >= 3 && is(&[2, 2, 2]) => (OrbitKind::SpPairs, FormChoice::Standard, Some(3)),
            _ => return Err(unknown()),
        };
        let height = match kind {
            OrbitKind::SlFewPairs(k) => Some(k),
            OrbitKind::SlThree if n < 4 => None,
            _ => Some(3),
        };
        let algebra = Arc::new(build_algebra(family, n, form)?);
        Ok(OrbitSpec { algebra, label: label.to_vec(), kind, expected_cohomogeneity: expected, height })
    }

    pub fn parse(family: &str, n: usize, label: &str) -> Result<OrbitSpec> {
        OrbitSpec::new(Family::parse(family)?, n, &parse_partition(label)?)
    }

    pub fn size(&self) -> usize {
        self.algebra.matrix_size()
    }

    /// Orbits whose points lie in three commuting σ-invariant sl₂'s.
    pub fn is_generic_cohom3(&self) -> bool {
        matches!(self.kind, OrbitKind::SlPairs | OrbitKind::SoSixPairs | OrbitKind::SpPairs)
    }

    /// The special cohomogeneity-three orbit (3,2²) in so(7).
    pub fn is_so7_special(&self) -> bool {
        self.kind == OrbitKind::SoThreeTwoTwo && self.algebra.matrix_size() == 7
    }

    pub fn describe(&self) -> String {
        format!("{} ({})", self.algebra, format_partition(&self.label))
    }
}

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub spec: OrbitSpec,
    pub params: [f64; 3],
    pub element: CMat,
}

/// Nilpositive element of the listed representative.
fn representative_x(spec: &OrbitSpec) -> CMat {
    let n = spec.size();
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let mut x = zeros(n);
    match spec.kind {
        OrbitKind::SlFewPairs(m) => {
            for k in 0..m {
                x[(2 * k, 2 * k + 1)] = r(1.0);
            }
        }
        OrbitKind::SlPairs => {
            for k in 0..3 {
                x[(2 * k, 2 * k + 1)] = r(1.0);
            }
        }
        OrbitKind::SlThree => {
            // unit entries do not give [H,X] = 2X; √2 does
            x[(0, 1)] = r(s2);
            x[(1, 2)] = r(s2);
        }
        OrbitKind::So5Regular => {
            x[(0, 1)] = c(s2, -s2);
            x[(1, 2)] = c(0.0, -s6);
            x[(2, 3)] = c(0.0, s6);
            x[(3, 4)] = c(-s2, s2);
        }
        OrbitKind::So6ThreeThree => {
            let v = c(0.0, s2);
            x[(0, 1)] = v;
            x[(1, 2)] = v;
            x[(3, 4)] = -v;
            x[(4, 5)] = -v;
        }
        OrbitKind::SoThreeTwoTwo => {
            x[(0, 4)] = r(s2);
            x[(1, 0)] = r(-s2);
            x[(2, 6)] = r(1.0);
            x[(3, 5)] = r(-1.0);
        }
        OrbitKind::SoSixPairs => {
            for k in 0..6 {
                x[(2 * k, 2 * k + 1)] = r(if k < 3 { 1.0 } else { -1.0 });
            }
        }
        OrbitKind::SpPairs => {
            let m = n / 2;
            for k in 0..3 {
                x[(k, m + k)] = r(1.0);
            }
        }
    }
    x
}

/// Standard triple {H = [X,−σX], X, Y = −σX} for the listed representative.
pub fn representative(spec: &OrbitSpec) -> StandardTriple {
    StandardTriple::from_nilpositive(&spec.algebra, representative_x(spec))
}

/// The three commuting sl₂ summands (X₊, X₀, X₋) of a generic point, scaled by (s, r, t).
pub fn summands(spec: &OrbitSpec, params: [f64; 3]) -> Result<[CMat; 3]> {
    let [rr, s, t] = params;
    let n = spec.size();
    let mut out = [zeros(n), zeros(n), zeros(n)];
    match spec.kind {
        OrbitKind::SlPairs => {
            for (k, v) in [s, rr, t].into_iter().enumerate() {
                out[k][(2 * k, 2 * k + 1)] = r(v);
            }
        }
        OrbitKind::SpPairs => {
            let m = n / 2;
            for (k, v) in [s, rr, t].into_iter().enumerate() {
                out[k][(k, m + k)] = r(v);
            }
        }
        OrbitKind::SoSixPairs => {
            // block k is paired with its mirror 5−k under the anti-diagonal form
            for (k, v) in [s, rr, t].into_iter().enumerate() {
                let m = 5 - k;
                out[k][(2 * k, 2 * k + 1)] = r(v);
                out[k][(2 * m, 2 * m + 1)] = r(-v);
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!("{} has no commuting sl2 decomposition", spec.describe())));
        }
    }
    Ok(out)
}

/// X(r,s,t) for the cohomogeneity-three orbits (and the per-block scaling of
/// the (2³) and (2⁶) representatives).
pub fn scaled_point(spec: &OrbitSpec, rr: f64, s: f64, t: f64) -> Result<OrbitPoint> {
    for v in [rr, s, t] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveParameter(v));
        }
    }
    let element = if spec.kind == OrbitKind::SoThreeTwoTwo {
        let q = 2f64.sqrt();
        let mut x = zeros(spec.size());
        x[(0, 4)] = r(q * rr);
        x[(1, 0)] = r(-q * rr);
        x[(1, 5)] = r(t);
        x[(2, 4)] = r(-t);
        x[(2, 6)] = r(s);
        x[(3, 5)] = r(-s);
        x
    } else {
        let [a, b, d] = summands(spec, [rr, s, t])?;
        a + b + d
    };
    Ok(OrbitPoint { spec: spec.clone(), params: [rr, s, t], element })
}

/// s·E on the minimal sl(n) orbit (2,1ᵏ), a single sl₂ factor; params are (0, s, 0).
pub fn factor_point(spec: &OrbitSpec, s: f64) -> Result<OrbitPoint> {
    if spec.kind != OrbitKind::SlFewPairs(1) {
        return Err(Error::InvalidArgument(format!("{} is not a minimal sl(n) orbit", spec.describe())));
    }
    if !(s > 0.0) {
        return Err(Error::NonPositiveParameter(s));
    }
    let mut element = zeros(spec.size());
    element[(0, 1)] = r(s);
    Ok(OrbitPoint { spec: spec.clone(), params: [0.0, s, 0.0], element })
}

/// Max-entry test Aⁿ ≈ 0, scaled by the size of A.
pub fn is_nilpotent(a: &CMat) -> bool {
    let n = a.nrows();
    let scale = (1.0 + max_abs(a)).powi(n as i32);
    let mut p = a.clone();
    for _ in 1..n {
        p = &p * a;
    }
    max_abs(&p) <= 1e-10 * scale
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_partition(a: &CMat) -> Result<Vec<usize>> {
    if !is_nilpotent(a) {
        return Err(Error::NotNilpotent);
    }
    let n = a.nrows();
    let norm = singular_values(a).first().copied().unwrap_or(0.0);
    if norm == 0.0 {
        return Ok(vec![1; n]);
    }
    let b = a / r(norm);
    let mut ranks = vec![n];
    let mut p = CMat::identity(n, n);
    for _ in 0..n {
        p = &p * &b;
        let rk = singular_values(&p).iter().filter(|&&v| v > 1e-9).count();
        ranks.push(rk);
        if rk == 0 {
            break;
        }
    }
    // number of parts ≥ k is rank(A^{k−1}) − rank(A^k)
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exact));
    }
    Ok(parts)
}

/// Complex dimension of the orbit through `x`: rank of B ↦ [B,x].
pub fn orbit_dim_complex(alg: &LieAlgebra, x: &CMat, rel: f64) -> usize {
    let cols: Vec<CMat> = alg.basis().iter().map(|b| comm(b, x)).collect();
    crate::linalg::rank(&crate::linalg::as_columns(&cols), rel)
}
