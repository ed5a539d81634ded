//! Invariant functions η₁, η₂, η₃ (any orbit), ζ₁, ζ₂, ζ₃ (so(7)), the 𝒵 map
//! and the constant k².

use std::fmt;

use crate::error::{Error, Result};
use crate::lie_core::{multi_bracket, Family, LieAlgebra};
use crate::linalg::{comm, max_abs, trace, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTuple {
    pub eta: [f64; 3],
    pub zeta: Option<[f64; 3]>,
}

fn real_part(v: C64, what: &str) -> Result<f64> {
    if v.im.abs() > 1e-10 * (1.0 + v.norm()) {
        return Err(Error::InvalidArgument(format!("{what} has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

/// η₁ = ⟨X,X′⟩, η₂ = −⟨⟦XX′⟧,⟦XX′⟧⟩, η₃ = −⟨⟦XXX′⟧,⟦X′XX′⟧⟩ with X′ = σX.
pub fn eta(alg: &LieAlgebra, x: &CMat) -> Result<[f64; 3]> {
    if max_abs(x) == 0.0 {
        return Err(Error::ZeroElement);
    }
    let xp = alg.sigma(x);
    let xxp = comm(x, &xp);
    let e1 = alg.inner(x, &xp);
    let e2 = -alg.inner(&xxp, &xxp);
    let e3 = -alg.inner(&multi_bracket(&[x, x, &xp]), &multi_bracket(&[&xp, x, &xp]));
    Ok([real_part(e1, "eta1")?, real_part(e2, "eta2")?, real_part(e3, "eta3")?])
}

pub fn eta_i(alg: &LieAlgebra, x: &CMat, i: usize) -> Result<f64> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidArgument(format!("eta index {i}")));
    }
    Ok(eta(alg, x)?[i - 1])
}

fn check_so7(alg: &LieAlgebra) -> Result<()> {
    if alg.family() != Family::SO || alg.matrix_size() != 7 {
        return Err(Error::InvalidArgument(format!("zeta is defined on so(7), got {alg}")));
    }
    Ok(())
}

/// ζ₁ = tr(ZZ̄ᵗ), ζ₂ = tr([Z,Z̄ᵗ]²), ζ₃ = tr(ZZZ̄ᵗZ̄ᵗ) on so(7).
pub fn zeta(alg: &LieAlgebra, z: &CMat) -> Result<[f64; 3]> {
    check_so7(alg)?;
    let zs = z.adjoint();
    let k = comm(z, &zs);
    let z1 = trace(&(z * &zs));
    let z2 = trace(&(&k * &k));
    let z3 = trace(&(z * z * &zs * &zs));
    Ok([real_part(z1, "zeta1")?, real_part(z2, "zeta2")?, real_part(z3, "zeta3")?])
}

pub fn invariants(alg: &LieAlgebra, x: &CMat) -> Result<InvariantTuple> {
    let eta = eta(alg, x)?;
    let zeta = if alg.family() == Family::SO && alg.matrix_size() == 7 { Some(zeta(alg, x)?) } else { None };
    Ok(InvariantTuple { eta, zeta })
}

/// 𝒵X = ⟦XX′X′X′X⟧ + ⟦X′X′XXX′⟧ + 2⟦X′XX′XX′⟧.
pub fn zmap(alg: &LieAlgebra, x: &CMat) -> CMat {
    let xp = alg.sigma(x);
    multi_bracket(&[x, &xp, &xp, &xp, x])
        + multi_bracket(&[&xp, &xp, x, x, &xp])
        + multi_bracket(&[&xp, x, &xp, x, &xp]) * C64::new(2.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Rational { num: s * num / g, den: s * den / g }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 { write!(f, "{}", self.num) } else { write!(f, "{}/{}", self.num, self.den) }
    }
}

/// Cartan type used to look up k².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::G2 => write!(f, "G2"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::E6 => write!(f, "E6"),
            CartanType::E7 => write!(f, "E7"),
            CartanType::E8 => write!(f, "E8"),
        }
    }
}

impl CartanType {
    pub fn of(alg: &LieAlgebra) -> CartanType {
        let n = alg.matrix_size();
        match alg.family() {
            Family::SL => CartanType::A(n - 1),
            Family::SP => CartanType::C(n / 2),
            Family::SO if n % 2 == 1 => CartanType::B((n - 1) / 2),
            Family::SO => CartanType::D(n / 2),
        }
    }
}

/// Tabulated k² (A_n, C_n: (n+1)/2; B, D with matrix size N: (N−2)/2).
pub fn k_squared(t: CartanType) -> Result<Rational> {
    let bad = || Error::UnsupportedAlgebra(format!("no k^2 for {t}"));
    Ok(match t {
        CartanType::A(n) if n >= 1 => Rational::new(n as i64 + 1, 2),
        CartanType::C(n) if n >= 1 => Rational::new(n as i64 + 1, 2),
        CartanType::B(n) if n >= 2 => Rational::new(2 * n as i64 - 1, 2),
        CartanType::D(n) if n >= 3 => Rational::new(2 * n as i64 - 2, 2),
        CartanType::G2 => Rational::new(2, 1),
        CartanType::F4 => Rational::new(9, 2),
        CartanType::E6 => Rational::new(6, 1),
        CartanType::E7 => Rational::new(9, 1),
        CartanType::E8 => Rational::new(15, 1),
        _ => return Err(bad()),
    })
}

pub fn k_squared_of(alg: &LieAlgebra) -> Result<Rational> {
    k_squared(CartanType::of(alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::{build_algebra, FormChoice};
    use crate::linalg::{r, random_complex, unit};
    use crate::orbit_reps::{scaled_point, summands, OrbitSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn so7_eta(p: [f64; 3]) -> [f64; 3] {
        let [r, s, t] = p;
        let (r2, s2, t2) = (r * r, s * s, t * t);
        [
            10.0 * (2.0 * r2 + s2 + t2),
            20.0 * (2.0 * r2 * r2 + 4.0 * r2 * t2 + (s2 + t2).powi(2)),
            40.0 * (2.0 * r2.powi(3) + 9.0 * r2 * r2 * t2 + 6.0 * r2 * t2 * (s2 + t2) + (s2 + t2).powi(3)),
        ]
    }

    #[test]
    fn sl6_eta1_value() {
        let spec = OrbitSpec::parse("sl", 6, "2,2,2").unwrap();
        let x = scaled_point(&spec, 1.0, 1.0, 1.0).unwrap().element;
        // 12 · tr(X Xᵗ) = 36 = 4 k² · 3 with k² = 3
        assert!((eta(&spec.algebra, &x).unwrap()[0] - 36.0).abs() < 1e-12);
    }

    #[test]
    fn so7_eta_polynomials() {
        let spec = OrbitSpec::parse("so", 7, "3,2,2").unwrap();
        for p in [[1.0, 1.0, 1.0], [0.5, 1.5, 2.5], [1.3, 0.4, 0.9]] {
            let x = scaled_point(&spec, p[0], p[1], p[2]).unwrap().element;
            let e = eta(&spec.algebra, &x).unwrap();
            let ex = so7_eta(p);
            for i in 0..3 {
                assert!((e[i] - ex[i]).abs() < 1e-11 * ex[i]);
            }
            let z = zeta(&spec.algebra, &x).unwrap();
            assert!((z[0] - e[0] / 5.0).abs() < 1e-12 * e[0]);
            assert!((z[1] - e[1] / 5.0).abs() < 1e-12 * e[1]);
            assert!((z[2] - 4.0 * p[0].powi(4)).abs() < 1e-12);
        }
        let x = scaled_point(&spec, 1.0, 1.0, 1.0).unwrap().element;
        let z = zeta(&spec.algebra, &x).unwrap();
        assert!((z[0] - 8.0).abs() < 1e-12 && (z[1] - 40.0).abs() < 1e-12 && (z[2] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn eta_identities_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let alg = build_algebra(Family::SO, 7, FormChoice::So7Block).unwrap();
        let mut x = alg.zero();
        for b in alg.basis() {
            x += b * random_complex(&mut rng, 1, 1)[(0, 0)];
        }
        let e = eta(&alg, &x).unwrap();
        let xp = alg.sigma(&x);
        let e2 = alg.inner(&comm(&x, &xp), &alg.sigma(&comm(&x, &xp))).re;
        let y = multi_bracket(&[&x, &x, &xp]);
        let e3 = alg.inner(&y, &alg.sigma(&y)).re;
        assert!((e[1] - e2).abs() < 1e-10 * e[1]);
        assert!((e[2] - e3).abs() < 1e-10 * e[2]);
        let lam = 1.7;
        let el = eta(&alg, &(&x * r(lam))).unwrap();
        for i in 0..3 {
            assert!((el[i] - lam.powi(2 * i as i32 + 2) * e[i]).abs() < 1e-10 * el[i]);
        }
        assert_eq!(eta(&alg, &alg.zero()).unwrap_err(), Error::ZeroElement);
        let sl = build_algebra(Family::SL, 3, FormChoice::Standard).unwrap();
        assert!(zeta(&sl, &unit(3, 0, 1)).is_err());
    }

    #[test]
    fn zmap_homogeneity_and_sl2() {
        let alg = build_algebra(Family::SL, 2, FormChoice::Standard).unwrap();
        let s = 1.3;
        let x = unit(2, 0, 1) * r(s);
        let z = zmap(&alg, &x);
        // brute force in sl2: the result is a multiple of X′ = −e21
        let xp = alg.sigma(&x);
        let coef = z[(1, 0)] / xp[(1, 0)];
        assert!(max_abs(&(&z - &xp * coef)) < 1e-12);
        assert!(max_abs(&zmap(&alg, &alg.zero())) == 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let alg = build_algebra(Family::SP, 3, FormChoice::Standard).unwrap();
        let mut y = alg.zero();
        for b in alg.basis() {
            y += b * random_complex(&mut rng, 1, 1)[(0, 0)];
        }
        let lam = C64::new(0.8, -0.6) * 1.1;
        let lhs = zmap(&alg, &(&y * lam));
        let rhs = zmap(&alg, &y) * (lam * lam * lam.conj().powi(3));
        assert!(max_abs(&(&lhs - &rhs)) < 1e-10 * max_abs(&rhs));
    }

    #[test]
    fn generic_eta_formula() {
        for (fam, n, lab) in [("sl", 6, "2,2,2"), ("sp", 3, "2,2,2"), ("so", 12, "2,2,2,2,2,2")] {
            let spec = OrbitSpec::parse(fam, n, lab).unwrap();
            let k2 = k_squared_of(&spec.algebra).unwrap().value();
            let p = [0.7, 1.3, 2.1];
            let x = scaled_point(&spec, p[0], p[1], p[2]).unwrap().element;
            let e = eta(&spec.algebra, &x).unwrap();
            for i in 1..=3 {
                let ex = 2f64.powi(i + 1) * k2 * p.iter().map(|u| u.powi(2 * i)).sum::<f64>();
                assert!((e[i as usize - 1] - ex).abs() < 1e-10 * ex);
            }
            assert_eq!(summands(&spec, p).unwrap().len(), 3);
        }
    }

    #[test]
    fn k_squared_table() {
        assert_eq!(k_squared(CartanType::A(5)).unwrap(), Rational::new(3, 1));
        assert_eq!(k_squared(CartanType::C(3)).unwrap(), Rational::new(2, 1));
        // so(12) = D6, so(7) = B3
        assert_eq!(k_squared(CartanType::D(6)).unwrap().value(), 5.0);
        assert_eq!(k_squared(CartanType::B(3)).unwrap(), Rational::new(5, 2));
        assert_eq!(k_squared(CartanType::E7).unwrap().value(), 9.0);
        assert_eq!(k_squared(CartanType::F4).unwrap().to_string(), "9/2");
        assert!(k_squared(CartanType::D(2)).is_err());
    }
}
