use std::collections::BTreeMap;

use hkorbits::cli_reports::{CheckReport, Real, Status};
use hkorbits::cohomogeneity::cohomogeneity;
use hkorbits::invariants::{eta, zeta};
use hkorbits::kahler_geometry::{random_element, KahlerData, PotentialDerivatives};
use hkorbits::lie_core::{build_algebra, Family, FormChoice, LieAlgebra};
use hkorbits::linalg::{c, frob, max_abs, random_complex, random_unitary, r, CMat};
use hkorbits::orbit_reps::{jordan_partition, scaled_point, summands, OrbitSpec};
use hkorbits::potentials::{factor_potential, factor_potential_derivative, so7_potential, generic_potential};
use hkorbits::standard_forms::{skew_standard, svd_complex, takagi};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra(idx: usize) -> LieAlgebra {
    let (fam, n, form) = [
        (Family::SL, 3, FormChoice::Standard),
        (Family::SL, 5, FormChoice::Standard),
        (Family::SO, 5, FormChoice::Standard),
        (Family::SO, 7, FormChoice::AntiDiagonal),
        (Family::SO, 8, FormChoice::AntiDiagonal),
        (Family::SP, 2, FormChoice::Standard),
        (Family::SP, 3, FormChoice::Standard),
    ][idx % 7];
    build_algebra(fam, n, form).unwrap()
}

fn compact_element(alg: &LieAlgebra, rng: &mut ChaCha8Rng) -> CMat {
    use rand::Rng;
    let mut m = alg.zero();
    for b in alg.compact_basis() {
        m += b * r(rng.random_range(-1.0..1.0));
    }
    let n = frob(&m);
    m / r(n)
}

fn generic_specs() -> Vec<OrbitSpec> {
    vec![
        OrbitSpec::new(Family::SL, 6, &[2, 2, 2]).unwrap(),
        OrbitSpec::new(Family::SL, 7, &[2, 2, 2, 1]).unwrap(),
        OrbitSpec::new(Family::SP, 3, &[2, 2, 2]).unwrap(),
        OrbitSpec::new(Family::SO, 12, &[2; 6]).unwrap(),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jacobi_identity(idx in 0usize..7, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, d) = (random_element(&alg, &mut rng), random_element(&alg, &mut rng), random_element(&alg, &mut rng));
        let j = alg.bracket(&a, &alg.bracket(&b, &d)) + alg.bracket(&b, &alg.bracket(&d, &a)) + alg.bracket(&d, &alg.bracket(&a, &b));
        prop_assert!(max_abs(&j) <= 1e-10);
    }

    #[test]
    fn inner_is_ad_invariant(idx in 0usize..7, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, d) = (random_element(&alg, &mut rng), random_element(&alg, &mut rng), random_element(&alg, &mut rng));
        let v = alg.inner(&alg.bracket(&a, &b), &d) + alg.inner(&b, &alg.bracket(&a, &d));
        prop_assert!(v.norm() <= 1e-9);
    }

    #[test]
    fn sigma_is_conjugate_linear_involution(idx in 0usize..7, seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let alg = algebra(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&alg, &mut rng);
        let lam = c(re, im);
        prop_assert!(max_abs(&(alg.sigma(&(&a * lam)) - alg.sigma(&a) * lam.conj())) <= 1e-12);
        prop_assert!(max_abs(&(alg.sigma(&alg.sigma(&a)) - &a)) <= 1e-12);
        prop_assert!(alg.defining_residual(&alg.sigma(&a)) <= 1e-12);
    }

    #[test]
    fn inner_with_sigma_is_positive(idx in 0usize..7, seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&alg, &mut rng);
        let v = alg.inner(&a, &alg.sigma(&a));
        prop_assert!(v.re > 0.0);
        prop_assert!(v.im.abs() <= 1e-12 * v.re.max(1.0));
    }

    #[test]
    fn scaled_point_is_linear(which in 0usize..5, p in prop::array::uniform3(0.2f64..3.0), lam in 0.1f64..5.0) {
        let spec = if which == 4 {
            OrbitSpec::new(Family::SO, 7, &[3, 2, 2]).unwrap()
        } else {
            generic_specs()[which].clone()
        };
        let x = scaled_point(&spec, p[0], p[1], p[2]).unwrap().element;
        let y = scaled_point(&spec, lam * p[0], lam * p[1], lam * p[2]).unwrap().element;
        prop_assert!(max_abs(&(y - &x * r(lam))) <= 1e-12 * (1.0 + lam * max_abs(&x)));
    }

    #[test]
    fn generic_summands_commute_and_are_minimal(which in 0usize..4, p in prop::array::uniform3(0.2f64..3.0)) {
        let spec = &generic_specs()[which];
        let parts = summands(spec, p).unwrap();
        for i in 0..3 {
            let mut jp = jordan_partition(&parts[i]).unwrap();
            jp.sort_unstable_by(|a, b| b.cmp(a));
            // a minimal-orbit sl2 sits as one 2-block, or as a 2-block and its mirror in so(n)
            let twos = if spec.algebra.family() == Family::SO { 2 } else { 1 };
            prop_assert!(jp.iter().take(twos).all(|&k| k == 2) && jp[twos..].iter().all(|&k| k == 1), "{:?}", jp);
            for j in 0..i {
                prop_assert!(max_abs(&spec.algebra.bracket(&parts[i], &parts[j])) <= 1e-12);
            }
        }
    }

    #[test]
    fn eta_scaling_and_bracket_identities(which in 0usize..5, p in prop::array::uniform3(0.3f64..2.0), lam in 0.2f64..3.0) {
        let spec = if which == 4 {
            OrbitSpec::new(Family::SO, 7, &[3, 2, 2]).unwrap()
        } else {
            generic_specs()[which].clone()
        };
        let alg = &spec.algebra;
        let x = scaled_point(&spec, p[0], p[1], p[2]).unwrap().element;
        let e = eta(alg, &x).unwrap();
        let el = eta(alg, &(&x * r(lam))).unwrap();
        for i in 0..3 {
            prop_assert!(rel(el[i], lam.powi(2 * (i as i32 + 1)) * e[i]) <= 1e-10);
        }
        let xp = alg.sigma(&x);
        let w2 = alg.bracket(&x, &xp);
        let w3 = alg.bracket(&x, &w2);
        prop_assert!(rel(eta(alg, &w2).unwrap()[0], e[1]) <= 1e-10);
        prop_assert!(rel(eta(alg, &w3).unwrap()[0], e[2]) <= 1e-10);
    }

    #[test]
    fn so7_zeta_matches_eta(p in prop::array::uniform3(0.2f64..2.5)) {
        let spec = OrbitSpec::new(Family::SO, 7, &[3, 2, 2]).unwrap();
        let x = scaled_point(&spec, p[0], p[1], p[2]).unwrap().element;
        let e = eta(&spec.algebra, &x).unwrap();
        let z = zeta(&spec.algebra, &x).unwrap();
        prop_assert!(rel(z[0], e[0] / 5.0) <= 1e-10);
        prop_assert!(rel(z[1], e[1] / 5.0) <= 1e-10);
    }

    #[test]
    fn factor_derivative_law(u in 0.2f64..3.0, k2 in 0.5f64..8.0, cc in 0.0f64..4.0) {
        let h = 1e-4 * u;
        let d = (factor_potential(u + h, k2, cc) - factor_potential(u - h, k2, cc)) / (2.0 * h);
        prop_assert!(rel(d * d, 16.0 * k2 * k2 + cc / (u * u)) <= 1e-6);
        prop_assert!(rel(factor_potential_derivative(u, k2, cc).powi(2), 16.0 * k2 * k2 + cc / (u * u)) <= 1e-12);
    }

    #[test]
    fn potentials_increase_in_each_parameter(p in prop::array::uniform3(0.3f64..2.5), cc in 0.0f64..3.0, k2 in 1.0f64..6.0) {
        for i in 0..3 {
            let mut q = p;
            q[i] += 1e-3;
            prop_assert!(generic_potential(q[0], q[1], q[2], k2, cc).unwrap() > generic_potential(p[0], p[1], p[2], k2, cc).unwrap());
            if (p[0] - p[1]).abs() > 0.05 && (q[0] - q[1]).abs() > 0.05 {
                prop_assert!(so7_potential(q[0], q[1], q[2], cc).unwrap() > so7_potential(p[0], p[1], p[2], cc).unwrap());
            }
        }
    }

    #[test]
    fn normal_forms_reconstruct_and_are_invariant(n in 2usize..8, kind in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, n, n);
        let z = match kind { 0 => &a + a.transpose(), 1 => &a - a.transpose(), _ => a };
        let entries = |m: &CMat| match kind {
            0 => takagi(m).map(|f| (f.diagonal_entries().0, f.residual)),
            1 => skew_standard(m).map(|f| (f.block_entries().0, f.residual)),
            _ => svd_complex(m).map(|f| (f.diagonal_entries().0, f.residual)),
        };
        let (base, res) = entries(&z).unwrap();
        prop_assert!(res <= 1e-10 * (1.0 + frob(&z)));
        prop_assert!(base.windows(2).all(|w| w[0] >= w[1]) && base.iter().all(|&v| v >= 0.0));
        let g = random_unitary(&mut rng, n);
        let moved = if kind == 2 { &g * &z * random_unitary(&mut rng, n) } else { &g * &z * g.transpose() };
        let (e, _) = entries(&moved).unwrap();
        for (x, y) in e.iter().zip(&base) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + y));
        }
    }

    #[test]
    fn report_json_round_trips(vals in prop::collection::vec(-1e6f64..1e6, 0..6), tol in 1e-12f64..1.0, name in "[a-z_]{1,12}") {
        let mut rep = CheckReport::new(&name, "anchor", tol).input("seed", 42);
        for (i, v) in vals.iter().enumerate() {
            rep.residual(&format!("r{i}"), v.abs());
            rep.value(&format!("v{i}"), *v);
        }
        let rep = rep.finish();
        let back: CheckReport = serde_json::from_str(&rep.to_json()).unwrap();
        prop_assert_eq!(back, rep);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn compact_flow_preserves_partition_and_eta(which in 0usize..3, seed in any::<u64>(), t in prop::sample::select(vec![0.3, 0.7])) {
        let spec = generic_specs()[which].clone();
        let alg = &spec.algebra;
        let x = scaled_point(&spec, 0.6, 1.1, 1.7).unwrap().element;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = compact_element(alg, &mut rng);
        let y = alg.adjoint_flow(&k, t, &x);
        let (mut a, mut b) = (jordan_partition(&x).unwrap(), jordan_partition(&y).unwrap());
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        let (ex, ey) = (eta(alg, &x).unwrap(), eta(alg, &y).unwrap());
        for i in 0..3 {
            prop_assert!(rel(ey[i], ex[i]) <= 1e-8);
        }
        // the pairing itself is constant along the compact flow
        let u = random_element(alg, &mut rng);
        let v = random_element(alg, &mut rng);
        let before = alg.inner(&u, &v);
        let after = alg.inner(&alg.adjoint_flow(&k, t, &u), &alg.adjoint_flow(&k, t, &v));
        prop_assert!((before - after).norm() <= 1e-9 * (1.0 + before.norm()));
    }

    #[test]
    fn omega_is_real_and_antisymmetric(which in 0usize..3, seed in any::<u64>()) {
        let spec = generic_specs()[which].clone();
        let alg = &spec.algebra;
        let x = scaled_point(&spec, 0.6, 1.1, 1.7).unwrap().element;
        let kd = KahlerData::new(alg, &x, PotentialDerivatives::eta1());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = alg.bracket(&random_element(alg, &mut rng), &x);
        let b = alg.bracket(&random_element(alg, &mut rng), &x);
        let (ab, ba) = (kd.omega_i(&a, &b), kd.omega_i(&b, &a));
        prop_assert!(ab.is_finite());
        prop_assert!((ab + ba).abs() <= 1e-8 * (1.0 + ab.abs()));
        prop_assert!(kd.omega_i(&a, &a).abs() <= 1e-8 * (1.0 + frob(&a).powi(2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn cohomogeneity_is_seed_independent(seed in 0u64..10_000) {
        let spec = OrbitSpec::new(Family::SP, 3, &[2, 2, 2]).unwrap();
        prop_assert_eq!(cohomogeneity(&spec, 2, seed).unwrap().cohomogeneity, 3);
        let minimal = OrbitSpec::new(Family::SL, 4, &[2, 1, 1]).unwrap();
        let res = cohomogeneity(&minimal, 2, seed).unwrap();
        prop_assert_eq!(res.cohomogeneity, 1);
    }
}

#[test]
fn status_serializes_uppercase() {
    let mut inputs = BTreeMap::new();
    inputs.insert("k".to_string(), "v".to_string());
    let rep = CheckReport {
        check_name: "x".into(),
        inputs,
        residuals: vec![],
        values: vec![],
        tolerance: Real(f64::NAN),
        status: Status::Skipped,
        anchor: String::new(),
    };
    let s = rep.to_json();
    assert!(s.contains("\"SKIPPED\"") && s.contains("\"tolerance\":null"), "{s}");
}
