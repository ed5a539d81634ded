//! Cohomogeneity of the compact group action on a nilpotent orbit, computed
//! from ranks at sampled points, plus the reference tables it is compared to.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{Family, LieAlgebra};
use crate::linalg::{as_real_columns, c, expm, frob, r, randn, rank_real, CMat};
use crate::orbit_reps::{format_partition, orbit_dim_complex, representative, OrbitPoint, OrbitSpec};

pub const RANK_REL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct CohomResult {
    pub algebra: String,
    pub orbit: String,
    pub dim_c_orbit: usize,
    pub compact_orbit_dim: usize,
    pub cohomogeneity: usize,
    pub samples_used: usize,
}

/// Ad(exp Z)X₀ for a seeded random Z with ‖Z‖_F = 1. The params field is
/// (1,1,1): X₀ is the unscaled representative.
pub fn generic_point(spec: &OrbitSpec, seed: u64) -> OrbitPoint {
    let alg = &spec.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = alg.zero();
    for b in alg.basis() {
        z += b * c(randn(&mut rng), randn(&mut rng));
    }
    let z = &z / r(frob(&z));
    let g = expm(&z);
    let gi = expm(&(-&z));
    let x0 = representative(spec).x;
    OrbitPoint { spec: spec.clone(), params: [1.0; 3], element: g * x0 * gi }
}

/// Real rank of K ↦ [K, X] over the compact real form.
pub fn compact_orbit_dim(alg: &LieAlgebra, x: &CMat) -> usize {
    let images: Vec<CMat> = alg.compact_basis().iter().map(|k| alg.bracket(k, x)).collect();
    rank_real(&as_real_columns(&images), RANK_REL)
}

/// 2·dim_C O − max over samples of the compact orbit dimension.
pub fn cohomogeneity(spec: &OrbitSpec, n_samples: usize, seed: u64) -> Result<CohomResult> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is needed".into()));
    }
    let alg = &spec.algebra;
    let mut dim_c = None;
    let mut best = 0;
    for k in 0..n_samples {
        let p = generic_point(spec, seed.wrapping_add(k as u64));
        let d = orbit_dim_complex(alg, &p.element, RANK_REL);
        match dim_c {
            None => dim_c = Some(d),
            Some(d0) if d0 != d => {
                return Err(Error::InconsistentSampling(format!(
                    "{}: complex orbit dimension {d0} then {d}",
                    spec.describe()
                )));
            }
            _ => {}
        }
        best = best.max(compact_orbit_dim(alg, &p.element));
    }
    let dim_c = dim_c.unwrap_or(0);
    if best > 2 * dim_c {
        return Err(Error::InconsistentSampling(format!("compact orbit dimension {best} exceeds 2·{dim_c}")));
    }
    Ok(CohomResult {
        algebra: alg.to_string(),
        orbit: format_partition(&spec.label),
        dim_c_orbit: dim_c,
        compact_orbit_dim: best,
        cohomogeneity: 2 * dim_c - best,
        samples_used: n_samples,
    })
}

/// One row of the reference cohomogeneity tables.
#[derive(Debug, Clone, Serialize)]
pub struct CohomRow {
    /// Cartan type, e.g. "A5".
    pub cartan: &'static str,
    pub orbit: &'static str,
    pub expected: usize,
    /// (family, n, partition) when a matrix model is available.
    pub instance: Option<(Family, usize, Vec<usize>)>,
}

fn row(cartan: &'static str, orbit: &'static str, expected: usize, fam: Family, n: usize, p: &[usize]) -> CohomRow {
    CohomRow { cartan, orbit, expected, instance: Some((fam, n, p.to_vec())) }
}

/// Classical height-three orbits at the smallest ranks of each row of the
/// reference table, with the listed cohomogeneities.
pub fn classical_rows() -> Vec<CohomRow> {
    use Family::*;
    vec![
        row("A5", "(2^3)", 3, SL, 6, &[2, 2, 2]),
        row("A6", "(2^3,1)", 3, SL, 7, &[2, 2, 2, 1]),
        row("A3", "(3,1)", 5, SL, 4, &[3, 1]),
        row("A4", "(3,1^2)", 4, SL, 5, &[3, 1, 1]),
        row("A5", "(3,1^3)", 4, SL, 6, &[3, 1, 1, 1]),
        row("B2", "(5)", 6, SO, 5, &[5]),
        row("B3", "(3,2^2)", 3, SO, 7, &[3, 2, 2]),
        row("B4", "(3,2^2,1^2)", 4, SO, 9, &[3, 2, 2, 1, 1]),
        row("B6", "(2^6,1)", 3, SO, 13, &[2, 2, 2, 2, 2, 2, 1]),
        row("C3", "(2^3)", 3, SP, 3, &[2, 2, 2]),
        row("C4", "(2^3,1^2)", 3, SP, 4, &[2, 2, 2, 1, 1]),
        row("D3", "(3^2)", 5, SO, 6, &[3, 3]),
        row("D4", "(3,2^2,1)", 4, SO, 8, &[3, 2, 2, 1]),
        row("D6", "(2^6)", 3, SO, 12, &[2, 2, 2, 2, 2, 2]),
    ]
}

/// Exceptional height-three orbits (weighted Dynkin labels); no matrix model.
pub fn exceptional_rows() -> Vec<CohomRow> {
    let ex = |cartan, orbit, expected| CohomRow { cartan, orbit, expected, instance: None };
    vec![
        ex("G2", "2 0 (short root 2)", 6),
        ex("F4", "0 1 0 0", 4),
        ex("E6", "0 0 0 1 0 0", 4),
        ex("E7", "2 0 0 0 0 0 0", 3),
        ex("E7", "0 0 0 0 0 1 0", 4),
        ex("E8", "0 1 0 0 0 0 0 0", 4),
    ]
}
