//! Command-line front end: argument parsing, check reports and their text
//! and JSON renderings.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomogeneity::{classical_rows, cohomogeneity, exceptional_rows, CohomRow};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::invariants::{eta, k_squared, k_squared_of, zeta, CartanType};
use crate::kahler_geometry::{omega_fd_check, verify_hyperkahler};
use crate::lie_core::{build_algebra, Family, FormChoice};
use crate::linalg::{frob, random_complex, random_unitary, CMat};
use crate::orbit_reps::{
    factor_point, format_partition, jordan_partition, parse_partition, representative, scaled_point, OrbitKind,
    OrbitPoint, OrbitSpec,
};
use crate::potentials::{
    generic_potential, kappa_chain, quartic_solve, so7_pde_residuals, so7_potential, so7_potential_zeta, eta_tilde,
    PotentialSpec,
};
use crate::standard_forms::{skew_standard, svd_complex, takagi, FormResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// A real printed with 17 significant digits in JSON (null if not finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let num: serde_json::Number = format!("{:.16e}", self.0).parse().map_err(serde::ser::Error::custom)?;
        num.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Real, D::Error> {
        let v: Option<f64> = Option::deserialize(d)?;
        Ok(Real(v.unwrap_or(f64::NAN)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Named {
    pub name: String,
    pub value: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub inputs: BTreeMap<String, String>,
    pub residuals: Vec<Named>,
    /// Computed quantities that are reported but not thresholded.
    pub values: Vec<Named>,
    pub tolerance: Real,
    pub status: Status,
    /// The identity or table entry being checked.
    pub anchor: String,
}

impl CheckReport {
    pub fn new(check_name: &str, anchor: &str, tolerance: f64) -> CheckReport {
        CheckReport {
            check_name: check_name.into(),
            inputs: BTreeMap::new(),
            residuals: Vec::new(),
            values: Vec::new(),
            tolerance: Real(tolerance),
            status: Status::Pass,
            anchor: anchor.into(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push(Named { name: name.into(), value: Real(value) });
    }

    pub fn value(&mut self, name: &str, value: f64) {
        self.values.push(Named { name: name.into(), value: Real(value) });
    }

    /// PASS iff every residual is finite and ≤ tolerance.
    pub fn finish(mut self) -> Self {
        let ok = self.residuals.iter().all(|r| r.value.0.is_finite() && r.value.0 <= self.tolerance.0);
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn skipped(mut self, why: &str) -> Self {
        self.status = Status::Skipped;
        self.inputs.insert("skipped".into(), why.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("[{}] {}", self.status, self.check_name);
        for (k, v) in &self.inputs {
            s += &format!(" {k}={v}");
        }
        s += &format!("  tol={}\n", fmt_real(self.tolerance.0));
        s += &format!("    {}\n", self.anchor);
        for r in &self.residuals {
            s += &format!("    residual {:<30} {}\n", r.name, fmt_real(r.value.0));
        }
        for r in &self.values {
            s += &format!("    value    {:<30} {}\n", r.name, fmt_real(r.value.0));
        }
        s
    }
}

/// At least 12 significant digits; plain decimals for moderate magnitudes.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-3..9).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.12e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraArg {
    Sl,
    So,
    Sp,
}

impl From<AlgebraArg> for Family {
    fn from(a: AlgebraArg) -> Family {
        match a {
            AlgebraArg::Sl => Family::SL,
            AlgebraArg::So => Family::SO,
            AlgebraArg::Sp => Family::SP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialFamily {
    So7,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Height3,
    Cohom3,
    Ksquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Symmetric,
    Skew,
    General,
}

#[derive(Debug, Parser)]
#[command(name = "hkorbits", version, about = "Checks for nilpotent orbits, their invariants and hyperKähler potentials")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Matrix family.
    #[arg(long, global = true, value_enum)]
    pub algebra: Option<AlgebraArg>,
    /// sl(n), so(n): matrix size; sp(n): rank (matrices are 2n×2n).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Jordan partition, e.g. 3,2,2 (trailing ones may be omitted).
    #[arg(long, global = true)]
    pub orbit: Option<String>,
    /// Slice parameters r,s,t.
    #[arg(long, global = true)]
    pub params: Option<String>,
    /// Potential constant c ≥ 0.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub c: f64,
    /// Override the check's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// One JSON object per report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 5)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket relations of the orbit representative's standard triple.
    VerifyTriples,
    /// η (and ζ on so(7)) at X(r,s,t) against their closed forms.
    Invariants,
    /// Potential value with internal cross-checks.
    Potential {
        #[arg(long, value_enum, default_value = "generic")]
        family: PotentialFamily,
    },
    /// J² = −1, metric positivity, Σ = ω_J + iω_K, dω_I = 0 and the ω_I oracle.
    CheckHk,
    /// Residuals of the so(7) equations for the potential family.
    PdeSo7,
    /// Cohomogeneity of the compact group on the orbit.
    Cohomogeneity,
    /// Reference tables with computed columns.
    Tables {
        /// All classical cohomogeneity rows.
        #[arg(long)]
        classical: bool,
        #[arg(long, value_enum)]
        kind: Option<TableKind>,
    },
    /// Normal form of a seeded random matrix and its invariance.
    StandardForm {
        #[arg(long, value_enum, default_value = "symmetric")]
        kind: MatrixKind,
    },
}

fn arg_err(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

impl Common {
    fn spec(&self) -> Result<OrbitSpec> {
        let fam: Family = self.algebra.ok_or_else(|| arg_err("--algebra is required"))?.into();
        let n = self.n.ok_or_else(|| arg_err("--n is required"))?;
        let orbit = self.orbit.as_deref().ok_or_else(|| arg_err("--orbit is required"))?;
        let mut p = parse_partition(orbit)?;
        let size = if fam == Family::SP { 2 * n } else { n };
        let sum: usize = p.iter().sum();
        if sum < size {
            p.extend(std::iter::repeat_n(1, size - sum));
        }
        OrbitSpec::new(fam, n, &p)
    }

    fn params(&self) -> Result<[f64; 3]> {
        let s = self.params.as_deref().ok_or_else(|| arg_err("--params r,s,t is required"))?;
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| arg_err(format!("bad number '{x}' in --params"))))
            .collect::<Result<_>>()?;
        match v.len() {
            3 => Ok([v[0], v[1], v[2]]),
            1 => Ok([v[0], v[0], v[0]]),
            _ => Err(arg_err("--params takes r,s,t")),
        }
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn base(&self, name: &str, anchor: &str, default_tol: f64) -> CheckReport {
        let mut r = CheckReport::new(name, anchor, self.tol_or(default_tol));
        if let Some(a) = self.algebra {
            let fam: Family = a.into();
            r = r.input("algebra", format!("{}({})", fam.name(), self.n.map(|n| n.to_string()).unwrap_or_default()));
        }
        r
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// the reports. Returns the process exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                eprint!("{text}");
            }
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(reports) => {
            for r in &reports {
                let _ = if cli.common.json { writeln!(out, "{}", r.to_json()) } else { write!(out, "{}", r.to_text()) };
            }
            if reports.iter().any(|r| r.status == Status::Fail) { 1 } else { 0 }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Vec<CheckReport>> {
    let c = &cli.common;
    match &cli.command {
        Command::VerifyTriples => verify_triples(c).map(|r| vec![r]),
        Command::Invariants => invariants_check(c).map(|r| vec![r]),
        Command::Potential { family } => potential_check(c, *family).map(|r| vec![r]),
        Command::CheckHk => check_hk(c),
        Command::PdeSo7 => pde_so7(c).map(|r| vec![r]),
        Command::Cohomogeneity => cohomogeneity_check(c).map(|r| vec![r]),
        Command::Tables { classical, kind } => {
            let kind = match (classical, kind) {
                (_, Some(k)) => Some(*k),
                (true, None) => None,
                (false, None) => return Err(arg_err("tables needs --classical or --kind")),
            };
            emit_table(c, kind)
        }
        Command::StandardForm { kind } => standard_form_check(c, *kind),
    }
}

fn verify_triples(c: &Common) -> Result<CheckReport> {
    let spec = c.spec()?;
    let t = representative(&spec);
    let [hx, hy, xy] = t.residuals();
    let mut r = c.base("verify-triples", "[H,X]=2X, [H,Y]=-2Y, [X,Y]=H", 1e-10).input("orbit", format_partition(&spec.label));
    r.residual("[H,X]-2X", hx);
    r.residual("[H,Y]+2Y", hy);
    r.residual("[X,Y]-H", xy);
    r.residual("X outside algebra", spec.algebra.defining_residual(&t.x));
    Ok(r.finish())
}

fn slice_point(c: &Common, spec: &OrbitSpec) -> Result<OrbitPoint> {
    let p = c.params()?;
    if spec.kind == OrbitKind::SlFewPairs(1) {
        return factor_point(spec, p[1]);
    }
    scaled_point(spec, p[0], p[1], p[2])
}

fn potential_for(spec: &OrbitSpec, cc: f64) -> Result<PotentialSpec> {
    if cc < 0.0 {
        return Err(Error::NegativeConstant(cc));
    }
    if spec.is_so7_special() {
        return Ok(PotentialSpec::so7(cc));
    }
    let k2 = k_squared_of(&spec.algebra)?.value();
    if spec.is_generic_cohom3() {
        return Ok(PotentialSpec::generic(k2, cc));
    }
    if spec.kind == OrbitKind::SlFewPairs(1) && spec.size() == 2 {
        return Ok(PotentialSpec::sl2_factor(k2, cc));
    }
    Err(arg_err(format!("no potential is implemented for {}", spec.describe())))
}

fn invariants_check(c: &Common) -> Result<CheckReport> {
    let spec = c.spec()?;
    let pt = slice_point(c, &spec)?;
    let pot = potential_for(&spec, 0.0)?;
    let alg = &spec.algebra;
    let e = eta(alg, &pt.element)?;
    let model = pot.eta_params(pt.params);
    let mut r = c
        .base("invariants", "eta_i at X(r,s,t) against the slice polynomials", 1e-9)
        .input("orbit", format_partition(&spec.label))
        .input("params", format!("{:?}", pt.params));
    for i in 0..3 {
        r.residual(&format!("eta{} relative", i + 1), (e[i] - model[i]).abs() / model[i].abs());
        r.value(&format!("eta{}", i + 1), e[i]);
    }
    if spec.is_so7_special() {
        let z = zeta(alg, &pt.element)?;
        let [rr, s, t] = pt.params;
        let expect = [e[0] / 5.0, e[1] / 5.0, 4.0 * rr.powi(4)];
        let _ = (s, t);
        for i in 0..3 {
            r.residual(&format!("zeta{} relative", i + 1), (z[i] - expect[i]).abs() / expect[i].abs());
            r.value(&format!("zeta{}", i + 1), z[i]);
        }
    }
    Ok(r.finish())
}

fn potential_check(c: &Common, family: PotentialFamily) -> Result<CheckReport> {
    let p = c.params()?;
    let cc = c.c;
    let [rr, s, t] = p;
    match family {
        PotentialFamily::So7 => {
            let v = so7_potential(rr, s, t, cc)?;
            let z1 = 2.0 * (2.0 * rr * rr + s * s + t * t);
            let z2 = 4.0 * (2.0 * rr.powi(4) + 4.0 * rr * rr * t * t + (s * s + t * t).powi(2));
            let z3 = 4.0 * rr.powi(4);
            let vz = so7_potential_zeta([z1, z2, z3], cc)?;
            let mut r = c
                .base("potential", "so(7) family in (r,s,t) and in zeta coordinates", 1e-8)
                .input("family", "so7")
                .input("params", format!("{p:?}"))
                .input("c", cc);
            r.residual("zeta form vs (r,s,t) form", (v - vz).abs() / v.abs());
            r.value("rho", v);
            Ok(r.finish())
        }
        PotentialFamily::Generic => {
            let k2 = match (c.algebra, c.n) {
                (Some(a), Some(n)) => {
                    let fam: Family = a.into();
                    let form = if fam == Family::SO { FormChoice::AntiDiagonal } else { FormChoice::Standard };
                    k_squared_of(&build_algebra(fam, n, form)?)?.value()
                }
                _ => return Err(arg_err("the generic potential needs --algebra and --n for k^2")),
            };
            let v = generic_potential(rr, s, t, k2, cc)?;
            let mut r = c
                .base("potential", "sum of sl2 factor potentials; kappa chain and quartic at c = 0", 1e-8)
                .input("family", "generic")
                .input("params", format!("{p:?}"))
                .input("c", cc)
                .input("k2", k2);
            r.value("rho", v);
            if cc == 0.0 {
                let eta = [
                    4.0 * k2 * (rr.powi(2) + s.powi(2) + t.powi(2)),
                    8.0 * k2 * (rr.powi(4) + s.powi(4) + t.powi(4)),
                    16.0 * k2 * (rr.powi(6) + s.powi(6) + t.powi(6)),
                ];
                let kc = kappa_chain(eta, k2)?;
                let lq = quartic_solve(eta_tilde(eta, k2))?;
                r.residual("kappa chain vs closed form", (kc.rho - v).abs() / v);
                r.residual("quartic root vs closed form", (4.0 * k2 * lq - v).abs() / v);
                r.value("kappa_chain_rho", kc.rho);
                r.value("kappa_chain_fallback", if kc.used_fallback { 1.0 } else { 0.0 });
            }
            Ok(r.finish())
        }
    }
}

fn check_hk(c: &Common) -> Result<Vec<CheckReport>> {
    let spec = c.spec()?;
    let pt = slice_point(c, &spec)?;
    let pot = potential_for(&spec, c.c)?;
    let tol = Tolerances::default();
    let rep = verify_hyperkahler(&pot, &pt, &tol, 20, c.seed)?;
    let mut a = c
        .base("check-hk", "J^2 = -1, g > 0, Sigma = omega_J + i omega_K, d omega_I = 0", 1e-5)
        .input("orbit", format_partition(&spec.label))
        .input("params", format!("{:?}", pt.params))
        .input("c", c.c)
        .input("seed", c.seed);
    for (name, v) in rep.residuals() {
        a.residual(&name, v);
    }
    a.value("min_metric_eigenvalue", rep.min_metric_eigenvalue);
    a.value("real_dimension", rep.real_dimension as f64);
    let fd = omega_fd_check(&pot, &pt, 10, c.seed, &tol)?;
    let mut b = c
        .base("omega-fd", "omega_I formula against -1/2 d I d rho by finite differences", 1e-4)
        .input("orbit", format_partition(&spec.label))
        .input("params", format!("{:?}", pt.params))
        .input("c", c.c)
        .input("seed", c.seed);
    b.residual("omega_I relative gap", fd);
    Ok(vec![a.finish(), b.finish()])
}

fn pde_so7(c: &Common) -> Result<CheckReport> {
    let p = c.params()?;
    let res = so7_pde_residuals(c.c, p, &Tolerances::default())?;
    let mut r = CheckReport::new("pde-so7", "so(7) equations for rho(r,s,t) with finite-difference partials", c.tol_or(1e-6))
        .input("params", format!("{p:?}"))
        .input("c", c.c);
    for (name, v) in res {
        r.residual(&name, v);
    }
    r.value("rho", so7_potential(p[0], p[1], p[2], c.c)?);
    Ok(r.finish())
}

fn cohomogeneity_check(c: &Common) -> Result<CheckReport> {
    let spec = c.spec()?;
    let res = cohomogeneity(&spec, c.samples.max(1), c.seed)?;
    let mut r = c
        .base("cohomogeneity", "2 dim_C O - dim of a principal compact orbit", 0.0)
        .input("orbit", format_partition(&spec.label))
        .input("samples", c.samples)
        .input("seed", c.seed);
    r.value("cohomogeneity", res.cohomogeneity as f64);
    r.value("dim_C_orbit", res.dim_c_orbit as f64);
    r.value("compact_orbit_dim", res.compact_orbit_dim as f64);
    match spec.expected_cohomogeneity {
        Some(e) => {
            r.residual("computed - expected", (res.cohomogeneity as f64 - e as f64).abs());
            r.value("expected", e as f64);
            Ok(r.finish())
        }
        None => Ok(r.skipped("no reference value")),
    }
}

fn cohom_row_report(c: &Common, row: &CohomRow, check: &str) -> Result<CheckReport> {
    let r = CheckReport::new(check, "reference cohomogeneity table", c.tol_or(0.0))
        .input("type", row.cartan)
        .input("orbit", row.orbit);
    let Some((fam, n, p)) = &row.instance else {
        let mut r = r;
        r.value("expected", row.expected as f64);
        return Ok(r.skipped("no matrix model"));
    };
    let spec = OrbitSpec::new(*fam, *n, p)?;
    let res = cohomogeneity(&spec, c.samples.max(3), c.seed)?;
    let mut r = r.input("algebra", spec.algebra.to_string());
    r.residual("computed - expected", (res.cohomogeneity as f64 - row.expected as f64).abs());
    r.value("computed", res.cohomogeneity as f64);
    r.value("expected", row.expected as f64);
    Ok(r.finish())
}

/// Reference rows with a computed column where a matrix model exists.
pub fn emit_table(c: &Common, kind: Option<TableKind>) -> Result<Vec<CheckReport>> {
    match kind {
        None => {
            let mut out = Vec::new();
            for row in classical_rows() {
                out.push(cohom_row_report(c, &row, "tables/classical")?);
            }
            Ok(out)
        }
        Some(TableKind::Cohom3) => {
            let mut out = Vec::new();
            for row in classical_rows().iter().filter(|r| r.expected == 3) {
                out.push(cohom_row_report(c, row, "tables/cohom3")?);
            }
            for row in exceptional_rows().iter().filter(|r| r.expected == 3) {
                out.push(cohom_row_report(c, row, "tables/cohom3")?);
            }
            Ok(out)
        }
        Some(TableKind::Height3) => {
            let mut out = Vec::new();
            for row in classical_rows() {
                let (fam, n, p) = row.instance.clone().expect("classical rows have instances");
                let spec = OrbitSpec::new(fam, n, &p)?;
                let x = representative(&spec).x;
                let mut jp = jordan_partition(&x)?;
                jp.sort_unstable_by(|a, b| b.cmp(a));
                let mut r = CheckReport::new("tables/height3", "height-three orbit and its representative", c.tol_or(0.0))
                    .input("type", row.cartan)
                    .input("orbit", row.orbit)
                    .input("representative_partition", format_partition(&jp));
                r.residual("partition mismatch", if jp == p { 0.0 } else { 1.0 });
                r.value("height", spec.height.unwrap_or(0) as f64);
                out.push(r.finish());
            }
            for row in exceptional_rows() {
                out.push(
                    CheckReport::new("tables/height3", "height-three orbit and its representative", 0.0)
                        .input("type", row.cartan)
                        .input("orbit", row.orbit)
                        .skipped("no matrix model"),
                );
            }
            Ok(out)
        }
        Some(TableKind::Ksquared) => {
            let mut out = Vec::new();
            let mut algs = Vec::new();
            for n in 2..=8 {
                algs.push((Family::SL, n));
            }
            for n in 5..=14 {
                algs.push((Family::SO, n));
            }
            for n in 1..=4 {
                algs.push((Family::SP, n));
            }
            for (fam, n) in algs {
                let form = if fam == Family::SO { FormChoice::AntiDiagonal } else { FormChoice::Standard };
                let alg = build_algebra(fam, n, form)?;
                let t = CartanType::of(&alg);
                let expected = k_squared(t)?;
                let computed = alg.k_squared_oracle().unwrap_or(f64::NAN);
                let mut r = CheckReport::new("tables/ksquared", "<E, sigma E>/4 for the highest root vector", c.tol_or(1e-9))
                    .input("type", t)
                    .input("algebra", alg.to_string())
                    .input("expected", expected);
                r.residual("computed - expected", (computed - expected.value()).abs());
                r.value("computed", computed);
                out.push(r.finish());
            }
            for t in [CartanType::G2, CartanType::F4, CartanType::E6, CartanType::E7, CartanType::E8] {
                let mut r = CheckReport::new("tables/ksquared", "<E, sigma E>/4 for the highest root vector", 0.0)
                    .input("type", t)
                    .input("expected", k_squared(t)?)
                    .input("computed", "n/a");
                r.value("expected", k_squared(t)?.value());
                out.push(r.skipped("no matrix model"));
            }
            Ok(out)
        }
    }
}

/// The orbit-determining entries of a normal form, descending.
pub fn canonical_entries(kind: MatrixKind, f: &FormResult) -> Vec<f64> {
    match kind {
        MatrixKind::Skew => f.block_entries().0,
        _ => f.diagonal_entries().0,
    }
}

pub fn normal_form(kind: MatrixKind, z: &CMat) -> Result<FormResult> {
    match kind {
        MatrixKind::Symmetric => takagi(z),
        MatrixKind::Skew => skew_standard(z),
        MatrixKind::General => svd_complex(z),
    }
}

/// Seeded random input of the given symmetry type.
pub fn random_input(kind: MatrixKind, n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let a = random_complex(rng, n, n);
    match kind {
        MatrixKind::Symmetric => &a + a.transpose(),
        MatrixKind::Skew => &a - a.transpose(),
        MatrixKind::General => a,
    }
}

/// g·Z for a random group element: gZgᵗ, or g Z h̄ᵗ for general matrices.
pub fn random_action(kind: MatrixKind, z: &CMat, rng: &mut ChaCha8Rng) -> CMat {
    let n = z.nrows();
    let g = random_unitary(rng, n);
    match kind {
        MatrixKind::General => {
            let h = random_unitary(rng, n);
            &g * z * h.adjoint()
        }
        _ => &g * z * g.transpose(),
    }
}

fn standard_form_check(c: &Common, kind: MatrixKind) -> Result<Vec<CheckReport>> {
    let n = c.n.ok_or_else(|| arg_err("--n is required"))?;
    if n == 0 {
        return Err(arg_err("--n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let z = random_input(kind, n, &mut rng);
    let f = normal_form(kind, &z)?;
    let base = canonical_entries(kind, &f);
    let kind_name = format!("{kind:?}").to_lowercase();
    let mut rec = CheckReport::new("standard-form/reconstruction", "normal form reproduces the input", c.tol_or(1e-10))
        .input("kind", &kind_name)
        .input("n", n)
        .input("seed", c.seed);
    rec.residual("relative reconstruction", f.residual / (1.0 + frob(&z)));
    for (i, v) in base.iter().enumerate() {
        rec.value(&format!("entry{}", i + 1), *v);
    }
    let mut inv = CheckReport::new("standard-form/invariance", "canonical entries are group invariants", c.tol_or(1e-8))
        .input("kind", &kind_name)
        .input("n", n)
        .input("seed", c.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let moved = random_action(kind, &z, &mut rng);
        let e = canonical_entries(kind, &normal_form(kind, &moved)?);
        for (a, b) in e.iter().zip(&base) {
            worst = worst.max((a - b).abs() / (1.0 + b.abs()));
        }
    }
    inv.residual("max entry change over 5 actions", worst);
    Ok(vec![rec.finish(), inv.finish()])
}
