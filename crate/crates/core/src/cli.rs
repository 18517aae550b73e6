//! Configuration, presets and the report-producing commands behind the
//! `kowalewski` binary.
//!
//! A run is configured by a flat `key = value` file, then by `--set key=value`
//! overrides, then by the dedicated flags. The `preset` key is applied before
//! any other key regardless of where it appears.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{relative_residual, weil_add, GammaPoint, QuarticCurve, QuarticPoint};
use crate::lie::{
    integrate, Curvature, GroupElement, Inertia, IntegrateOptions, ModelParams, MomentumState, Tolerances, Trajectory,
};
use crate::painleve::{classify, MeromorphicClass, RatioParams, SpectrumOptions};
use crate::quadrature::{quadrature_residual, QuadratureOptions};
use crate::reduction::{quartic_p, K2Convention, ReductionReport, Rescaling};
use crate::{Error, Result};

/// Exit code for a run whose checks failed.
pub const EXIT_CHECK_FAILED: i32 = 2;
/// Exit code for a configuration or runtime error.
pub const EXIT_ERROR: i32 = 1;

/// Named parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Euler,
    Lagrange,
    Spherical,
    Kowalewski,
    M0Limit,
    Lemniscate,
}

impl Preset {
    pub const ALL: [Preset; 6] =
        [Preset::Euler, Preset::Lagrange, Preset::Spherical, Preset::Kowalewski, Preset::M0Limit, Preset::Lemniscate];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Euler => "euler",
            Preset::Lagrange => "lagrange",
            Preset::Spherical => "spherical",
            Preset::Kowalewski => "kowalewski",
            Preset::M0Limit => "m0-limit",
            Preset::Lemniscate => "lemniscate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

/// Which quartic the `elliptic` command examines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuarticSpec {
    Fixed([f64; 5]),
    /// `samples` random quartics drawn from the seed.
    Random,
}

/// Values of one grid axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridAxis(pub Vec<f64>);

impl GridAxis {
    /// `a:b:step`, or values separated by `|`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad grid axis {s:?}"));
        if s.contains(':') {
            let parts: Vec<f64> = s.split(':').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let [a, b, step] = parts[..] else { return Err(bad()) };
            if !(step > 0.0) || b < a {
                return Err(bad());
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok(GridAxis((0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()))
        } else {
            Ok(GridAxis(s.split('|').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?))
        }
    }
}

/// Parameter grid for `painleve-scan`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub m: GridAxis,
    pub a1: GridAxis,
    pub a3: GridAxis,
    pub k: GridAxis,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            m: GridAxis::parse("0:2:0.1").unwrap(),
            a1: GridAxis(vec![1.0]),
            a3: GridAxis(vec![0.0, 0.5]),
            k: GridAxis(vec![0.0]),
        }
    }
}

impl GridSpec {
    /// `m=0:2:0.1,a1=1,a3=0|0.5,k=-1|0|1`; unspecified axes keep their defaults.
    pub fn parse(s: &str) -> Result<Self> {
        let mut g = GridSpec::default();
        for item in s.split(',').filter(|x| !x.trim().is_empty()) {
            let (key, val) =
                item.split_once('=').ok_or_else(|| Error::Config(format!("grid item {item:?} needs key=value")))?;
            let axis = GridAxis::parse(val)?;
            match key.trim() {
                "m" => g.m = axis,
                "a1" => g.a1 = axis,
                "a3" => g.a3 = axis,
                "k" => g.k = axis,
                other => return Err(Error::Config(format!("unknown grid key {other:?}"))),
            }
        }
        Ok(g)
    }

    pub fn points(&self) -> Result<Vec<RatioParams>> {
        let mut out = Vec::new();
        for &m in &self.m.0 {
            for &a1 in &self.a1.0 {
                for &a3 in &self.a3.0 {
                    for &k in &self.k.0 {
                        if k.fract() != 0.0 {
                            return Err(Error::Config(format!("grid k must be an integer, got {k}")));
                        }
                        out.push(RatioParams::new(m, 1.0, a1, a3, Curvature::from_i64(k as i64)?)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Everything a command needs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: Preset,
    pub k: Curvature,
    pub inertia: Inertia,
    pub a: [f64; 3],
    /// Explicit initial state `h1,h2,h3,H1,H2,H3`; drawn from the seed otherwise.
    pub state: Option<[f64; 6]>,
    pub state_scale: f64,
    pub seed: u64,
    pub t0: f64,
    pub tf: f64,
    pub rtol: f64,
    pub atol: f64,
    pub sample_dt: f64,
    /// Sample spacing used by `verify`, fine enough for the quadrature stencil.
    pub verify_dt: f64,
    pub frames: bool,
    pub drift_tol: f64,
    pub out: PathBuf,
    pub quartic: QuarticSpec,
    pub samples: usize,
    pub order: usize,
    pub grid: GridSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut c = RunConfig {
            preset: Preset::Kowalewski,
            k: Curvature::Flat,
            inertia: Inertia::Finite([2.0, 2.0, 1.0]),
            a: [1.0, 0.0, 0.0],
            state: None,
            state_scale: 0.8,
            seed: 0,
            t0: 0.0,
            tf: 20.0,
            rtol: 1e-10,
            atol: 1e-12,
            sample_dt: 0.01,
            verify_dt: 0.001,
            frames: false,
            drift_tol: 1e-7,
            out: PathBuf::from("out"),
            quartic: QuarticSpec::Random,
            samples: 100,
            order: 8,
            grid: GridSpec::default(),
        };
        c.apply_preset(Preset::Kowalewski);
        c
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: expected a number, got {v:?}")))
}

fn parse_list<const N: usize>(key: &str, v: &str) -> Result<[f64; N]> {
    let vals: Vec<f64> = v.split(',').map(|x| parse_f64(key, x)).collect::<Result<_>>()?;
    vals.try_into().map_err(|_| Error::Config(format!("{key}: expected {N} comma-separated numbers")))
}

impl RunConfig {
    pub fn apply_preset(&mut self, preset: Preset) {
        self.preset = preset;
        self.quartic = QuarticSpec::Random;
        match preset {
            Preset::Euler => {
                self.inertia = Inertia::Finite([1.0, 2.0, 3.0]);
                self.a = [0.0; 3];
            }
            Preset::Lagrange => {
                self.inertia = Inertia::Finite([2.0, 2.0, 1.0]);
                self.a = [0.0, 0.0, 1.0];
            }
            Preset::Spherical => {
                self.inertia = Inertia::Finite([1.0, 1.0, 1.0]);
                self.a = [0.6, 0.3, 0.8];
            }
            Preset::Kowalewski => {
                self.inertia = Inertia::Finite([2.0, 2.0, 1.0]);
                self.a = [1.0, 0.0, 0.0];
            }
            Preset::M0Limit => {
                self.inertia = Inertia::AxialLimit;
                self.a = [0.8, 0.6, 0.0];
            }
            Preset::Lemniscate => {
                self.inertia = Inertia::Finite([2.0, 2.0, 1.0]);
                self.a = [1.0, 0.0, 0.0];
                self.quartic = QuarticSpec::Fixed([1.0, 0.0, 0.0, 0.0, -1.0]);
            }
        }
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "preset" => self.apply_preset(Preset::parse(v)?),
            "k" => self.k = Curvature::from_i64(v.parse().map_err(|_| Error::Config(format!("k: bad value {v:?}")))?)?,
            "c" => self.inertia = Inertia::Finite(parse_list(key, v)?),
            "inertia" => {
                self.inertia = match v {
                    "axial" => Inertia::AxialLimit,
                    "transverse" => Inertia::TransverseLimit,
                    _ => Inertia::Finite(parse_list(key, v)?),
                }
            }
            "a" => self.a = parse_list(key, v)?,
            "state" => self.state = if v == "random" { None } else { Some(parse_list(key, v)?) },
            "scale" => self.state_scale = parse_f64(key, v)?,
            "seed" => self.seed = v.parse().map_err(|_| Error::Config(format!("seed: bad value {v:?}")))?,
            "t0" => self.t0 = parse_f64(key, v)?,
            "tf" => self.tf = parse_f64(key, v)?,
            "rtol" => self.rtol = parse_f64(key, v)?,
            "atol" => self.atol = parse_f64(key, v)?,
            "dt" => self.sample_dt = parse_f64(key, v)?,
            "verify_dt" => self.verify_dt = parse_f64(key, v)?,
            "frames" => self.frames = v.parse().map_err(|_| Error::Config(format!("frames: bad value {v:?}")))?,
            "drift_tol" => self.drift_tol = parse_f64(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "quartic" => {
                self.quartic = if v == "random" { QuarticSpec::Random } else { QuarticSpec::Fixed(parse_list(key, v)?) }
            }
            "samples" => self.samples = v.parse().map_err(|_| Error::Config(format!("samples: bad value {v:?}")))?,
            "order" => self.order = v.parse().map_err(|_| Error::Config(format!("order: bad value {v:?}")))?,
            "grid" => self.grid = GridSpec::parse(v)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Build from config-file text and ordered overrides. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_sources(file: Option<&str>, overrides: &[(String, String)]) -> Result<Self> {
        let mut pairs = Vec::new();
        if let Some(text) = file {
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
                pairs.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        pairs.extend(overrides.iter().cloned());
        let mut cfg = RunConfig::default();
        if let Some((_, p)) = pairs.iter().rev().find(|(k, _)| k == "preset") {
            cfg.apply_preset(Preset::parse(p)?);
        }
        for (k, v) in pairs.iter().filter(|(k, _)| k != "preset") {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tf > self.t0) {
            return Err(Error::Config(format!("need tf > t0, got t0 = {}, tf = {}", self.t0, self.tf)));
        }
        for (name, v) in
            [("rtol", self.rtol), ("atol", self.atol), ("dt", self.sample_dt), ("verify_dt", self.verify_dt)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        self.params().map(|_| ())
    }

    pub fn params(&self) -> Result<ModelParams> {
        match self.inertia {
            Inertia::Finite(c) => ModelParams::new(c, self.a, self.k),
            other => ModelParams::limit(other, self.a, self.k),
        }
    }

    pub fn initial_state(&self) -> MomentumState {
        match self.state {
            Some(v) => MomentumState::from_slice(&v),
            None => MomentumState::random(&mut ChaCha8Rng::seed_from_u64(self.seed), self.state_scale),
        }
    }

    pub fn integrate_options(&self, sample_dt: f64) -> IntegrateOptions {
        IntegrateOptions {
            tolerances: Tolerances { rtol: self.rtol, atol: self.atol, ..Tolerances::default() },
            sample_dt,
            ..IntegrateOptions::default()
        }
    }

    fn trajectory(&self, sample_dt: f64) -> Result<Trajectory> {
        let params = self.params()?;
        let frame = self.frames.then(|| GroupElement::identity(self.k));
        integrate(
            &self.initial_state(),
            &params,
            (self.t0, self.tf),
            &self.integrate_options(sample_dt),
            frame.as_ref(),
        )
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Conserved-quantity summary of a simulation.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationSummary {
    pub preset: Preset,
    pub params: ModelParams,
    pub initial_state: [f64; 6],
    pub t_span: [f64; 2],
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub drift: BTreeMap<String, f64>,
    pub max_frame_defect: Option<f64>,
    pub drift_tol: f64,
    pub pass: bool,
}

/// Integrate and write `trajectory.csv` and `summary.json` under `out`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulationSummary> {
    let traj = cfg.trajectory(cfg.sample_dt)?;
    let drift = traj.drift();
    let summary = SimulationSummary {
        preset: cfg.preset,
        params: traj.params,
        initial_state: traj.states[0].to_array(),
        t_span: [cfg.t0, cfg.tf],
        samples: traj.len(),
        accepted_steps: traj.stats.accepted,
        rejected_steps: traj.stats.rejected,
        pass: drift.max() <= cfg.drift_tol,
        drift: drift.drifts,
        max_frame_defect: traj.max_frame_defect(),
        drift_tol: cfg.drift_tol,
    };
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("trajectory.csv"), traj.to_csv())?;
    write_json(&cfg.out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// One thresholded check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.to_string(), value, threshold, pass: value <= threshold }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: ModelParams,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Checks that do not apply to these parameters, with the reason.
    pub skipped: Vec<String>,
    pub pass: bool,
}

/// Residual checks on a sampled trajectory: conservation, the reduction
/// relations, the quadrature and the elliptic identities of its quartic.
pub fn verify_trajectory(traj: &Trajectory, drift_tol: f64, seed: u64) -> Result<VerifyReport> {
    let mut checks = vec![Check::new("drift", traj.drift().max(), drift_tol)];
    let mut skipped = Vec::new();
    match Rescaling::new(&traj.params, K2Convention::Derived) {
        Ok(r) => {
            let red = ReductionReport::from_trajectory(traj, K2Convention::Derived)?;
            checks.push(Check::new("variety", red.variety.max, 1e-6));
            checks.push(Check::new("extremal_ode", red.extremal_ode.max, 1e-8));
            checks.push(Check::new("zeta", red.zeta.max, 1e-8));
            checks.push(Check::new("recovery", red.recovery.max, 1e-6));
            let quad = quadrature_residual(traj, &QuadratureOptions::default())?;
            checks.push(Check::new("quadrature_sq", quad.max_residual_sq[0].max(quad.max_residual_sq[1]), 1e-5));
            checks.push(Check::new("quadrature_sum", quad.max_residual_sum, 1e-5));
            let curve = quartic_p(&r.constants(&traj.states[0]));
            checks.push(Check::new("elliptic_identities", elliptic_identity_residual(&curve, seed, 20)?, 1e-10));
        }
        Err(_) => {
            skipped.push("reduction, quadrature and elliptic checks need c1 = c2 = 2 c3, a3 = 0 and a != 0".to_string())
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { params: traj.params, seed, checks, skipped, pass })
}

/// Integrate on the fine grid, verify, and write `verify.json` under `out`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let traj = cfg.trajectory(cfg.verify_dt)?;
    let report = verify_trajectory(&traj, cfg.drift_tol, cfg.seed)?;
    fs::create_dir_all(&cfg.out)?;
    write_json(&cfg.out.join("verify.json"), &report)?;
    Ok(report)
}

fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))
}

/// Largest residual of the biquadratic and addition identities at `samples`
/// random points of `curve`.
pub fn elliptic_identity_residual(curve: &QuarticCurve, seed: u64, samples: usize) -> Result<f64> {
    Ok(elliptic_residuals(curve, seed, samples)?.values().fold(0.0, |a, &b| a.max(b)))
}

fn elliptic_residuals(curve: &QuarticCurve, seed: u64, samples: usize) -> Result<BTreeMap<String, f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = curve.weierstrass();
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        let e = out.entry(name.to_string()).or_insert(0.0);
        *e = e.max(v);
    };
    for _ in 0..samples {
        let (x, y, theta, xi) =
            (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let fam = curve.theta_family(theta);
        put("companion", curve.companion_residual(x, y));
        put("pencil", fam.pencil_residual(x, y));
        put("discriminant", fam.discriminant_residual(x));
        put("p_theta_shift", relative_residual(curve.p_theta(curve.theta_of_xi(xi)), w.rhs(xi) * 4.0));
        let m = QuarticPoint::principal(curve, x);
        let gp = GammaPoint::principal(&w, xi);
        match weil_add(curve, &gp, &m) {
            Ok(n) => put("weil_closure", n.residual(curve)),
            Err(Error::Degenerate(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticSummary {
    /// `[re, im]` of `A, B, C, D, E`.
    pub coefficients: [Complex64; 5],
    pub g2: Complex64,
    pub g3: Complex64,
    /// `R̂` vanishes at every sample.
    pub r_hat_vanishes: bool,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticReport {
    pub seed: u64,
    pub samples: usize,
    pub quartics: Vec<QuarticSummary>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Invariants and identity residuals; writes `elliptic.json` under `out`.
pub fn cmd_elliptic(cfg: &RunConfig) -> Result<EllipticReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let curves = match cfg.quartic {
        QuarticSpec::Fixed(c) => vec![QuarticCurve::from_real(c)?],
        QuarticSpec::Random => (0..cfg.samples.max(1))
            .map(|_| QuarticCurve::new(std::array::from_fn(|_| random_point(&mut rng))))
            .collect::<Result<_>>()?,
    };
    let per_curve = if matches!(cfg.quartic, QuarticSpec::Fixed(_)) { cfg.samples.max(1) } else { 20 };
    let mut quartics = Vec::new();
    for (i, curve) in curves.iter().enumerate() {
        let sub_seed = cfg.seed.wrapping_add(i as u64 + 1);
        let residuals = elliptic_residuals(curve, sub_seed, per_curve)?;
        let mut prng = ChaCha8Rng::seed_from_u64(sub_seed);
        let r_hat_vanishes = (0..per_curve).all(|_| {
            let (x, y) = (random_point(&mut prng), random_point(&mut prng));
            curve.r_hat(x, y).norm() <= 1e-14 * curve.scale()
        });
        let w = curve.weierstrass();
        quartics.push(QuarticSummary {
            coefficients: curve.coefficients(),
            g2: w.g2,
            g3: w.g3,
            r_hat_vanishes,
            residuals,
        });
    }
    let max_residual = quartics.iter().flat_map(|q| q.residuals.values()).fold(0.0, |a: f64, &b| a.max(b));
    let tolerance = 1e-10;
    let report = EllipticReport {
        seed: cfg.seed,
        samples: per_curve,
        quartics,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
    };
    fs::create_dir_all(&cfg.out)?;
    write_json(&cfg.out.join("elliptic.json"), &report)?;
    Ok(report)
}

/// One CSV row of the scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub m: f64,
    pub a1: f64,
    pub a3: f64,
    pub k: i64,
    /// `a+`, `a-`, `b+`, `b-`, or `-` when no Laurent analysis is needed.
    pub branch: String,
    pub resonances: String,
    pub free_constants: Option<usize>,
    pub class: MeromorphicClass,
}

impl ScanRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.m,
            self.a1,
            self.a3,
            self.k,
            self.branch,
            self.resonances,
            self.free_constants.map(|c| c.to_string()).unwrap_or_default(),
            self.class
        )
    }
}

pub const SCAN_HEADER: &str = "m,a1,a3,k,branch,resonances,free_constants,class";

/// Classify every grid point, in parallel, one row per leading-order branch.
pub fn painleve_scan(grid: &GridSpec, seed: u64) -> Result<Vec<ScanRow>> {
    let opts = SpectrumOptions { seed, ..SpectrumOptions::default() };
    let rows: Vec<Vec<ScanRow>> = grid
        .points()?
        .par_iter()
        .map(|p| {
            let c = classify(p, &opts)?;
            let row = |branch: String, resonances: String, free_constants| ScanRow {
                m: p.m,
                a1: p.a1,
                a3: p.a3,
                k: p.k.value(),
                branch,
                resonances,
                free_constants,
                class: c.class,
            };
            Ok(match &c.spectrum {
                None => vec![row("-".into(), String::new(), None)],
                Some(s) => {
                    s.branches.iter().map(|b| row(b.label(), b.resonance_list(), Some(b.free_constants))).collect()
                }
            })
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Run the scan over `cfg.grid` and write `painleve_scan.csv` under `out`.
pub fn cmd_painleve_scan(cfg: &RunConfig) -> Result<Vec<ScanRow>> {
    let rows = painleve_scan(&cfg.grid, cfg.seed)?;
    let mut s = String::from(SCAN_HEADER);
    s.push('\n');
    for r in &rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("painleve_scan.csv"), s)?;
    Ok(rows)
}

/// Command-line interface of the `kowalewski` binary.
#[derive(Debug, Parser)]
#[command(name = "kowalewski", version, about = "Heavy-top and elastic-curve dynamics on E3, SO(4), SO(1,3)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate and write the trajectory CSV and a drift summary.
    Simulate(CommonArgs),
    /// Check reduction, quadrature and elliptic residuals along a trajectory.
    Verify(CommonArgs),
    /// Report invariants and identity residuals of quartics.
    Elliptic(CommonArgs),
    /// Classify a parameter grid by Laurent-series analysis.
    PainleveScan(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long)]
    pub tf: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `m=a:b:step,a1=...,a3=...,k=...`; lists use `|`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Flat `key = value` file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `key=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl CommonArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let text = self.config.as_ref().map(fs::read_to_string).transpose()?;
        let mut overrides = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("--set {s:?} needs key=value")))?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        let flags = [
            ("preset", self.preset.clone()),
            ("k", self.k.map(|v| v.to_string())),
            ("tf", self.tf.map(|v| v.to_string())),
            ("rtol", self.rtol.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("grid", self.grid.clone()),
        ];
        overrides.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
        RunConfig::from_sources(text.as_deref(), &overrides)
    }
}

/// Run a parsed command line, print a short summary and return the exit code.
pub fn run(cli: &Cli) -> i32 {
    let (args, name) = match &cli.command {
        Command::Simulate(a) => (a, "simulate"),
        Command::Verify(a) => (a, "verify"),
        Command::Elliptic(a) => (a, "elliptic"),
        Command::PainleveScan(a) => (a, "painleve-scan"),
    };
    let outcome = args.to_config().and_then(|cfg| match &cli.command {
        Command::Simulate(_) => cmd_simulate(&cfg).map(|s| {
            println!(
                "{name}: {} samples, max drift {:.3e} (tol {:.1e})",
                s.samples,
                s.drift.values().fold(0.0f64, |a, &b| a.max(b)),
                s.drift_tol
            );
            s.pass
        }),
        Command::Verify(_) => cmd_verify(&cfg).map(|r| {
            for c in &r.checks {
                println!(
                    "{} {:<20} {:.3e} <= {:.1e}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                );
            }
            for s in &r.skipped {
                println!("skipped: {s}");
            }
            r.pass
        }),
        Command::Elliptic(_) => cmd_elliptic(&cfg).map(|r| {
            println!("{name}: {} quartic(s), max residual {:.3e}", r.quartics.len(), r.max_residual);
            r.pass
        }),
        Command::PainleveScan(_) => cmd_painleve_scan(&cfg).map(|rows| {
            println!("{name}: {} rows written to {}", rows.len(), cfg.out.join("painleve_scan.csv").display());
            true
        }),
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
