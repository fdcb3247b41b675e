use std::f64::consts::PI;
use std::fmt::Write;

use billiard_core::billiard::iterate;
use billiard_core::orbits::{
    break_degeneracy, closure_residual, find_birkhoff, strip_bound, strip_check, OrbitReport,
    SearchOptions, StripBound,
};
use billiard_core::verify::{run_suite, SuiteReport};
use billiard_core::{Error, Oval, OvalCertificate, PhasePoint, StabilityClass, SurfaceKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Text produced by a command, and the invariant failure it reports, if any.
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

/// 17 significant digits, independent of locale.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(std::io::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn start(oval: &Oval, s0: f64, psi0: f64) -> Result<PhasePoint, CliError> {
    Ok(PhasePoint::new(oval, s0, psi0)?)
}

pub fn simulate(cfg: &RunConfig, s0: f64, psi0: f64, steps: usize) -> Result<Outcome, CliError> {
    let oval = cfg.oval()?;
    let orbit = iterate(&oval, start(&oval, s0, psi0)?, steps)?;
    let mut out = String::from("i,s,psi,p\n");
    for (i, x) in orbit.iter().enumerate() {
        let p = -x.psi().cos();
        writeln!(out, "{i},{},{},{}", num(x.s()), num(x.psi()), num(p)).unwrap();
    }
    Ok(Outcome::ok(out))
}

/// `steps` points per initial condition, starting with the initial condition itself.
pub fn portrait(
    cfg: &RunConfig,
    grid_s: usize,
    grid_psi: usize,
    steps: usize,
) -> Result<Outcome, CliError> {
    if grid_s == 0 || grid_psi == 0 || steps == 0 {
        return Err(CliError::Config(
            "portrait needs grid sizes and steps of at least 1".into(),
        ));
    }
    let oval = cfg.oval()?;
    let l = oval.length();
    let starts: Vec<(f64, f64)> = (0..grid_s)
        .flat_map(|j| {
            (0..grid_psi).map(move |k| {
                (
                    l * j as f64 / grid_s as f64,
                    PI * (k as f64 + 0.5) / grid_psi as f64,
                )
            })
        })
        .collect();
    let blocks: Vec<Result<String, CliError>> = starts
        .par_iter()
        .map(|&(s0, psi0)| {
            let orbit = iterate(&oval, start(&oval, s0, psi0)?, steps - 1)?;
            let mut block = String::new();
            let head = format!("{},{}", num(s0), num(psi0));
            for (i, x) in orbit.iter().enumerate() {
                writeln!(block, "{head},{i},{},{}", num(x.s()), num(x.psi())).unwrap();
            }
            Ok(block)
        })
        .collect();
    let mut out = String::from("s0,psi0,i,s,psi\n");
    for b in blocks {
        out.push_str(&b?);
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct FoundOrbit {
    #[serde(flatten)]
    orbit: OrbitReport,
    closure_residual: f64,
    strip_check: bool,
    residue_discrepancy: f64,
}

#[derive(Serialize)]
struct FindReport {
    surface: SurfaceKind,
    m: usize,
    n: usize,
    seeds: usize,
    converged_seeds: usize,
    count: usize,
    strip_bound: StripBound,
    orbits: Vec<FoundOrbit>,
    failures: Vec<String>,
}

fn search_options(cfg: &RunConfig, seeds: usize) -> SearchOptions {
    SearchOptions {
        seeds,
        rng_seed: cfg.seed,
        tolerance: cfg.tolerances.newton,
        ..SearchOptions::default()
    }
}

pub fn find_orbits(cfg: &RunConfig, m: usize, n: usize, seeds: usize) -> Result<Outcome, CliError> {
    let oval = cfg.oval()?;
    let search = find_birkhoff(&oval, m, n, &search_options(cfg, seeds))?;
    let bound = strip_bound(&oval, n)?;
    let orbits = search
        .orbits
        .iter()
        .map(|o| {
            Ok(FoundOrbit {
                orbit: o.report(),
                closure_residual: closure_residual(&oval, o)?,
                strip_check: strip_check(o, &bound),
                residue_discrepancy: o.residue.discrepancy(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = FindReport {
        surface: oval.kind(),
        m,
        n,
        seeds,
        converged_seeds: search.converged_seeds,
        count: orbits.len(),
        strip_bound: bound,
        orbits,
        failures: search.failures,
    };
    Ok(Outcome::ok(json(&report)?))
}

#[derive(Serialize)]
struct VerifyReport {
    surface: SurfaceKind,
    seed: u64,
    #[serde(flatten)]
    suite: SuiteReport,
}

pub fn verify(cfg: &RunConfig, samples: usize) -> Result<Outcome, CliError> {
    let oval = cfg.oval()?;
    let suite = run_suite(&oval, samples, cfg.seed, &cfg.tolerances)?;
    let failed: Vec<&str> = suite
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    let failure = (!failed.is_empty()).then(|| failed.join(", "));
    let text = json(&VerifyReport {
        surface: oval.kind(),
        seed: cfg.seed,
        suite,
    })?;
    Ok(Outcome { text, failure })
}

#[derive(Serialize)]
struct PerturbReport {
    surface: SurfaceKind,
    m: usize,
    n: usize,
    index: usize,
    vertex_s: f64,
    width: f64,
    amplitude: f64,
    /// `max(|lambda|, |lambda'|, |lambda''|)`
    lambda_norm: f64,
    profile_l2: f64,
    old_trace: f64,
    new_trace: f64,
    old_class: StabilityClass,
    new_class: StabilityClass,
    moved_off_parabolic: bool,
    orbit_residual: f64,
    closure_residual: f64,
    certificate: OvalCertificate,
}

pub struct PerturbArgs {
    pub m: usize,
    pub n: usize,
    pub index: usize,
    pub seeds: usize,
    pub width: f64,
    pub amplitude: f64,
}

pub fn perturb(cfg: &RunConfig, a: &PerturbArgs) -> Result<Outcome, CliError> {
    let oval = cfg.oval()?;
    let search = find_birkhoff(&oval, a.m, a.n, &search_options(cfg, a.seeds))?;
    let orbit = search.orbits.get(a.index).ok_or_else(|| {
        Error::Domain(format!(
            "orbit index {} out of range, found {} orbits",
            a.index,
            search.orbits.len()
        ))
    })?;
    let broken = break_degeneracy(&oval, orbit, a.width, a.amplitude)?;
    let vertex_s = orbit.phase_points[0].s();
    let lambda_norm = oval.bump_profile(vertex_s, a.width, a.amplitude)?.c2_norm();
    let report = PerturbReport {
        surface: oval.kind(),
        m: a.m,
        n: a.n,
        index: a.index,
        vertex_s,
        width: a.width,
        amplitude: a.amplitude,
        lambda_norm,
        profile_l2: broken.profile_l2,
        old_trace: broken.old_trace,
        new_trace: broken.new_trace,
        old_class: orbit.class,
        new_class: broken.new_orbit.class,
        moved_off_parabolic: broken.moved_off_parabolic(),
        orbit_residual: broken.orbit_residual,
        closure_residual: closure_residual(&broken.new_oval, &broken.new_orbit)?,
        certificate: broken.new_oval.certificate(),
    };
    Ok(Outcome::ok(json(&report)?))
}

#[derive(Serialize)]
struct AreaReport {
    surface: SurfaceKind,
    length: f64,
    enclosed_area: f64,
    total_curvature: f64,
    certificate: OvalCertificate,
}

pub fn area(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let oval = cfg.oval()?;
    Ok(Outcome::ok(json(&AreaReport {
        surface: oval.kind(),
        length: oval.length(),
        enclosed_area: oval.enclosed_area(),
        total_curvature: oval.total_curvature(),
        certificate: oval.certificate(),
    })?))
}
