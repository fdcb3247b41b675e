//! Acceptance checks, one PASS/FAIL line each. Derivatives are compared against finite
//! differences computed here from curve positions alone, not from library derivatives.

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use billiard_core::billiard::{dt_matrix, gen_derivs, gen_hessian, next_impact};
use billiard_core::orbits::{
    break_degeneracy, closure_residual, find_birkhoff, mackay_meiss_residue, strip_bound,
    SearchOptions,
};
use billiard_core::{
    Configuration, Oval, OvalSpec, PeriodicOrbit, PerturbationProfile, PhasePoint, StabilityClass,
    SurfaceKind,
};
use nalgebra::{Matrix2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RESOLUTION: usize = 2048;

/// Criteria that no correct implementation can meet. They still run and print FAIL, but
/// do not fail the test target. The spherical strip bound `pi / m0` assumes
/// `A_P >= 2 pi - sum psi_i`, while Gauss-Bonnet with interior angles `pi - 2 psi_i` gives
/// `A_P = 2 pi - 2 sum psi_i`; criterion 10 prints a found orbit that violates it.
const UNATTAINABLE: [usize; 1] = [10];

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------- fixtures

fn polar_spec(kind: SurfaceKind) -> OvalSpec {
    let c0 = if kind == SurfaceKind::Euclidean {
        1.0
    } else {
        0.8
    };
    OvalSpec::polar(kind, c0, vec![[0.0, 0.0], [0.05, 0.0]])
}

/// Polar ovals with a third harmonic, so that no reflection symmetry is left.
fn generic_spec(kind: SurfaceKind) -> OvalSpec {
    let c0 = if kind == SurfaceKind::Euclidean {
        1.0
    } else {
        0.8
    };
    OvalSpec::polar(kind, c0, vec![[0.0, 0.0], [0.05, 0.0], [0.0, 0.02]])
}

fn build(spec: &OvalSpec) -> Oval {
    Oval::build(spec, RESOLUTION).expect("test oval")
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed);
    r.set_stream(stream);
    r
}

// ---------------------------------------------------------------- oracles

/// Geodesic distance between model points, from the ambient coordinates.
fn distance(kind: SurfaceKind, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    match kind {
        SurfaceKind::Euclidean => (a - b).norm(),
        SurfaceKind::Sphere => a.cross(b).norm().atan2(a.dot(b)),
        SurfaceKind::Hyperbolic => {
            let w = a - b;
            let q = (w.x * w.x + w.y * w.y - w.z * w.z).max(0.0);
            2.0 * (0.5 * q.sqrt()).asinh()
        }
    }
}

fn chord_length(oval: &Oval, s0: f64, s1: f64) -> f64 {
    distance(
        oval.kind(),
        oval.position(s0).coords(),
        oval.position(s1).coords(),
    )
}

/// Fourth-order central difference.
fn diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn second_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Random chord with endpoints at least a tenth of the curve apart.
fn random_chord(oval: &Oval, r: &mut ChaCha8Rng) -> (f64, f64) {
    let l = oval.length();
    let s0 = r.random_range(0.0..l);
    (s0, s0 + r.random_range(0.1..0.9) * l)
}

fn random_phase(oval: &Oval, r: &mut ChaCha8Rng, margin: f64) -> PhasePoint {
    let s = r.random_range(0.0..oval.length());
    PhasePoint::new(oval, s, r.random_range(margin..PI - margin)).unwrap()
}

fn gap_mod(a: f64, b: f64, l: f64) -> f64 {
    let d = (a - b).rem_euclid(l);
    d.min(l - d)
}

/// Central-difference Jacobian of the map in `(s, psi)`.
fn fd_jacobian(oval: &Oval, x: PhasePoint, h: f64) -> Matrix2<f64> {
    let l = oval.length();
    let y = next_impact(oval, x).unwrap();
    let image = |s: f64, psi: f64| {
        let z = next_impact(oval, PhasePoint::new(oval, s, psi).unwrap()).unwrap();
        let ds = (z.s() - y.s() + 0.5 * l).rem_euclid(l) - 0.5 * l;
        (y.s() + ds, z.psi())
    };
    let (s, psi) = (x.s(), x.psi());
    let (a1, c1) = image(s + h, psi);
    let (a0, c0) = image(s - h, psi);
    let (b1, e1) = image(s, psi + h);
    let (b0, e0) = image(s, psi - h);
    Matrix2::new(
        (a1 - a0) / (2.0 * h),
        (b1 - b0) / (2.0 * h),
        (c1 - c0) / (2.0 * h),
        (e1 - e0) / (2.0 * h),
    )
}

// ---------------------------------------------------------------- criteria

fn generating_first_derivatives() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&polar_spec(kind));
        let mut r = rng(100 + k as u64);
        for _ in 0..500 {
            let (s0, s1) = random_chord(&oval, &mut r);
            let (d0, d1) = gen_derivs(&oval, s0, s1).unwrap();
            let fd0 = diff(|s| chord_length(&oval, s, s1), s0, 1e-3);
            let fd1 = diff(|s| chord_length(&oval, s0, s), s1, 1e-3);
            worst = worst.max((d0 - fd0).abs()).max((d1 - fd1).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst < 1e-6 && secs < 5.0,
        format!("max abs error {worst:.2e} over 1500 chords in {secs:.2} s"),
    )
}

fn generating_second_derivatives() -> Outcome {
    let mut worst = 0.0f64;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&polar_spec(kind));
        let mut r = rng(100 + k as u64);
        for _ in 0..500 {
            let (s0, s1) = random_chord(&oval, &mut r);
            let an = gen_hessian(&oval, s0, s1).unwrap();
            let fd00 = second_diff(|s| chord_length(&oval, s, s1), s0, 1e-3);
            let fd11 = second_diff(|s| chord_length(&oval, s0, s), s1, 1e-3);
            let fd01 = diff(|a| diff(|b| chord_length(&oval, a, b), s1, 1e-3), s0, 1e-3);
            worst = worst
                .max((an.h00 - fd00).abs())
                .max((an.h01 - fd01).abs())
                .max((an.h11 - fd11).abs());
        }
    }
    ensure(
        worst < 1e-5,
        format!("max abs error {worst:.2e} over 1500 chords"),
    )
}

fn jacobian_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&generic_spec(kind));
        let mut r = rng(200 + k as u64);
        for _ in 0..300 {
            let x = random_phase(&oval, &mut r, 0.05);
            let j = dt_matrix(&oval, x).unwrap().to_matrix();
            let fd = fd_jacobian(&oval, x, 1e-6);
            worst = worst.max((j - fd).norm() / j.norm());
        }
    }
    ensure(
        worst < 1e-5,
        format!("max relative error {worst:.2e} over 900 phase points"),
    )
}

fn measure_preservation() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_momentum = 0.0f64;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&generic_spec(kind));
        let mut r = rng(300 + k as u64);
        for _ in 0..1000 {
            let x = random_phase(&oval, &mut r, 0.01);
            let y = next_impact(&oval, x).unwrap();
            let j = dt_matrix(&oval, x).unwrap();
            let want = x.psi().sin() / y.psi().sin();
            worst = worst.max((j.det() - want).abs());
            let m = j.in_momentum(x.psi(), y.psi());
            worst_momentum = worst_momentum.max((m.determinant() - 1.0).abs());
        }
    }
    ensure(
        worst < 1e-8 && worst_momentum < 1e-8,
        format!(
            "max |det - sin psi0/sin psi1| {worst:.2e}, max |det_(s,p) - 1| {worst_momentum:.2e}"
        ),
    )
}

fn reversibility() -> Outcome {
    let mut worst = 0.0f64;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&generic_spec(kind));
        let mut r = rng(400 + k as u64);
        for _ in 0..1000 {
            let x = random_phase(&oval, &mut r, 0.01);
            let y = next_impact(&oval, x).unwrap();
            let z = next_impact(&oval, y.reversed()).unwrap().reversed();
            worst = worst
                .max(gap_mod(z.s(), x.s(), oval.length()))
                .max((z.psi() - x.psi()).abs());
        }
    }
    ensure(
        worst < 1e-8,
        format!("max |ITIT(x) - x| {worst:.2e} over 3000 phase points"),
    )
}

fn twist() -> Outcome {
    let mut min_analytic = f64::INFINITY;
    let mut min_fd = f64::INFINITY;
    let mut tested = 0;
    for (k, kind) in SurfaceKind::ALL.into_iter().enumerate() {
        let oval = build(&generic_spec(kind));
        let mut r = rng(500 + k as u64);
        for i in 0..1000 {
            let x = random_phase(&oval, &mut r, 0.01);
            min_analytic = min_analytic.min(dt_matrix(&oval, x).unwrap().b);
            if i % 5 == 0 {
                min_fd = min_fd.min(fd_jacobian(&oval, x, 1e-7)[(0, 1)]);
            }
            tested += 1;
        }
    }
    ensure(
        min_analytic > 0.0 && min_fd > 0.0,
        format!("min ds1/dpsi0 {min_analytic:.3e} (closed form), {min_fd:.3e} (differences) at {tested} points"),
    )
}

fn circle_integrability() -> Outcome {
    let mut psi_drift = 0.0f64;
    let mut advance_drift = 0.0f64;
    let mut trace_err = 0.0f64;
    for kind in SurfaceKind::ALL {
        let oval = build(&OvalSpec::circle(kind, 0.7));
        let l = oval.length();
        let mut x = PhasePoint::new(&oval, 0.3, 1.1).unwrap();
        let psi0 = x.psi();
        let mut first = None;
        for _ in 0..10_000 {
            let y = next_impact(&oval, x).unwrap();
            let advance = (y.s() - x.s()).rem_euclid(l);
            let a0 = *first.get_or_insert(advance);
            advance_drift = advance_drift.max(gap_mod(advance, a0, l));
            psi_drift = psi_drift.max((y.psi() - psi0).abs());
            x = y;
        }
        for (m, n) in [(1, 2), (1, 3), (1, 4), (2, 5), (3, 7), (1, 9)] {
            let config = Configuration::uniform(&oval, m, n, 0.4).unwrap();
            let orbit = PeriodicOrbit::from_configuration(&oval, config).unwrap();
            trace_err = trace_err.max((orbit.trace - 2.0).abs());
        }
    }
    ensure(
        psi_drift < 1e-9 && advance_drift < 1e-8 && trace_err < 1e-6,
        format!("psi drift {psi_drift:.2e}, advance drift {advance_drift:.2e}, max |tr - 2| {trace_err:.2e}"),
    )
}

/// Orbits found for the existence criterion, shared by the criteria that inspect them.
struct Found {
    oval: Oval,
    m: usize,
    n: usize,
    orbits: Vec<PeriodicOrbit>,
}

fn birkhoff_ovals() -> Vec<(&'static str, Oval)> {
    vec![
        ("ellipse", build(&OvalSpec::ellipse(1.2, 1.0))),
        ("sphere polar", build(&polar_spec(SurfaceKind::Sphere))),
        (
            "hyperbolic polar",
            build(&polar_spec(SurfaceKind::Hyperbolic)),
        ),
    ]
}

/// Vertex sets of two orbits differ somewhere by more than `tol`, whatever the start vertex.
fn distinct(a: &PeriodicOrbit, b: &PeriodicOrbit, l: f64, tol: f64) -> bool {
    let sa: Vec<f64> = a.phase_points.iter().map(|x| x.s()).collect();
    let sb: Vec<f64> = b.phase_points.iter().map(|x| x.s()).collect();
    !sa.iter()
        .all(|x| sb.iter().any(|y| gap_mod(*x, *y, l) < tol))
}

fn birkhoff_existence(found: &mut Vec<Found>) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, oval) in birkhoff_ovals() {
        for (m, n) in [(1, 2), (1, 3), (1, 4)] {
            let search = find_birkhoff(&oval, m, n, &SearchOptions::default()).unwrap();
            let orbits = search.orbits;
            let l = oval.length();
            let pairwise = (0..orbits.len())
                .all(|i| (0..i).all(|j| distinct(&orbits[i], &orbits[j], l, 1e-6)));
            if orbits.len() < 2 || !pairwise {
                ok = false;
                notes.push(format!("{name} ({m},{n}): {} distinct", orbits.len()));
            }
            if name == "ellipse" && (m, n) == (1, 2) {
                let mut classes: Vec<StabilityClass> = orbits.iter().map(|o| o.class).collect();
                classes.sort_by_key(|c| c.to_string());
                if classes != [StabilityClass::Elliptic, StabilityClass::Hyperbolic] {
                    ok = false;
                    notes.push(format!("ellipse (1,2) classes {classes:?}"));
                }
            }
            found.push(Found {
                oval: oval.clone(),
                m,
                n,
                orbits,
            });
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let counts: Vec<String> = found
        .iter()
        .map(|f| {
            let parabolic = f.orbits.iter().filter(|o| o.degenerate).count();
            format!(
                "{}({},{})={}/{}p",
                f.oval.kind(),
                f.m,
                f.n,
                f.orbits.len(),
                parabolic
            )
        })
        .collect();
    notes.insert(
        0,
        format!(
            "distinct/parabolic orbits {} in {secs:.2} s",
            counts.join(" ")
        ),
    );
    ensure(ok && secs < 30.0, notes.join("; "))
}

fn residue_identity(found: &[Found]) -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for f in found {
        for o in f.orbits.iter().filter(|o| !o.degenerate) {
            let res = mackay_meiss_residue(&f.oval, o).map_err(|e| e.to_string())?;
            worst = worst.max((res.lhs - res.rhs).abs() / res.lhs.abs().max(1.0));
            checked += 1;
        }
    }
    ensure(
        checked > 0 && worst < 1e-6,
        format!("max relative discrepancy {worst:.2e} over {checked} nondegenerate orbits"),
    )
}

/// Least integer above both `n` and `pi n / (2 pi - area)`.
fn sphere_m0(n: usize, area: f64) -> usize {
    let bound = PI * n as f64 / (TAU - area);
    (n + 1..).find(|&m| m as f64 > bound).unwrap()
}

/// Area of a spherical polygon, as a fan of triangles from `c`.
fn spherical_area(c: &Vector3<f64>, v: &[Vector3<f64>]) -> f64 {
    (0..v.len())
        .map(|i| {
            let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
            2.0 * c
                .dot(&a.cross(b))
                .atan2(1.0 + c.dot(a) + a.dot(b) + b.dot(c))
        })
        .sum::<f64>()
        .abs()
}

fn compact_strip(found: &[Found]) -> Outcome {
    let mut margin = f64::INFINITY;
    let mut ok = true;
    let mut violations = Vec::new();
    for f in found {
        let bound = strip_bound(&f.oval, f.n).map_err(|e| e.to_string())?;
        let area = f.oval.enclosed_area();
        let delta = match f.oval.kind() {
            SurfaceKind::Sphere => PI / sphere_m0(f.n, area) as f64,
            _ => PI / f.n as f64,
        };
        ok &= (bound.delta - delta).abs() < 1e-15;
        for o in &f.orbits {
            let psi = o.psi();
            let max = psi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            margin = margin.min(max - delta);
            if max < delta - 1e-9 {
                ok = false;
                let mut note = format!(
                    "{} ({},{}) {} orbit: max psi {max:.6} < delta {delta:.6}",
                    f.oval.kind(),
                    f.m,
                    f.n,
                    o.class
                );
                if f.oval.kind() == SurfaceKind::Sphere {
                    let verts: Vec<_> = o
                        .config
                        .s()
                        .iter()
                        .map(|&s| *f.oval.position(s).coords())
                        .collect();
                    let poly = spherical_area(&Vector3::z(), &verts);
                    let sum: f64 = psi.iter().sum();
                    let guaranteed = (TAU - area) / (2.0 * f.n as f64);
                    note += &format!(
                        " [polygon area {poly:.6} = 2pi - 2 sum psi = {:.6} < oval area {area:.6}, \
                         so the orbit is consistent with Gauss-Bonnet; the angle sum only \
                         guarantees max psi >= {guaranteed:.6}, {}]",
                        TAU - 2.0 * sum,
                        if max >= guaranteed { "which holds" } else { "which also fails" }
                    );
                }
                violations.push(note);
            }
        }
    }
    let mut detail = format!("smallest max(psi) - delta_n {margin:.3e}");
    if !violations.is_empty() {
        detail += &format!("; {}", violations.join("; "));
    }
    ensure(ok, detail)
}

fn degeneracy_breaking() -> Outcome {
    let oval = build(&OvalSpec::circle(SurfaceKind::Euclidean, 1.0));
    let orbit =
        PeriodicOrbit::from_configuration(&oval, Configuration::uniform(&oval, 1, 2, 0.0).unwrap())
            .unwrap();
    let bumped = break_degeneracy(&oval, &orbit, 0.5, 0.05).map_err(|e| e.to_string())?;
    let closure = closure_residual(&bumped.new_oval, &bumped.new_orbit).unwrap();
    let flat = break_degeneracy(&oval, &orbit, 0.5, 0.0).map_err(|e| e.to_string())?;
    let shift = (bumped.new_trace - 2.0).abs();
    let unchanged = (flat.new_trace - flat.old_trace).abs();
    ensure(
        shift > 1e-4 && closure < 1e-8 && bumped.orbit_residual < 1e-8 && unchanged <= 1e-12,
        format!(
            "|tr - 2| {shift:.3e}, closure {closure:.2e}, zero-bump trace change {unchanged:.1e}"
        ),
    )
}

/// Rescales `profile` so that `max(|lambda|, |lambda'|, |lambda''|)` is `size`.
fn scaled(profile: PerturbationProfile, size: f64) -> PerturbationProfile {
    let k = size / profile.c2_norm();
    match profile {
        PerturbationProfile::Constant { value } => {
            PerturbationProfile::Constant { value: value * k }
        }
        PerturbationProfile::Fourier { period, coeffs } => PerturbationProfile::Fourier {
            period,
            coeffs: coeffs.iter().map(|[a, b]| [a * k, b * k]).collect(),
        },
        PerturbationProfile::Bump {
            center,
            width,
            amplitude,
            period,
        } => PerturbationProfile::Bump {
            center,
            width,
            amplitude: amplitude * k,
            period,
        },
    }
}

fn perturbed_ovality() -> Outcome {
    let mut specs = vec![OvalSpec::ellipse(1.2, 1.0)];
    for kind in SurfaceKind::ALL {
        specs.push(OvalSpec::circle(kind, 0.7));
        specs.push(polar_spec(kind));
        specs.push(generic_spec(kind));
    }
    let mut total = 0;
    let mut failed = Vec::new();
    let mut min_k = f64::INFINITY;
    for spec in &specs {
        let oval = build(spec);
        let l = oval.length();
        let mut profiles = vec![
            PerturbationProfile::Constant { value: 0.01 },
            PerturbationProfile::Constant { value: -0.01 },
        ];
        for j in 1..=6 {
            for [a, b] in [[1.0, 0.0], [0.0, -1.0], [-0.6, 0.8]] {
                let mut coeffs = vec![[0.0, 0.0]; j];
                coeffs[j - 1] = [a, b];
                profiles.push(PerturbationProfile::Fourier { period: l, coeffs });
            }
        }
        profiles.push(PerturbationProfile::Fourier {
            period: l,
            coeffs: vec![[0.3, -0.2], [0.1, 0.4], [-0.2, 0.1]],
        });
        for (center, width, sign) in [(0.0, 0.5, 1.0), (1.3, 1.0, -1.0), (2.9, 0.3, 1.0)] {
            profiles.push(oval.bump_profile(center, width, sign).unwrap());
        }
        for p in profiles {
            let p = scaled(p, 0.01);
            assert!(p.c2_norm() <= 0.01 * (1.0 + 1e-12));
            total += 1;
            match oval.normal_perturbation(p) {
                Ok(pert) if pert.certificate().certifies() => {
                    min_k = min_k.min(pert.certificate().min_curvature);
                }
                Ok(_) => failed.push(format!("{:?}: uncertified", spec.curve)),
                Err(e) => failed.push(format!("{:?}: {e}", spec.curve)),
            }
        }
    }
    ensure(
        failed.is_empty(),
        format!(
            "{}/{total} perturbations certified, min curvature {min_k:.3}{}",
            total - failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; {}", failed.join("; "))
            }
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("billiard-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{"surface": "hyperbolic",
            "curve": {"family": "polar", "c0": 0.8, "coeffs": [[0, 0], [0.05, 0], [0, 0.02]]},
            "resolution": 1024, "seed": 7}"#,
    )
    .map_err(|e| e.to_string())?;
    let commands: [&[&str]; 6] = [
        &["simulate", "--s0", "0.4", "--psi0", "1.2", "--steps", "500"],
        &[
            "portrait",
            "--grid-s",
            "5",
            "--grid-psi",
            "5",
            "--steps",
            "40",
        ],
        &["find-orbits", "--m", "2", "--n", "5", "--seeds", "8"],
        &["verify", "--samples", "200"],
        &[
            "perturb",
            "--m",
            "1",
            "--n",
            "3",
            "--width",
            "0.4",
            "--amplitude",
            "0.02",
        ],
        &["area"],
    ];
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_billiard"))
            .args(args)
            .arg("--config")
            .arg(Path::new(&config))
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    let mut bytes = 0;
    for args in commands {
        let (a, b) = (run(args)?, run(args)?);
        if a != b {
            return Err(format!("{} output differs between runs", args[0]));
        }
        bytes += a.len();
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("6 commands, {bytes} bytes each run, identical"))
}

// ---------------------------------------------------------------- runner

fn report(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("{tag} {number:>2} {name}: {detail}");
    ok
}

fn main() -> ExitCode {
    let mut found = Vec::new();
    let results = [
        report(
            1,
            "generating function first derivatives",
            generating_first_derivatives,
        ),
        report(
            2,
            "generating function second derivatives",
            generating_second_derivatives,
        ),
        report(3, "closed-form Jacobian", jacobian_closed_form),
        report(4, "measure preservation", measure_preservation),
        report(5, "reversibility", reversibility),
        report(6, "twist", twist),
        report(7, "circular billiard integrability", circle_integrability),
        report(8, "Birkhoff orbit existence", || {
            birkhoff_existence(&mut found)
        }),
        report(9, "residue identity", || residue_identity(&found)),
        report(10, "compact strip", || compact_strip(&found)),
        report(11, "degeneracy breaking", degeneracy_breaking),
        report(12, "perturbed ovality", perturbed_ovality),
        report(13, "determinism", determinism),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    let unexpected: Vec<usize> = (1..=results.len())
        .filter(|i| !results[i - 1] && !UNATTAINABLE.contains(i))
        .collect();
    for i in UNATTAINABLE.iter().filter(|&&i| !results[i - 1]) {
        println!("criterion {i} fails as documented: the stated bound is stronger than what holds");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
