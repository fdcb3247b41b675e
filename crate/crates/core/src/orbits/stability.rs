use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::billiard::next_impact;
use crate::error::{Error, Result};
use crate::geometry::SurfaceKind;
use crate::orbits::{Configuration, PeriodicOrbit};
use crate::oval::Oval;

/// Half-width of the parabolic band around `|tr| = 2`.
pub const TRACE_BAND: f64 = 1e-8;
const STRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityClass {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityClass::Hyperbolic => "hyperbolic",
            StabilityClass::Elliptic => "elliptic",
            StabilityClass::Parabolic => "parabolic",
        })
    }
}

/// Stability class from the trace of the monodromy, and whether the orbit is nondegenerate.
pub fn classify(trace: f64) -> (StabilityClass, bool) {
    let t = trace.abs();
    if t > 2.0 + TRACE_BAND {
        (StabilityClass::Hyperbolic, true)
    } else if t < 2.0 - TRACE_BAND {
        (StabilityClass::Elliptic, true)
    } else {
        (StabilityClass::Parabolic, false)
    }
}

/// Both sides of `2 - tr = (-1)^(n+1) det H / prod b_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residue {
    pub lhs: f64,
    pub rhs: f64,
}

impl Residue {
    /// `|lhs - rhs| / max(1, |lhs|)`.
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(1.0)
    }
}

pub(crate) fn residue_from(n: usize, trace: f64, det: f64, b: &[f64]) -> Result<Residue> {
    if let Some((index, &value)) = b.iter().enumerate().find(|(_, v)| v.abs() < 1e-12) {
        return Err(Error::TwistDegeneracy { index, value });
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(Residue {
        lhs: 2.0 - trace,
        rhs: sign * det / b.iter().product::<f64>(),
    })
}

/// `tr DT^n`, recomputed from the orbit's configuration.
pub fn orbit_trace(oval: &Oval, orbit: &PeriodicOrbit) -> Result<f64> {
    Ok(PeriodicOrbit::from_configuration(oval, orbit.config.clone())?.trace)
}

/// Recomputes the residue from the oval, independently of the stored orbit data.
pub fn mackay_meiss_residue(oval: &Oval, orbit: &PeriodicOrbit) -> Result<Residue> {
    let fresh = PeriodicOrbit::from_configuration(oval, orbit.config.clone())?;
    Ok(fresh.residue)
}

/// Largest mismatch between `T(x_i)` and `x_{i+1}` around the orbit.
pub fn closure_residual(oval: &Oval, orbit: &PeriodicOrbit) -> Result<f64> {
    let n = orbit.phase_points.len();
    let l = oval.length();
    let mut worst = 0.0f64;
    for i in 0..n {
        let y = next_impact(oval, orbit.phase_points[i])?;
        let want = orbit.phase_points[(i + 1) % n];
        let mut ds = (y.s() - want.s()).rem_euclid(l);
        ds = ds.min(l - ds);
        worst = worst.max(ds).max((y.psi() - want.psi()).abs());
    }
    Ok(worst)
}

/// Lower bound `delta_n` on the largest reflection angle of any `n`-orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripBound {
    pub n: usize,
    pub delta: f64,
    /// Bound implied by the angle sum alone. On the sphere an inscribed polygon with
    /// interior angles `pi - 2 psi_i` has area `A_P = 2 pi - 2 sum psi_i < A`, so only
    /// `max psi_i > (2 pi - A) / (2n)` is guaranteed, and `delta` can exceed it.
    pub angle_sum_delta: f64,
    /// Sphere only.
    pub m0: Option<usize>,
    /// Sphere only.
    pub area: Option<f64>,
}

pub fn strip_bound(oval: &Oval, n: usize) -> Result<StripBound> {
    strip_bound_for_area(oval.kind(), n, oval.enclosed_area())
}

/// On the plane and hyperbolic plane `delta_n = pi / n`. On the sphere the angle sum of
/// the orbit polygon exceeds `(n - 2) pi` by its area, and `delta_n = pi / m0` with `m0`
/// the least integer exceeding both `n` and `pi n / (2 pi - A)`.
pub fn strip_bound_for_area(kind: SurfaceKind, n: usize, area: f64) -> Result<StripBound> {
    if n < 2 {
        return Err(Error::Domain(format!("strip bound needs n >= 2, got {n}")));
    }
    if kind != SurfaceKind::Sphere {
        return Ok(StripBound {
            n,
            delta: PI / n as f64,
            angle_sum_delta: PI / n as f64,
            m0: None,
            area: None,
        });
    }
    if !(area > 0.0 && area < TAU) {
        return Err(Error::InvalidOval(format!(
            "spherical oval area {area} is outside (0, 2pi)"
        )));
    }
    let ratio = PI * n as f64 / (TAU - area);
    let m0 = (n + 1).max(ratio.floor() as usize + 1);
    Ok(StripBound {
        n,
        delta: PI / m0 as f64,
        angle_sum_delta: (TAU - area) / (2.0 * n as f64),
        m0: Some(m0),
        area: Some(area),
    })
}

/// Whether the largest reflection angle lies in `[delta_n, pi - delta_n]` (to 1e-9).
pub fn strip_check(orbit: &PeriodicOrbit, bound: &StripBound) -> bool {
    let max = orbit.psi().into_iter().fold(f64::NEG_INFINITY, f64::max);
    max >= bound.delta - STRIP_TOL && max <= PI - bound.delta + STRIP_TOL
}

/// Outcome of perturbing the boundary near one vertex of an orbit.
#[derive(Debug, Clone)]
pub struct DegeneracyBreak {
    pub new_oval: Oval,
    pub new_orbit: PeriodicOrbit,
    pub old_trace: f64,
    pub new_trace: f64,
    /// `|grad W|` of the transported configuration on the new oval.
    pub orbit_residual: f64,
    /// `L2` norm of the profile over one period.
    pub profile_l2: f64,
}

impl DegeneracyBreak {
    pub fn moved_off_parabolic(&self) -> bool {
        (self.new_trace.abs() - 2.0).abs() > TRACE_BAND
    }
}

/// Bumps the boundary along its normal around vertex 0 of `orbit`. The bump is flat to
/// second order there, so the vertex, its tangent and the trajectory survive while the
/// curvature at the vertex, and with it the trace, changes.
pub fn break_degeneracy(
    oval: &Oval,
    orbit: &PeriodicOrbit,
    width: f64,
    amplitude: f64,
) -> Result<DegeneracyBreak> {
    let s = orbit.config.s();
    let l = oval.length();
    let v = s[0];
    for (i, &other) in s.iter().enumerate().skip(1) {
        let mut gap = (other - v).rem_euclid(l);
        gap = gap.min(l - gap);
        if gap <= 0.5 * width {
            return Err(Error::Usage(format!(
                "bump support of width {width} around vertex 0 contains vertex {i}"
            )));
        }
    }
    let profile = oval.bump_profile(v, width, amplitude)?;
    let profile_l2 = {
        let (a, b) = profile.support().unwrap_or((0.0, l));
        let k = 4096;
        let h = (b - a) / k as f64;
        (0..k)
            .map(|j| profile.value(a + (j as f64 + 0.5) * h).0.powi(2) * h)
            .sum::<f64>()
            .sqrt()
    };
    let new_oval = oval.normal_perturbation(profile)?;
    let moved = s
        .iter()
        .map(|&si| new_oval.arclength_from_base(si))
        .collect::<Result<Vec<_>>>()?;
    let config = Configuration::new(&new_oval, orbit.m(), moved)?;
    let new_orbit = PeriodicOrbit::from_configuration(&new_oval, config)?;
    Ok(DegeneracyBreak {
        old_trace: orbit.trace,
        new_trace: new_orbit.trace,
        orbit_residual: new_orbit.residual,
        profile_l2,
        new_orbit,
        new_oval,
    })
}
