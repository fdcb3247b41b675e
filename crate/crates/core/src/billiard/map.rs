use std::f64::consts::{PI, TAU};

use crate::billiard::{chord_raw, ChordRaw, PhasePoint, WHISPER_BAND};
use crate::error::{Error, Result};
use crate::oval::Oval;
use crate::root::brent;

/// Arclength around the launch point that is never accepted as the next impact.
const DEFLATION: f64 = 1e-7;
const RESIDUAL_TOL: f64 = 1e-12;

/// Next impact together with the chord that reaches it.
pub(crate) fn impact_chord(oval: &Oval, x: PhasePoint) -> Result<(PhasePoint, ChordRaw)> {
    let psi = x.psi();
    if !(WHISPER_BAND..=PI - WHISPER_BAND).contains(&psi) {
        return Err(Error::WhisperOrbit { psi });
    }
    let kind = oval.kind();
    let t0 = oval.param_at(x.s());
    let f0 = oval.frame_raw(t0);
    let dir = f0.tangent * psi.cos() + f0.normal * psi.sin();
    // The shot geodesic is the surface cut by the plane through the origin spanned by
    // the launch point and its direction.
    let normal = f0.point.cross(&dir).normalize();
    let residual = |t: f64| normal.dot(&oval.point_at_param(t));

    let speed = oval.speed_at_param(t0);
    let window = DEFLATION / speed;
    let sigma = normal.dot(&f0.tangent).signum();

    let samples = oval.samples();
    let count = samples.len();
    let dt = TAU / count as f64;
    let lo = t0 + window;
    let hi = t0 + TAU - window;
    let first = (lo / dt).floor() as i64 + 1;

    let mut prev_t = lo;
    if residual(lo) * sigma <= 0.0 {
        return Err(Error::Solver(format!(
            "next impact lies inside the deflation window at s = {}",
            x.s()
        )));
    }
    let mut bracket = None;
    for i in first.. {
        let t = i as f64 * dt;
        let (t, r) = if t >= hi {
            (hi, residual(hi))
        } else {
            (t, normal.dot(&samples[i.rem_euclid(count as i64) as usize]))
        };
        if r * sigma <= 0.0 {
            bracket = Some((prev_t, t));
            break;
        }
        if t >= hi {
            break;
        }
        prev_t = t;
    }
    let (a, b) = bracket.ok_or_else(|| {
        Error::Solver(format!(
            "no second intersection found from ({}, {psi})",
            x.s()
        ))
    })?;
    // Stored samples and fresh evaluations can disagree in sign by rounding when a
    // sample sits on the root; re-check the ends and move the bracket if needed.
    let (mut a, mut b) = (a, b);
    let t1 = loop {
        if residual(a) * sigma <= 0.0 {
            break a;
        }
        if residual(b) * sigma <= 0.0 || b >= hi {
            break brent(a, b, residual)?;
        }
        a = b;
        b = (b + dt).min(hi);
    };
    let r1 = residual(t1);
    if r1.abs() > RESIDUAL_TOL {
        return Err(Error::Solver(format!(
            "impact residual {r1:e} above tolerance"
        )));
    }
    let f1 = oval.frame_raw(t1);
    let chord = chord_raw(kind, &f0, &f1)?;
    let s1 = oval.reduce(oval.arclength_at(t1));
    Ok((PhasePoint::raw(s1, chord.psi1), chord))
}

/// The billiard map `T(s0, psi0) = (s1, psi1)`.
pub fn next_impact(oval: &Oval, x: PhasePoint) -> Result<PhasePoint> {
    impact_chord(oval, x).map(|(p, _)| p)
}

/// `T^-1 = I T I` with `I(s, psi) = (s, pi - psi)`.
pub fn inverse_map(oval: &Oval, x: PhasePoint) -> Result<PhasePoint> {
    Ok(next_impact(oval, x.reversed())?.reversed())
}

/// `[x, T x, ..., T^n x]`.
pub fn iterate(oval: &Oval, x: PhasePoint, n: usize) -> Result<Vec<PhasePoint>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x);
    let mut cur = x;
    for step in 1..=n {
        cur = next_impact(oval, cur).map_err(|e| Error::Iteration {
            step,
            source: Box::new(e),
        })?;
        out.push(cur);
    }
    Ok(out)
}
