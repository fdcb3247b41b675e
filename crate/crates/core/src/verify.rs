//! Finite-difference checks of the billiard map invariants at random phase points.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::billiard::{chord, dt_matrix, gen_derivs, gen_hessian, next_impact, PhasePoint};
use crate::error::{Error, Result};
use crate::oval::Oval;

/// Pass thresholds for each check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Generating function first derivatives, absolute.
    pub gen_first: f64,
    /// Generating function second derivatives, absolute.
    pub gen_second: f64,
    /// Jacobian of the map, relative to its norm.
    pub jacobian: f64,
    /// `det DT - sin psi0 / sin psi1`.
    pub measure: f64,
    /// `I T I T x - x`.
    pub reversibility: f64,
    /// `|grad W|` target for orbit refinement.
    pub newton: f64,
    /// Mismatch between a found orbit and its image under the map.
    pub closure: f64,
    /// Relative discrepancy of the residue identity.
    pub residue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            gen_first: 1e-6,
            gen_second: 1e-5,
            jacobian: 1e-5,
            measure: 1e-8,
            reversibility: 1e-8,
            newton: 1e-11,
            closure: 1e-9,
            residue: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("gen_first", self.gen_first),
            ("gen_second", self.gen_second),
            ("jacobian", self.jacobian),
            ("measure", self.measure),
            ("reversibility", self.reversibility),
            ("newton", self.newton),
            ("closure", self.closure),
            ("residue", self.residue),
        ];
        match all.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            Some((name, v)) => Err(Error::Domain(format!(
                "tolerance {name} must be positive, got {v}"
            ))),
            None => Ok(()),
        }
    }
}

/// Outcome of one check over all samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Largest residual seen. For the twist check this is the smallest `ds1/dpsi0`.
    pub worst: f64,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

const FD_CHORD: f64 = 1e-5;
const FD_MAP: f64 = 1e-6;
/// Sampled angles stay this far from 0 and pi, where the map is ill conditioned.
const ANGLE_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, Default)]
struct Residuals {
    gen_first: f64,
    gen_second: f64,
    jacobian: f64,
    measure: f64,
    reversibility: f64,
    twist: f64,
}

impl Residuals {
    fn merge(self, o: Self) -> Self {
        Self {
            gen_first: self.gen_first.max(o.gen_first),
            gen_second: self.gen_second.max(o.gen_second),
            jacobian: self.jacobian.max(o.jacobian),
            measure: self.measure.max(o.measure),
            reversibility: self.reversibility.max(o.reversibility),
            twist: self.twist.min(o.twist),
        }
    }
}

fn circle_gap(a: f64, b: f64, l: f64) -> f64 {
    let d = (a - b).rem_euclid(l);
    d.min(l - d)
}

fn sample(oval: &Oval, seed: u64, k: usize) -> Result<Residuals> {
    let l = oval.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let s0 = rng.random_range(0.0..l);
    let psi0 = rng.random_range(ANGLE_MARGIN..PI - ANGLE_MARGIN);
    let x = PhasePoint::new(oval, s0, psi0)?;
    let y = next_impact(oval, x)?;
    let s1 = s0 + (y.s() - s0).rem_euclid(l);

    // generating function along the chord just traced
    let (d0, d1) = gen_derivs(oval, s0, s1)?;
    let h = FD_CHORD;
    let len = |a: f64, b: f64| chord(oval, a, b).map(|c| c.d);
    let fd0 = (len(s0 + h, s1)? - len(s0 - h, s1)?) / (2.0 * h);
    let fd1 = (len(s0, s1 + h)? - len(s0, s1 - h)?) / (2.0 * h);
    let gen_first = (fd0 - d0).abs().max((fd1 - d1).abs());

    let hess = gen_hessian(oval, s0, s1)?;
    let (p0, _) = gen_derivs(oval, s0 + h, s1)?;
    let (m0, _) = gen_derivs(oval, s0 - h, s1)?;
    let (q0, q1) = gen_derivs(oval, s0, s1 + h)?;
    let (r0, r1) = gen_derivs(oval, s0, s1 - h)?;
    let fd00 = (p0 - m0) / (2.0 * h);
    let fd01 = (q0 - r0) / (2.0 * h);
    let fd11 = (q1 - r1) / (2.0 * h);
    let gen_second = (fd00 - hess.h00)
        .abs()
        .max((fd01 - hess.h01).abs())
        .max((fd11 - hess.h11).abs());

    // Jacobian against central differences of the map itself
    let j = dt_matrix(oval, x)?;
    let e = FD_MAP;
    let image = |s: f64, psi: f64| -> Result<(f64, f64)> {
        let z = next_impact(oval, PhasePoint::new(oval, s, psi)?)?;
        // lift s next to y.s()
        let ds = (z.s() - y.s() + 0.5 * l).rem_euclid(l) - 0.5 * l;
        Ok((y.s() + ds, z.psi()))
    };
    let (sp, pp) = image(s0 + e, psi0)?;
    let (sm, pm) = image(s0 - e, psi0)?;
    let (ap, bp) = image(s0, psi0 + e)?;
    let (am, bm) = image(s0, psi0 - e)?;
    let fd = Matrix2::new(
        (sp - sm) / (2.0 * e),
        (ap - am) / (2.0 * e),
        (pp - pm) / (2.0 * e),
        (bp - bm) / (2.0 * e),
    );
    let analytic = j.to_matrix();
    let jacobian = (analytic - fd).norm() / analytic.norm();

    let want = psi0.sin() / y.psi().sin();
    let measure = (j.det() - want)
        .abs()
        .max((j.in_momentum(psi0, y.psi()).determinant() - 1.0).abs());

    let back = next_impact(oval, y.reversed())?.reversed();
    let reversibility = circle_gap(back.s(), s0, l).max((back.psi() - psi0).abs());

    Ok(Residuals {
        gen_first,
        gen_second,
        jacobian,
        measure,
        reversibility,
        twist: j.b,
    })
}

/// Runs every check at `samples` random phase points drawn from `seed`.
pub fn run_suite(oval: &Oval, samples: usize, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::Usage(
            "verification needs at least one sample".into(),
        ));
    }
    tol.validate()?;
    let init = Residuals {
        twist: f64::INFINITY,
        ..Residuals::default()
    };
    let worst = (0..samples)
        .into_par_iter()
        .map(|k| sample(oval, seed, k))
        .try_reduce(|| init, |a, b| Ok(a.merge(b)))?;
    let bounded = |name, worst: f64, tolerance: f64| CheckResult {
        name,
        worst,
        tolerance: Some(tolerance),
        passed: worst <= tolerance,
    };
    let checks = vec![
        bounded(
            "generating_first_derivatives",
            worst.gen_first,
            tol.gen_first,
        ),
        bounded(
            "generating_second_derivatives",
            worst.gen_second,
            tol.gen_second,
        ),
        bounded("jacobian", worst.jacobian, tol.jacobian),
        bounded("measure", worst.measure, tol.measure),
        bounded("reversibility", worst.reversibility, tol.reversibility),
        CheckResult {
            name: "twist",
            worst: worst.twist,
            tolerance: None,
            passed: worst.twist > 0.0,
        },
    ];
    Ok(SuiteReport {
        samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SurfaceKind;
    use crate::oval::OvalSpec;

    #[test]
    fn circle_passes_every_check() {
        let oval = Oval::build(&OvalSpec::circle(SurfaceKind::Sphere, 0.7), 256).unwrap();
        let r = run_suite(&oval, 50, 3, &Tolerances::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn impossible_tolerance_fails() {
        let oval = Oval::build(&OvalSpec::ellipse(1.2, 1.0), 256).unwrap();
        let tol = Tolerances {
            jacobian: 1e-20,
            ..Tolerances::default()
        };
        let r = run_suite(&oval, 20, 0, &tol).unwrap();
        assert!(!r.passed);
        assert!(
            !r.checks
                .iter()
                .find(|c| c.name == "jacobian")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        let tol = Tolerances {
            closure: 0.0,
            ..Tolerances::default()
        };
        assert!(tol.validate().is_err());
    }
}
