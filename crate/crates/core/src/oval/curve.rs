//! Concrete curve families written in geodesic polar coordinates about a center.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SurfaceKind, SurfacePoint};
use crate::jet::{Jet, Jet3};

/// Boundary curve families. The chart parameter runs over `[0, 2pi)` counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveFamily {
    /// Geodesic circle of the given geodesic radius.
    Circle { radius: f64 },
    /// Euclidean ellipse `(a cos t, b sin t)`; only valid on the plane.
    Ellipse { a: f64, b: f64 },
    /// Radial graph `rho(theta) = c0 + sum_j (a_j cos j theta + b_j sin j theta)`,
    /// `coeffs[j - 1] = [a_j, b_j]`.
    Polar {
        c0: f64,
        #[serde(default)]
        coeffs: Vec<[f64; 2]>,
    },
}

/// A boundary description: surface, curve family and center (default `(0, 0, 1)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvalSpec {
    pub surface: SurfaceKind,
    pub curve: CurveFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 3]>,
}

impl OvalSpec {
    pub fn circle(surface: SurfaceKind, radius: f64) -> Self {
        Self {
            surface,
            curve: CurveFamily::Circle { radius },
            center: None,
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self {
            surface: SurfaceKind::Euclidean,
            curve: CurveFamily::Ellipse { a, b },
            center: None,
        }
    }

    pub fn polar(surface: SurfaceKind, c0: f64, coeffs: Vec<[f64; 2]>) -> Self {
        Self {
            surface,
            curve: CurveFamily::Polar { c0, coeffs },
            center: None,
        }
    }

    pub fn with_center(mut self, center: [f64; 3]) -> Self {
        self.center = Some(center);
        self
    }

    pub fn center_point(&self) -> Result<SurfacePoint> {
        match self.center {
            None => Ok(self.surface.basepoint()),
            Some(c) => SurfacePoint::new(self.surface, Vector3::from(c)),
        }
    }

    /// Parameter checks that do not need sampling.
    pub(crate) fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidOval(msg));
        match &self.curve {
            CurveFamily::Circle { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return invalid(format!("circle radius must be positive, got {radius}"));
                }
                if self.surface == SurfaceKind::Sphere && *radius >= FRAC_PI_2 {
                    return invalid(format!("circle radius {radius} leaves the open hemisphere"));
                }
            }
            CurveFamily::Ellipse { a, b } => {
                if self.surface != SurfaceKind::Euclidean {
                    return invalid("the ellipse family is only defined on the plane".into());
                }
                if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0) {
                    return invalid(format!("ellipse semi-axes must be positive, got {a}, {b}"));
                }
            }
            CurveFamily::Polar { c0, coeffs } => {
                if !c0.is_finite() || coeffs.iter().flatten().any(|v| !v.is_finite()) {
                    return invalid("non-finite polar coefficients".into());
                }
            }
        }
        Ok(())
    }
}

/// Orientation-preserving isometry of the model taking `(0, 0, 1)` to `center`.
pub(crate) fn isometry_to(center: &SurfacePoint) -> Matrix3<f64> {
    let c = center.coords();
    match center.kind() {
        SurfaceKind::Euclidean => Matrix3::new(1.0, 0.0, c.x, 0.0, 1.0, c.y, 0.0, 0.0, 1.0),
        SurfaceKind::Sphere => {
            // Rotation about e3 x c by the angle between e3 and c.
            let axis = Vector3::z().cross(c);
            let s = axis.norm();
            if s < 1e-15 {
                return Matrix3::identity();
            }
            let k = axis / s;
            let cos = c.z;
            let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
            Matrix3::identity() + kx * s + kx * kx * (1.0 - cos)
        }
        SurfaceKind::Hyperbolic => {
            let w2 = c.x * c.x + c.y * c.y;
            if w2 < 1e-30 {
                return Matrix3::identity();
            }
            let f = (c.z - 1.0) / w2;
            Matrix3::new(
                1.0 + f * c.x * c.x,
                f * c.x * c.y,
                c.x,
                f * c.x * c.y,
                1.0 + f * c.y * c.y,
                c.y,
                c.x,
                c.y,
                c.z,
            )
        }
    }
}

impl CurveFamily {
    /// Radial function as a jet in the chart parameter (not used by the ellipse).
    pub(crate) fn radius_jet(&self, t: &Jet) -> Jet {
        let n = t.len();
        match self {
            CurveFamily::Circle { radius } => Jet::constant(*radius, n),
            CurveFamily::Ellipse { a, b } => {
                // Polar radius of the ellipse at the polar angle of the point (a cos t, b sin t).
                let (s, c) = t.sin_cos();
                let x = c.scale(*a);
                let y = s.scale(*b);
                (x * x + y * y).sqrt()
            }
            CurveFamily::Polar { c0, coeffs } => {
                let mut r = Jet::constant(*c0, n);
                for (j, [a, b]) in coeffs.iter().enumerate() {
                    if *a == 0.0 && *b == 0.0 {
                        continue;
                    }
                    let (s, c) = t.scale((j + 1) as f64).sin_cos();
                    r = r + c.scale(*a) + s.scale(*b);
                }
                r
            }
        }
    }

    /// Position jet in the chart about the basepoint.
    pub(crate) fn chart_jet(&self, kind: SurfaceKind, t: f64, n: usize) -> Jet3 {
        let tj = Jet::variable(t, n);
        let (sin_t, cos_t) = tj.sin_cos();
        if let CurveFamily::Ellipse { a, b } = self {
            return Jet3::new(cos_t.scale(*a), sin_t.scale(*b), Jet::constant(1.0, n));
        }
        let r = self.radius_jet(&tj);
        let (sn, cs) = match kind {
            SurfaceKind::Euclidean => (r, Jet::constant(1.0, n)),
            SurfaceKind::Sphere => r.sin_cos(),
            SurfaceKind::Hyperbolic => r.sinh_cosh(),
        };
        Jet3::new(sn * cos_t, sn * sin_t, cs)
    }
}
