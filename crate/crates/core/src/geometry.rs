//! Ambient models of the three unit-curvature surfaces.
//!
//! Every surface lives in R^3:
//!
//! - Euclidean plane: `{z = 1}`
//! - open upper hemisphere: `{|X| = 1, z > 0}`
//! - upper sheet of the hyperboloid: `{<<X, X>> = -1, z >= 1}` with the Minkowski
//!   form `<<u, v>> = u_x v_x + u_y v_y - u_z v_z`
//!
//! Geodesics are the intersections of the surface with planes through the origin,
//! which is what the billiard code exploits to find impacts without stepping.
//!
//! The free functions on raw [`Vector3`] values are the hot path; [`SurfacePoint`]
//! and [`TangentVector`] wrap them with invariant checks for the public API.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which constraint drift is silently projected away.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Inverse-trig arguments may overshoot their domain by this much before it is an error.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl SurfaceKind {
    pub const ALL: [SurfaceKind; 3] = [
        SurfaceKind::Euclidean,
        SurfaceKind::Sphere,
        SurfaceKind::Hyperbolic,
    ];

    /// The model basepoint `(0, 0, 1)`, shared by all three surfaces.
    pub fn basepoint(self) -> SurfacePoint {
        SurfacePoint {
            kind: self,
            coords: Vector3::z(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Euclidean => "euclidean",
            SurfaceKind::Sphere => "sphere",
            SurfaceKind::Hyperbolic => "hyperbolic",
        }
    }

    /// Gaussian curvature of the model.
    pub fn curvature(self) -> f64 {
        match self {
            SurfaceKind::Euclidean => 0.0,
            SurfaceKind::Sphere => 1.0,
            SurfaceKind::Hyperbolic => -1.0,
        }
    }
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Inner product of the ambient model: Euclidean dot product for the plane and the
/// sphere, Minkowski product of signature (+,+,-) for the hyperboloid.
#[inline]
pub fn metric_inner(kind: SurfaceKind, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    match kind {
        SurfaceKind::Euclidean | SurfaceKind::Sphere => u.dot(v),
        SurfaceKind::Hyperbolic => u.x * v.x + u.y * v.y - u.z * v.z,
    }
}

/// Norm of a tangent vector in the surface metric (tangent vectors of the
/// hyperboloid are spacelike, so the square is non-negative up to rounding).
#[inline]
pub(crate) fn metric_norm(kind: SurfaceKind, u: &Vector3<f64>) -> f64 {
    metric_inner(kind, u, u).max(0.0).sqrt()
}

/// Residual of the model constraint at `v` (zero on the surface).
fn constraint_residual(kind: SurfaceKind, v: &Vector3<f64>) -> f64 {
    match kind {
        SurfaceKind::Euclidean => v.z - 1.0,
        SurfaceKind::Sphere => v.norm_squared() - 1.0,
        SurfaceKind::Hyperbolic => metric_inner(kind, v, v) + 1.0,
    }
}

/// Geodesic distance between two ambient points known to lie on the surface.
///
/// Uses the chord-length forms `2 asin(|X-Y|/2)` and `2 asinh(sqrt(<<X-Y,X-Y>>)/2)`,
/// which agree with `arccos <X,Y>` and `arccosh(-<<X,Y>>)` but keep full relative
/// precision for short chords.
pub(crate) fn distance_raw(kind: SurfaceKind, x: &Vector3<f64>, y: &Vector3<f64>) -> Result<f64> {
    let diff = y - x;
    match kind {
        SurfaceKind::Euclidean => Ok(diff.norm()),
        SurfaceKind::Sphere => {
            let arg = x.dot(y);
            if !(-1.0 - CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&arg) {
                return Err(Error::NumericalDomain {
                    what: "arccos",
                    value: arg,
                });
            }
            let half = (0.5 * diff.norm()).min(1.0);
            Ok(2.0 * half.asin())
        }
        SurfaceKind::Hyperbolic => {
            let arg = -metric_inner(kind, x, y);
            if arg < 1.0 - CLAMP_TOL {
                return Err(Error::NumericalDomain {
                    what: "arccosh",
                    value: arg,
                });
            }
            let q = metric_inner(kind, &diff, &diff).max(0.0);
            Ok(2.0 * (0.5 * q.sqrt()).asinh())
        }
    }
}

/// Unit tangent at `x` of the geodesic from `x` toward `y`.
pub(crate) fn tangent_toward_raw(
    kind: SurfaceKind,
    x: &Vector3<f64>,
    y: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    let diff = y - x;
    if diff.norm() < 1e-12 {
        return Err(Error::DegenerateChord);
    }
    let w = match kind {
        SurfaceKind::Euclidean => Vector3::new(diff.x, diff.y, 0.0),
        SurfaceKind::Sphere => diff - x * diff.dot(x),
        SurfaceKind::Hyperbolic => diff + x * metric_inner(kind, &diff, x),
    };
    let norm = metric_norm(kind, &w);
    if norm < 1e-300 {
        return Err(Error::DegenerateChord);
    }
    Ok(w / norm)
}

/// Point at arclength `t` along the unit-speed geodesic from `x` with initial velocity `u`.
pub(crate) fn geodesic_point_raw(
    kind: SurfaceKind,
    x: &Vector3<f64>,
    u: &Vector3<f64>,
    t: f64,
) -> Vector3<f64> {
    let p = match kind {
        SurfaceKind::Euclidean => x + u * t,
        SurfaceKind::Sphere => x * t.cos() + u * t.sin(),
        SurfaceKind::Hyperbolic => x * t.cosh() + u * t.sinh(),
    };
    renormalize(kind, p)
}

/// Radial rescaling onto the model; the caller guarantees the scale is positive.
fn renormalize(kind: SurfaceKind, p: Vector3<f64>) -> Vector3<f64> {
    match kind {
        SurfaceKind::Euclidean => Vector3::new(p.x, p.y, 1.0),
        SurfaceKind::Sphere => {
            let n = p.norm();
            if n > 0.0 {
                p / n
            } else {
                p
            }
        }
        SurfaceKind::Hyperbolic => {
            let q = -metric_inner(kind, &p, &p);
            if q > 0.0 {
                p / q.sqrt()
            } else {
                p
            }
        }
    }
}

/// Unit normal completing `(position, tangent)` to a positively oriented frame of the
/// tangent plane. For a counterclockwise curve it points into the enclosed region.
#[inline]
pub(crate) fn rotate_quarter(
    kind: SurfaceKind,
    x: &Vector3<f64>,
    tangent: &Vector3<f64>,
) -> Vector3<f64> {
    match kind {
        SurfaceKind::Euclidean => Vector3::new(-tangent.y, tangent.x, 0.0),
        SurfaceKind::Sphere => x.cross(tangent),
        SurfaceKind::Hyperbolic => {
            let c = x.cross(tangent);
            Vector3::new(c.x, c.y, -c.z)
        }
    }
}

/// A point on one of the model surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    kind: SurfaceKind,
    coords: Vector3<f64>,
}

impl SurfacePoint {
    /// Validates `coords` against the model, projecting away drift up to 1e-9.
    pub fn new(kind: SurfaceKind, coords: Vector3<f64>) -> Result<Self> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain("non-finite coordinates".into()));
        }
        let residual = constraint_residual(kind, &coords);
        if residual.abs() > RENORMALIZE_TOL {
            return Err(Error::Domain(format!(
                "point {:?} is off the {kind} model (residual {residual:e})",
                coords.as_slice()
            )));
        }
        if kind != SurfaceKind::Euclidean && coords.z <= 0.0 {
            return Err(Error::Domain(format!(
                "point {:?} is not on the upper {kind} sheet",
                coords.as_slice()
            )));
        }
        Ok(Self {
            kind,
            coords: renormalize(kind, coords),
        })
    }

    /// Point of the geodesic polar chart about the basepoint: distance `rho`, angle `theta`.
    pub fn from_polar(kind: SurfaceKind, rho: f64, theta: f64) -> Result<Self> {
        let (s, c) = match kind {
            SurfaceKind::Euclidean => (rho, 1.0),
            SurfaceKind::Sphere => (rho.sin(), rho.cos()),
            SurfaceKind::Hyperbolic => (rho.sinh(), rho.cosh()),
        };
        Self::new(kind, Vector3::new(s * theta.cos(), s * theta.sin(), c))
    }

    pub(crate) fn from_raw(kind: SurfaceKind, coords: Vector3<f64>) -> Self {
        Self { kind, coords }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.coords
    }
}

/// A tangent vector attached to a surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: SurfacePoint,
    u: Vector3<f64>,
}

impl TangentVector {
    /// Validates tangency; components normal to the surface up to 1e-9 are projected away.
    pub fn new(base: SurfacePoint, u: Vector3<f64>) -> Result<Self> {
        let kind = base.kind;
        let x = base.coords;
        let normal_part = match kind {
            SurfaceKind::Euclidean => u.z,
            SurfaceKind::Sphere => u.dot(&x),
            // <<X, X>> = -1, so the X-component of u is -<<u, X>>.
            SurfaceKind::Hyperbolic => -metric_inner(kind, &u, &x),
        };
        if normal_part.abs() > RENORMALIZE_TOL * u.norm().max(1.0) {
            return Err(Error::Domain(format!(
                "vector {:?} is not tangent at {:?}",
                u.as_slice(),
                x.as_slice()
            )));
        }
        let u = match kind {
            SurfaceKind::Euclidean => Vector3::new(u.x, u.y, 0.0),
            _ => u - x * normal_part,
        };
        Ok(Self { base, u })
    }

    pub(crate) fn from_raw(base: SurfacePoint, u: Vector3<f64>) -> Self {
        Self { base, u }
    }

    pub fn base(&self) -> &SurfacePoint {
        &self.base
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.u
    }

    pub fn norm(&self) -> f64 {
        metric_norm(self.base.kind, &self.u)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::Domain(
                "cannot normalize a zero tangent vector".into(),
            ));
        }
        Ok(Self {
            base: self.base,
            u: self.u / n,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base: self.base,
            u: self.u * factor,
        }
    }
}

fn same_surface(x: &SurfacePoint, y: &SurfacePoint) -> Result<SurfaceKind> {
    if x.kind != y.kind {
        return Err(Error::Usage(format!(
            "points on different surfaces ({} and {})",
            x.kind, y.kind
        )));
    }
    Ok(x.kind)
}

/// Geodesic distance `d_S(X, Y)`.
pub fn geodesic_distance(x: &SurfacePoint, y: &SurfacePoint) -> Result<f64> {
    let kind = same_surface(x, y)?;
    distance_raw(kind, &x.coords, &y.coords)
}

/// Point at arclength `t` along the unit-speed geodesic leaving `u.base()` with velocity `u`.
///
/// On the sphere the result may leave the open hemisphere; callers enforce the domain.
pub fn geodesic_point(u: &TangentVector, t: f64) -> SurfacePoint {
    let kind = u.base.kind;
    SurfacePoint::from_raw(kind, geodesic_point_raw(kind, &u.base.coords, &u.u, t))
}

/// Unit tangent at `x` of the geodesic running from `x` to `y`.
pub fn unit_tangent_toward(x: &SurfacePoint, y: &SurfacePoint) -> Result<TangentVector> {
    let kind = same_surface(x, y)?;
    let u = tangent_toward_raw(kind, &x.coords, &y.coords)?;
    Ok(TangentVector::from_raw(*x, u))
}

/// Angle in `[0, pi]` between two unit tangent vectors at the same point.
pub fn angle_between(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    let kind = same_surface(&u.base, &v.base)?;
    if (u.base.coords - v.base.coords).norm() > 1e-12 {
        return Err(Error::Usage(
            "tangent vectors at different base points".into(),
        ));
    }
    Ok(metric_inner(kind, &u.u, &v.u).clamp(-1.0, 1.0).acos())
}

/// The positive multiple of `w` lying on the model surface.
pub fn project_radial(kind: SurfaceKind, w: &Vector3<f64>) -> Result<SurfacePoint> {
    let ok = match kind {
        SurfaceKind::Euclidean => w.z > 0.0,
        SurfaceKind::Sphere => w.norm() > 0.0 && w.z > 0.0,
        SurfaceKind::Hyperbolic => metric_inner(kind, w, w) < 0.0 && w.z > 0.0,
    };
    if !ok || !w.iter().all(|c| c.is_finite()) {
        return Err(Error::Domain(format!(
            "{:?} has no radial projection onto the {kind} model",
            w.as_slice()
        )));
    }
    let p = match kind {
        SurfaceKind::Euclidean => w / w.z,
        _ => renormalize(kind, *w),
    };
    Ok(SurfacePoint::from_raw(kind, p))
}
