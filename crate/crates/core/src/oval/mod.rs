//! Boundary ovals: construction, arclength parameterization, frames, curvature,
//! enclosed area, convexity certificate and normal perturbations.
//!
//! A curve is given analytically in a chart parameter `t` in `[0, 2pi)`. Arclength is
//! tabulated on `resolution` uniform cells with 8-point Gauss-Legendre quadrature; the
//! inverse map `s -> t` starts from a periodic cubic Hermite interpolant of the table
//! and is polished by Newton's method against the quadrature, so `Gamma(s)` is an
//! arclength parameterization to rounding error. Tangents and curvature come from
//! exact Taylor jets of the chart, never from differentiating the table.

mod curve;
mod profile;

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

pub use curve::{CurveFamily, OvalSpec};
pub use profile::PerturbationProfile;

use crate::error::{Error, Result};
use crate::geometry::{
    distance_raw, metric_inner, metric_norm, rotate_quarter, SurfaceKind, SurfacePoint,
    TangentVector,
};
use crate::jet::{Jet, Jet3, JET_CAP};

pub const DEFAULT_RESOLUTION: usize = 2048;
pub const MIN_RESOLUTION: usize = 64;
/// Curve samples per table cell used by the impact search and the certificate scans.
pub const SAMPLES_PER_CELL: usize = 4;
/// Frames need three jet coefficients and every perturbation level consumes one.
const MAX_PERTURBATION_DEPTH: usize = JET_CAP - 3;
/// Samples closer than this to the hemisphere boundary are rejected.
const HEMISPHERE_MARGIN: f64 = 1e-6;

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

#[derive(Debug, Clone)]
enum Curve {
    Chart {
        family: CurveFamily,
        iso: Matrix3<f64>,
    },
    Perturbed {
        base: Arc<Oval>,
        profile: PerturbationProfile,
    },
}

/// Result of scanning an oval's construction grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OvalCertificate {
    pub min_curvature: f64,
    pub is_simple: bool,
    pub is_closed: bool,
}

impl OvalCertificate {
    /// Positive curvature on a simple closed regular curve gives strict geodesic convexity.
    pub fn certifies(&self) -> bool {
        self.min_curvature > 0.0 && self.is_simple && self.is_closed
    }
}

/// Boundary point with its positively oriented orthonormal frame and geodesic curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramedPoint {
    pub s: f64,
    pub point: SurfacePoint,
    pub tangent: TangentVector,
    /// Unit normal pointing into the enclosed region.
    pub normal: TangentVector,
    pub curvature: f64,
}

/// Frame data on raw ambient vectors, used on the hot paths.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RawFrame {
    pub point: Vector3<f64>,
    pub tangent: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub curvature: f64,
}

/// An arclength-parameterized, certified, strictly convex closed curve.
#[derive(Debug, Clone)]
pub struct Oval {
    spec: OvalSpec,
    kind: SurfaceKind,
    curve: Curve,
    center: Vector3<f64>,
    depth: usize,
    resolution: usize,
    step: f64,
    length: f64,
    s_nodes: Vec<f64>,
    speed_nodes: Vec<f64>,
    samples: Vec<Vector3<f64>>,
    max_curvature: f64,
    certificate: OvalCertificate,
    total_curvature: f64,
    green_area: f64,
}

impl OvalSpec {
    /// Builds the curve and reports the certificate without rejecting it.
    pub fn certificate(&self, resolution: usize) -> Result<OvalCertificate> {
        Oval::from_spec(self, resolution, false).map(|o| o.certificate)
    }
}

impl Oval {
    /// Constructs and validates the oval; `resolution` is the number of arclength cells.
    pub fn build(spec: &OvalSpec, resolution: usize) -> Result<Self> {
        Self::from_spec(spec, resolution, true)
    }

    fn from_spec(spec: &OvalSpec, resolution: usize, enforce: bool) -> Result<Self> {
        spec.validate()?;
        let center = spec.center_point()?;
        let curve = Curve::Chart {
            family: spec.curve.clone(),
            iso: curve::isometry_to(&center),
        };
        Self::construct(
            spec.clone(),
            curve,
            *center.coords(),
            0,
            resolution,
            enforce,
        )
    }

    fn construct(
        spec: OvalSpec,
        curve: Curve,
        center: Vector3<f64>,
        depth: usize,
        resolution: usize,
        enforce: bool,
    ) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::Domain(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let kind = spec.surface;
        let step = TAU / resolution as f64;
        let mut oval = Oval {
            spec,
            kind,
            curve,
            center,
            depth,
            resolution,
            step,
            length: 0.0,
            s_nodes: Vec::new(),
            speed_nodes: Vec::new(),
            samples: Vec::new(),
            max_curvature: 0.0,
            certificate: OvalCertificate {
                min_curvature: f64::NAN,
                is_simple: false,
                is_closed: false,
            },
            total_curvature: 0.0,
            green_area: 0.0,
        };

        let n_samples = resolution * SAMPLES_PER_CELL;
        let sample_params: Vec<f64> = (0..n_samples)
            .map(|i| TAU * i as f64 / n_samples as f64)
            .collect();

        if let Curve::Chart {
            family: family @ CurveFamily::Polar { .. },
            ..
        } = &oval.curve
        {
            let min_r = sample_params
                .iter()
                .map(|&t| family.radius_jet(&Jet::variable(t, 1)).value())
                .fold(f64::INFINITY, f64::min);
            if min_r <= 0.0 {
                return Err(Error::InvalidOval(format!(
                    "radial function is not positive (min {min_r})"
                )));
            }
        }

        let mut speed_nodes = Vec::with_capacity(resolution + 1);
        let mut s_nodes = Vec::with_capacity(resolution + 1);
        s_nodes.push(0.0);
        let mut total_curvature = 0.0;
        let mut green_area = 0.0;
        for j in 0..resolution {
            let t0 = j as f64 * step;
            let v = oval.speed_at_param(t0);
            if !(v > 1e-12) {
                return Err(Error::InvalidOval(format!(
                    "curve is not regular at t = {t0} (speed {v})"
                )));
            }
            speed_nodes.push(v);
            let ds = gauss_legendre(t0, t0 + step, |t| oval.speed_at_param(t));
            s_nodes.push(s_nodes[j] + ds);
            total_curvature += gauss_legendre(t0, t0 + step, |t| {
                let j = oval.position_jet(t, 3);
                let d1 = j.deriv(1);
                let v = metric_norm(kind, &d1);
                let normal = rotate_quarter(kind, &j.value(), &(d1 / v));
                metric_inner(kind, &j.deriv(2), &normal) / v
            });
            if kind == SurfaceKind::Euclidean {
                green_area += gauss_legendre(t0, t0 + step, |t| {
                    let j = oval.position_jet(t, 2);
                    let (p, d) = (j.value(), j.deriv(1));
                    0.5 * (p.x * d.y - p.y * d.x)
                });
            }
        }
        speed_nodes.push(speed_nodes[0]);
        oval.length = s_nodes[resolution];
        oval.s_nodes = s_nodes;
        oval.speed_nodes = speed_nodes;
        oval.total_curvature = total_curvature;
        oval.green_area = green_area;

        let mut min_curvature = f64::INFINITY;
        let mut max_curvature = f64::NEG_INFINITY;
        let mut samples = Vec::with_capacity(n_samples);
        for &t in &sample_params {
            let f = oval.frame_raw(t);
            min_curvature = min_curvature.min(f.curvature);
            max_curvature = max_curvature.max(f.curvature);
            samples.push(f.point);
        }
        let is_closed = (oval.position_jet(TAU, 1).value() - samples[0]).norm() < 1e-9;
        let planar: Vec<(f64, f64)> = samples.iter().map(|p| (p.x, p.y)).collect();
        let is_simple = polyline_is_simple(&planar);
        oval.samples = samples;
        oval.max_curvature = max_curvature;
        oval.certificate = OvalCertificate {
            min_curvature,
            is_simple,
            is_closed,
        };

        if kind == SurfaceKind::Sphere {
            let mut far = 0.0f64;
            for p in &oval.samples {
                if p.z <= 0.0 {
                    far = f64::INFINITY;
                    break;
                }
                far = far.max(distance_raw(kind, &oval.center, p)?);
            }
            if far >= FRAC_PI_2 - HEMISPHERE_MARGIN {
                return Err(Error::InvalidOval(format!(
                    "curve leaves the open hemisphere (max distance from center {far})"
                )));
            }
        }

        if enforce {
            let c = oval.certificate;
            if !c.is_closed {
                return Err(Error::InvalidOval("curve is not closed".into()));
            }
            if !c.is_simple {
                return Err(Error::InvalidOval("curve self-intersects".into()));
            }
            if !(c.min_curvature > 0.0) {
                return Err(Error::InvalidOval(format!(
                    "geodesic curvature is not strictly positive (min {:e})",
                    c.min_curvature
                )));
            }
        }
        Ok(oval)
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Spec of the unperturbed curve this oval descends from.
    pub fn spec(&self) -> &OvalSpec {
        &self.spec
    }

    pub fn center(&self) -> SurfacePoint {
        SurfacePoint::from_raw(self.kind, self.center)
    }

    /// Total arclength `l`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Number of normal perturbations applied on top of the base curve.
    pub fn perturbation_depth(&self) -> usize {
        self.depth
    }

    pub fn certificate(&self) -> OvalCertificate {
        self.certificate
    }

    /// Whether the sampled curvature is constant, which on these surfaces makes the
    /// oval a geodesic circle, invariant under rotation about its center.
    pub fn has_constant_curvature(&self) -> bool {
        let min = self.certificate.min_curvature;
        self.max_curvature - min <= 1e-9 * self.max_curvature.abs().max(1.0)
    }

    /// `closed integral of k ds`.
    pub fn total_curvature(&self) -> f64 {
        self.total_curvature
    }

    /// Area of the enclosed region: Green's theorem on the plane, Gauss-Bonnet on the
    /// sphere (`2pi - closed integral k ds`) and on the hyperbolic plane (`closed integral k ds - 2pi`).
    pub fn enclosed_area(&self) -> f64 {
        match self.kind {
            SurfaceKind::Euclidean => self.green_area,
            SurfaceKind::Sphere => TAU - self.total_curvature,
            SurfaceKind::Hyperbolic => self.total_curvature - TAU,
        }
    }

    /// Reduces `s` to `[0, l)`.
    pub fn reduce(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.length);
        if r >= self.length {
            0.0
        } else {
            r
        }
    }

    pub(crate) fn samples(&self) -> &[Vector3<f64>] {
        &self.samples
    }

    pub(crate) fn position_jet(&self, t: f64, n: usize) -> Jet3 {
        match &self.curve {
            Curve::Chart { family, iso } => family.chart_jet(self.kind, t, n).transform(iso),
            Curve::Perturbed { base, profile } => {
                let kind = self.kind;
                let bj = base.position_jet(t, n + 1);
                let p = bj.truncate(n);
                if profile.vanishes_near(base.approx_arclength(t), 1e-6) {
                    return p;
                }
                let dp = bj.derivative();
                let v = dp.metric_inner(kind, &dp).sqrt();
                let tangent = dp.scale(&v.recip());
                let normal = p.rotate_quarter(kind, &tangent);
                let s = v.integral(base.arclength_at(t)).truncate(n);
                let lambda = profile.eval_jet(&s);
                if lambda.is_zero() {
                    return p;
                }
                let beta = p.add(&normal.scale(&lambda));
                match kind {
                    SurfaceKind::Euclidean => beta,
                    SurfaceKind::Sphere => beta.scale(&(lambda * lambda + 1.0).sqrt().recip()),
                    SurfaceKind::Hyperbolic => {
                        beta.scale(&(-(lambda * lambda) + 1.0).sqrt().recip())
                    }
                }
            }
        }
    }

    pub(crate) fn point_at_param(&self, t: f64) -> Vector3<f64> {
        self.position_jet(t, 1).value()
    }

    pub(crate) fn speed_at_param(&self, t: f64) -> f64 {
        metric_norm(self.kind, &self.position_jet(t, 2).deriv(1))
    }

    pub(crate) fn frame_raw(&self, t: f64) -> RawFrame {
        let kind = self.kind;
        let j = self.position_jet(t, 3);
        let point = j.value();
        let d1 = j.deriv(1);
        let v = metric_norm(kind, &d1);
        let tangent = d1 / v;
        let normal = rotate_quarter(kind, &point, &tangent);
        let curvature = metric_inner(kind, &j.deriv(2), &normal) / (v * v);
        RawFrame {
            point,
            tangent,
            normal,
            curvature,
        }
    }

    fn cell_of(&self, t: f64) -> (f64, usize, f64) {
        let wraps = (t / TAU).floor();
        let tr = t - wraps * TAU;
        let j = ((tr / self.step) as usize).min(self.resolution - 1);
        (wraps, j, tr)
    }

    /// Arclength at chart parameter `t` (lifted: adds `l` per turn of `t`).
    pub fn arclength_at(&self, t: f64) -> f64 {
        let (wraps, j, tr) = self.cell_of(t);
        let t0 = j as f64 * self.step;
        let partial = if tr > t0 {
            gauss_legendre(t0, tr, |u| self.speed_at_param(u))
        } else {
            0.0
        };
        wraps * self.length + self.s_nodes[j] + partial
    }

    /// Cheap cubic Hermite estimate of [`Self::arclength_at`], accurate to ~h^4.
    fn approx_arclength(&self, t: f64) -> f64 {
        let (wraps, j, tr) = self.cell_of(t);
        let u = (tr - j as f64 * self.step) / self.step;
        let (s0, s1) = (self.s_nodes[j], self.s_nodes[j + 1]);
        let m0 = self.speed_nodes[j] * self.step;
        let m1 = self.speed_nodes[j + 1] * self.step;
        wraps * self.length + hermite(u, s0, s1, m0, m1)
    }

    /// Chart parameter of arclength `s` (lifted: adds `2pi` per turn of `s`).
    pub fn param_at(&self, s: f64) -> f64 {
        let wraps = (s / self.length).floor();
        let sr = s - wraps * self.length;
        let j = self
            .s_nodes
            .partition_point(|&x| x <= sr)
            .saturating_sub(1)
            .min(self.resolution - 1);
        let (s0, s1) = (self.s_nodes[j], self.s_nodes[j + 1]);
        let hs = s1 - s0;
        let u = (sr - s0) / hs;
        let t0 = j as f64 * self.step;
        let mut t = hermite(
            u,
            t0,
            t0 + self.step,
            hs / self.speed_nodes[j],
            hs / self.speed_nodes[j + 1],
        );
        for _ in 0..8 {
            let dt = (self.arclength_at(t) - sr) / self.speed_at_param(t);
            t -= dt;
            if dt.abs() < 1e-8 {
                break;
            }
        }
        wraps * TAU + t
    }

    /// Position, unit tangent, inward normal and geodesic curvature at arclength `s`.
    pub fn frame_at(&self, s: f64) -> FramedPoint {
        let f = self.frame_raw(self.param_at(s));
        let point = SurfacePoint::from_raw(self.kind, f.point);
        FramedPoint {
            s: self.reduce(s),
            point,
            tangent: TangentVector::from_raw(point, f.tangent),
            normal: TangentVector::from_raw(point, f.normal),
            curvature: f.curvature,
        }
    }

    /// `Gamma(s)`.
    pub fn position(&self, s: f64) -> SurfacePoint {
        SurfacePoint::from_raw(self.kind, self.point_at_param(self.param_at(s)))
    }

    pub(crate) fn position_raw(&self, s: f64) -> Vector3<f64> {
        self.point_at_param(self.param_at(s))
    }

    pub fn geodesic_curvature(&self, s: f64) -> f64 {
        self.frame_raw(self.param_at(s)).curvature
    }

    /// Bump profile centered at arclength `s0` (see [`PerturbationProfile::Bump`]).
    pub fn bump_profile(&self, s0: f64, width: f64, amplitude: f64) -> Result<PerturbationProfile> {
        if !(width > 0.0 && width < self.length) {
            return Err(Error::Domain(format!(
                "bump width must lie in (0, {}), got {width}",
                self.length
            )));
        }
        Ok(PerturbationProfile::bump(
            self.reduce(s0),
            width,
            amplitude,
            self.length,
        ))
    }

    /// The curve `s -> proj(Gamma(s) + lambda(s) eta(s))`, reparameterized by its own
    /// arclength and revalidated.
    pub fn normal_perturbation(&self, profile: PerturbationProfile) -> Result<Oval> {
        if self.depth >= MAX_PERTURBATION_DEPTH {
            return Err(Error::Domain(format!(
                "at most {MAX_PERTURBATION_DEPTH} nested perturbations are supported"
            )));
        }
        if self.kind == SurfaceKind::Hyperbolic && profile.sup_abs() >= 1.0 {
            return Err(Error::Domain(
                "hyperbolic normal perturbations need |lambda| < 1".into(),
            ));
        }
        Oval::construct(
            self.spec.clone(),
            Curve::Perturbed {
                base: Arc::new(self.clone()),
                profile,
            },
            self.center,
            self.depth + 1,
            self.resolution,
            true,
        )
    }

    /// Arclength on this oval of the point that sits at base-curve arclength `s` on the
    /// oval this one was perturbed from.
    pub fn arclength_from_base(&self, s: f64) -> Result<f64> {
        match &self.curve {
            Curve::Perturbed { base, .. } => Ok(self.arclength_at(base.param_at(s))),
            Curve::Chart { .. } => Err(Error::Usage("oval is not a perturbation".into())),
        }
    }
}

fn hermite(u: f64, p0: f64, p1: f64, m0: f64, m1: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * p0
        + (u3 - 2.0 * u2 + u) * m0
        + (-2.0 * u3 + 3.0 * u2) * p1
        + (u3 - u2) * m1
}

/// Checks a closed polyline for crossings between non-adjacent segments.
fn polyline_is_simple(pts: &[(f64, f64)]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| {
        let (a, b) = seg(i);
        a.0.min(b.0)
    };
    let xmax = |i: usize| {
        let (a, b) = seg(i);
        a.0.max(b.0)
    };
    order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)));
    for (k, &i) in order.iter().enumerate() {
        let right = xmax(i);
        for &j in &order[k + 1..] {
            if xmin(j) > right {
                break;
            }
            let gap = (i + n - j) % n;
            if gap == 0 || gap == 1 || gap == n - 1 {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_intersect(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1)
    };
    (d1 == 0.0 && on(c, d, a))
        || (d2 == 0.0 && on(c, d, b))
        || (d3 == 0.0 && on(a, b, c))
        || (d4 == 0.0 && on(a, b, d))
}
