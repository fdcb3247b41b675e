use crate::billiard::{JacobianMatrix, PhasePoint};
use crate::error::Result;
use crate::geometry::{
    distance_raw, metric_inner, tangent_toward_raw, SurfaceKind, SurfacePoint, TangentVector,
};
use crate::oval::{Oval, RawFrame};

/// The chord from `Gamma(s0)` to `Gamma(s1)` with its angles to the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordData {
    pub d: f64,
    pub psi0: f64,
    pub psi1: f64,
    /// Direction of the chord at its start.
    pub tau0: TangentVector,
    /// Direction of the chord at its end, pointing away from `Gamma(s0)`.
    pub tau1: TangentVector,
}

/// Second partials of `h(s0, s1) = d(Gamma(s0), Gamma(s1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenFunHessian {
    pub h00: f64,
    pub h01: f64,
    pub h11: f64,
}

impl GenFunHessian {
    /// Derivative of the map at the chord's start, from the implicit relations
    /// `dh/ds0 = -cos psi0`, `dh/ds1 = cos psi1`.
    pub fn jacobian(&self, psi0: f64, psi1: f64) -> JacobianMatrix {
        let Self { h00, h01, h11 } = *self;
        let (sin0, sin1) = (psi0.sin(), psi1.sin());
        JacobianMatrix {
            a: -h00 / h01,
            b: sin0 / h01,
            c: (h00 * h11 - h01 * h01) / (h01 * sin1),
            e: -h11 * sin0 / (h01 * sin1),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ChordRaw {
    pub kind: SurfaceKind,
    pub d: f64,
    pub psi0: f64,
    pub psi1: f64,
    pub k0: f64,
    pub k1: f64,
    pub tau0: nalgebra::Vector3<f64>,
    pub tau1: nalgebra::Vector3<f64>,
}

pub(crate) fn chord_raw(kind: SurfaceKind, f0: &RawFrame, f1: &RawFrame) -> Result<ChordRaw> {
    let tau0 = tangent_toward_raw(kind, &f0.point, &f1.point)?;
    let tau1 = -tangent_toward_raw(kind, &f1.point, &f0.point)?;
    let d = distance_raw(kind, &f0.point, &f1.point)?;
    let ip = |a, b| metric_inner(kind, a, b);
    let psi0 = ip(&tau0, &f0.normal).atan2(ip(&tau0, &f0.tangent));
    let psi1 = (-ip(&tau1, &f1.normal)).atan2(ip(&tau1, &f1.tangent));
    Ok(ChordRaw {
        kind,
        d,
        psi0,
        psi1,
        k0: f0.curvature,
        k1: f1.curvature,
        tau0,
        tau1,
    })
}

impl ChordRaw {
    pub fn hessian(&self) -> GenFunHessian {
        let (sin0, sin1) = (self.psi0.sin(), self.psi1.sin());
        let d = self.d;
        let (g, dd) = match self.kind {
            SurfaceKind::Euclidean => (d, d),
            SurfaceKind::Sphere => (d.tan(), d.sin()),
            SurfaceKind::Hyperbolic => (d.tanh(), d.sinh()),
        };
        GenFunHessian {
            h00: sin0 * sin0 / g - self.k0 * sin0,
            h01: sin0 * sin1 / dd,
            h11: sin1 * sin1 / g - self.k1 * sin1,
        }
    }

    pub fn derivs(&self) -> (f64, f64) {
        (-self.psi0.cos(), self.psi1.cos())
    }
}

pub(crate) fn chord_between(oval: &Oval, s0: f64, s1: f64) -> Result<ChordRaw> {
    let f0 = oval.frame_raw(oval.param_at(s0));
    let f1 = oval.frame_raw(oval.param_at(s1));
    chord_raw(oval.kind(), &f0, &f1)
}

pub fn chord(oval: &Oval, s0: f64, s1: f64) -> Result<ChordData> {
    let c = chord_between(oval, s0, s1)?;
    let kind = oval.kind();
    let p0 = SurfacePoint::from_raw(kind, oval.position_raw(s0));
    let p1 = SurfacePoint::from_raw(kind, oval.position_raw(s1));
    Ok(ChordData {
        d: c.d,
        psi0: c.psi0,
        psi1: c.psi1,
        tau0: TangentVector::from_raw(p0, c.tau0),
        tau1: TangentVector::from_raw(p1, c.tau1),
    })
}

/// `(dh/ds0, dh/ds1) = (-cos psi0, cos psi1)`.
pub fn gen_derivs(oval: &Oval, s0: f64, s1: f64) -> Result<(f64, f64)> {
    Ok(chord_between(oval, s0, s1)?.derivs())
}

pub fn gen_hessian(oval: &Oval, s0: f64, s1: f64) -> Result<GenFunHessian> {
    Ok(chord_between(oval, s0, s1)?.hessian())
}

/// Closed-form derivative of the billiard map at `x`.
pub fn dt_matrix(oval: &Oval, x: PhasePoint) -> Result<JacobianMatrix> {
    let c = super::map::impact_chord(oval, x)?.1;
    Ok(c.hessian().jacobian(x.psi(), c.psi1))
}
