//! The billiard map on the open phase cylinder `R/lZ x (0, pi)`.
//!
//! A phase point `(s, psi)` is an impact at arclength `s` leaving with angle `psi` to the
//! positive tangent, turned toward the interior. The generating function is the chord
//! length `h(s0, s1) = d(Gamma(s0), Gamma(s1))`; the action convention `g = -h` appears
//! only in [`crate::orbits`].

mod generating;
mod map;

use std::f64::consts::PI;

use nalgebra::Matrix2;

pub use generating::{chord, dt_matrix, gen_derivs, gen_hessian, ChordData, GenFunHessian};
pub(crate) use generating::{chord_raw, ChordRaw};
pub use map::{inverse_map, iterate, next_impact};

use crate::error::{Error, Result};
use crate::oval::Oval;

/// Angles closer than this to 0 or pi are treated as tangential.
pub const WHISPER_BAND: f64 = 1e-6;

/// A point of the phase cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    s: f64,
    psi: f64,
}

impl PhasePoint {
    /// Validates `0 < psi < pi` and reduces `s` modulo the length of `oval`.
    pub fn new(oval: &Oval, s: f64, psi: f64) -> Result<Self> {
        if !(s.is_finite() && psi > 0.0 && psi < PI) {
            return Err(Error::Domain(format!(
                "phase point needs finite s and psi in (0, pi), got ({s}, {psi})"
            )));
        }
        Ok(Self::raw(oval.reduce(s), psi))
    }

    pub(crate) fn raw(s: f64, psi: f64) -> Self {
        Self { s, psi }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// The time-reversal involution `(s, psi) -> (s, pi - psi)`.
    pub fn reversed(&self) -> Self {
        Self::raw(self.s, PI - self.psi)
    }
}

/// Phase point in the conjugate coordinates `(s, p)`, `p = -cos psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPoint {
    pub s: f64,
    pub p: f64,
}

pub fn to_momentum(x: &PhasePoint) -> MomentumPoint {
    MomentumPoint {
        s: x.s,
        p: -x.psi.cos(),
    }
}

pub fn from_momentum(oval: &Oval, m: &MomentumPoint) -> Result<PhasePoint> {
    if !(m.p.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "momentum must lie in (-1, 1), got {}",
            m.p
        )));
    }
    PhasePoint::new(oval, m.s, (-m.p).acos())
}

/// `DT = [[a, b], [c, e]]` in `(s, psi)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianMatrix {
    /// `ds1/ds0`
    pub a: f64,
    /// `ds1/dpsi0`
    pub b: f64,
    /// `dpsi1/ds0`
    pub c: f64,
    /// `dpsi1/dpsi0`
    pub e: f64,
}

impl JacobianMatrix {
    pub fn det(&self) -> f64 {
        self.a * self.e - self.b * self.c
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a, self.b, self.c, self.e)
    }

    /// The same derivative in `(s, p)` coordinates, where it has unit determinant.
    pub fn in_momentum(&self, psi0: f64, psi1: f64) -> Matrix2<f64> {
        let (s0, s1) = (psi0.sin(), psi1.sin());
        Matrix2::new(self.a, self.b / s0, self.c * s1, self.e * s1 / s0)
    }
}
