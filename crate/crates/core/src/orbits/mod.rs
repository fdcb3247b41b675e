//! Periodic orbits as critical points of the action on ordered configurations.
//!
//! The action uses `g = -h`, so `W = -(total polygon length)` and the couplings
//! `b_i = d^2 g / ds_i ds_{i+1}` are negative.

mod search;
mod stability;

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

pub use search::{
    find_birkhoff, newton_refine, strip_checks, BirkhoffSearch, SearchOptions, DEFAULT_TOLERANCE,
};
pub use stability::{
    break_degeneracy, classify, closure_residual, mackay_meiss_residue, orbit_trace, strip_bound,
    strip_bound_for_area, strip_check, DegeneracyBreak, Residue, StabilityClass, StripBound,
};

use crate::billiard::{chord_raw, ChordRaw, PhasePoint};
use crate::error::{Error, Result};
use crate::oval::Oval;

/// Consecutive vertices closer than this (in arclength) are a collision.
pub const MIN_SEPARATION: f64 = 1e-7;

/// An `n`-tuple of lifted arclengths `s0 < s1 < ... < s_{n-1} < s0 + m l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    m: usize,
    s: Vec<f64>,
}

impl Configuration {
    pub fn new(oval: &Oval, m: usize, s: Vec<f64>) -> Result<Self> {
        let c = Self { m, s };
        c.validate(oval)?;
        Ok(c)
    }

    /// Equally spaced configuration `s_i = s0 + i m l / n`.
    pub fn uniform(oval: &Oval, m: usize, n: usize, s0: f64) -> Result<Self> {
        let step = m as f64 * oval.length() / n as f64;
        Self::new(oval, m, (0..n).map(|i| s0 + i as f64 * step).collect())
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Lifted vertex arclengths.
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Lifted successor of vertex `i`; the last vertex is followed by `s0 + m l`.
    fn next(&self, i: usize, l: f64) -> f64 {
        if i + 1 < self.s.len() {
            self.s[i + 1]
        } else {
            self.s[0] + self.m as f64 * l
        }
    }

    fn validate(&self, oval: &Oval) -> Result<()> {
        let n = self.s.len();
        if n < 2 || self.m == 0 {
            return Err(Error::Domain(format!(
                "configuration needs n >= 2 and m >= 1, got n = {n}, m = {}",
                self.m
            )));
        }
        let l = oval.length();
        for i in 0..n {
            let gap = self.next(i, l) - self.s[i];
            if !(gap >= MIN_SEPARATION && gap <= l - MIN_SEPARATION) {
                return Err(Error::Domain(format!(
                    "vertices {i} and {} violate the ordering (gap {gap:e})",
                    (i + 1) % n
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn with_s(&self, s: Vec<f64>) -> Self {
        Self { m: self.m, s }
    }
}

/// Symmetric cyclic tridiagonal Hessian of the action.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicHessian {
    /// `H_ii`
    pub diag: Vec<f64>,
    /// `b_i`, coupling vertex `i` to vertex `i + 1 (mod n)`.
    pub b: Vec<f64>,
}

impl CyclicHessian {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        let mut h = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for i in 0..n {
            let j = (i + 1) % n;
            h[(i, j)] += self.b[i];
            h[(j, i)] += self.b[i];
        }
        h
    }

    pub fn det(&self) -> f64 {
        self.to_matrix().determinant()
    }
}

/// A closed billiard trajectory with its stability data.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub config: Configuration,
    /// `(s_i, psi_i)` with `psi_i` the outgoing angle at vertex `i`.
    pub phase_points: Vec<PhasePoint>,
    pub action: f64,
    /// `DT(x_{n-1}) ... DT(x_0)`.
    pub monodromy: Matrix2<f64>,
    pub trace: f64,
    pub hessian_det: f64,
    pub class: StabilityClass,
    pub degenerate: bool,
    pub residue: Residue,
    /// `|grad W|`.
    pub residual: f64,
}

impl PeriodicOrbit {
    /// Assembles the orbit data for a configuration assumed to be critical.
    pub fn from_configuration(oval: &Oval, config: Configuration) -> Result<Self> {
        let chords = chords_of(oval, &config)?;
        let n = config.n();
        let grad = gradient_from(&chords);
        let hessian = hessian_from(&chords);
        let mut monodromy = Matrix2::identity();
        for c in &chords {
            monodromy = c.hessian().jacobian(c.psi0, c.psi1).to_matrix() * monodromy;
        }
        let trace = monodromy.trace();
        let hessian_det = hessian.det();
        let (class, nondegenerate) = classify(trace);
        let residue = stability::residue_from(n, trace, hessian_det, &hessian.b)?;
        let phase_points = config
            .s
            .iter()
            .zip(&chords)
            .map(|(&s, c)| PhasePoint::raw(oval.reduce(s), c.psi0))
            .collect();
        Ok(Self {
            phase_points,
            action: -chords.iter().map(|c| c.d).sum::<f64>(),
            monodromy,
            trace,
            hessian_det,
            class,
            degenerate: !nondegenerate,
            residue,
            residual: grad.norm(),
            config,
        })
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn m(&self) -> usize {
        self.config.m()
    }

    pub fn psi(&self) -> Vec<f64> {
        self.phase_points.iter().map(|x| x.psi()).collect()
    }

    pub fn report(&self) -> OrbitReport {
        OrbitReport {
            n: self.n(),
            m: self.m(),
            s: self.phase_points.iter().map(|x| x.s()).collect(),
            psi: self.psi(),
            action: self.action,
            trace: self.trace,
            hessian_det: self.hessian_det,
            class: self.class,
            degenerate: self.degenerate,
            star_polygon: self.m() > 1,
            residual: self.residual,
            residue_lhs: self.residue.lhs,
            residue_rhs: self.residue.rhs,
        }
    }
}

/// Serialized form of a [`PeriodicOrbit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub m: usize,
    pub s: Vec<f64>,
    pub psi: Vec<f64>,
    pub action: f64,
    pub trace: f64,
    pub hessian_det: f64,
    pub class: StabilityClass,
    pub degenerate: bool,
    pub star_polygon: bool,
    pub residual: f64,
    pub residue_lhs: f64,
    pub residue_rhs: f64,
}

/// Chord `i` joins vertex `i` to vertex `i + 1`.
pub(crate) fn chords_of(oval: &Oval, config: &Configuration) -> Result<Vec<ChordRaw>> {
    config.validate(oval)?;
    let frames: Vec<_> = config
        .s
        .iter()
        .map(|&s| oval.frame_raw(oval.param_at(s)))
        .collect();
    let n = frames.len();
    (0..n)
        .map(|i| chord_raw(oval.kind(), &frames[i], &frames[(i + 1) % n]))
        .collect()
}

fn gradient_from(chords: &[ChordRaw]) -> DVector<f64> {
    let n = chords.len();
    DVector::from_fn(n, |i, _| {
        let prev = &chords[(i + n - 1) % n];
        chords[i].psi0.cos() - prev.psi1.cos()
    })
}

fn hessian_from(chords: &[ChordRaw]) -> CyclicHessian {
    let n = chords.len();
    let hs: Vec<_> = chords.iter().map(ChordRaw::hessian).collect();
    CyclicHessian {
        diag: (0..n)
            .map(|i| -(hs[(i + n - 1) % n].h11 + hs[i].h00))
            .collect(),
        b: hs.iter().map(|h| -h.h01).collect(),
    }
}

/// `W = sum_i g(s_i, s_{i+1})` with `g = -d`.
pub fn action(oval: &Oval, config: &Configuration) -> Result<f64> {
    Ok(-chords_of(oval, config)?.iter().map(|c| c.d).sum::<f64>())
}

/// `dW/ds_i = cos psi_i(out) - cos psi_i(in)`.
pub fn action_gradient(oval: &Oval, config: &Configuration) -> Result<DVector<f64>> {
    Ok(gradient_from(&chords_of(oval, config)?))
}

pub fn action_hessian(oval: &Oval, config: &Configuration) -> Result<CyclicHessian> {
    Ok(hessian_from(&chords_of(oval, config)?))
}

pub(crate) fn gradient_and_hessian(
    oval: &Oval,
    config: &Configuration,
) -> Result<(f64, DVector<f64>, CyclicHessian)> {
    let chords = chords_of(oval, config)?;
    Ok((
        -chords.iter().map(|c| c.d).sum::<f64>(),
        gradient_from(&chords),
        hessian_from(&chords),
    ))
}
