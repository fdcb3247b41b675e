//! Normal-offset profiles `lambda(s)` used to perturb an oval along its normal.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::jet::Jet;

/// A smooth periodic function of arclength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PerturbationProfile {
    /// `lambda = value` everywhere.
    Constant { value: f64 },
    /// `lambda(s) = sum_j a_j cos(2 pi j s / period) + b_j sin(2 pi j s / period)`,
    /// `coeffs[j - 1] = [a_j, b_j]`.
    Fourier { period: f64, coeffs: Vec<[f64; 2]> },
    /// `amplitude (s - center)^2 exp(c - c / (1 - x^2))` with `x = 2 (s - center) / width`:
    /// vanishes to first order at `center` where `lambda'' = 2 amplitude`, and is supported
    /// in `(center - width/2, center + width/2)` modulo `period`.
    Bump {
        center: f64,
        width: f64,
        amplitude: f64,
        period: f64,
    },
}

/// Sharpness of the bump envelope. At 8 the second derivative of `x^2 envelope(x)`
/// peaks at the center, so the bump bends the curve most where it is meant to.
const BUMP_SHARPNESS: f64 = 8.0;

fn wrap_centered(x: f64, period: f64) -> f64 {
    x - period * (x / period).round()
}

impl PerturbationProfile {
    /// The bump used to change curvature at `center` without moving the point or tangent there.
    pub fn bump(center: f64, width: f64, amplitude: f64, period: f64) -> Self {
        PerturbationProfile::Bump {
            center,
            width,
            amplitude,
            period,
        }
    }

    /// Closed support interval `(start, end)` in arclength, `None` when it is the whole curve.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            PerturbationProfile::Bump { center, width, .. } => {
                Some((center - 0.5 * width, center + 0.5 * width))
            }
            _ => None,
        }
    }

    /// True when `s` lies outside the support by at least `margin`.
    pub(crate) fn vanishes_near(&self, s: f64, margin: f64) -> bool {
        match self {
            PerturbationProfile::Constant { value } => *value == 0.0,
            PerturbationProfile::Fourier { coeffs, .. } => {
                coeffs.iter().flatten().all(|v| *v == 0.0)
            }
            PerturbationProfile::Bump {
                center,
                width,
                amplitude,
                period,
            } => {
                *amplitude == 0.0
                    || wrap_centered(s - center, *period).abs() >= 0.5 * width + margin
            }
        }
    }

    /// Evaluates the profile on an arclength jet.
    pub(crate) fn eval_jet(&self, s: &Jet) -> Jet {
        let n = s.len();
        match self {
            PerturbationProfile::Constant { value } => Jet::constant(*value, n),
            PerturbationProfile::Fourier { period, coeffs } => {
                let mut out = Jet::constant(0.0, n);
                for (j, [a, b]) in coeffs.iter().enumerate() {
                    let (sn, cs) = s.scale(TAU * (j + 1) as f64 / period).sin_cos();
                    out = out + cs.scale(*a) + sn.scale(*b);
                }
                out
            }
            PerturbationProfile::Bump {
                center,
                width,
                amplitude,
                period,
            } => {
                let offset = wrap_centered(s.value() - center, *period);
                let half = 0.5 * width;
                if offset.abs() >= half || *amplitude == 0.0 {
                    return Jet::constant(0.0, n);
                }
                let delta = s.with_value(offset);
                let x = delta.scale(1.0 / half);
                let envelope =
                    ((-(x * x) + 1.0).recip().scale(-BUMP_SHARPNESS) + BUMP_SHARPNESS).exp();
                (delta * delta * envelope).scale(*amplitude)
            }
        }
    }

    /// `(lambda, lambda', lambda'')` at arclength `s`.
    pub fn value(&self, s: f64) -> (f64, f64, f64) {
        let j = self.eval_jet(&Jet::variable(s, 3));
        (j.deriv(0), j.deriv(1), j.deriv(2))
    }

    /// Sampled sup norm `max_s max(|lambda|, |lambda'|, |lambda''|)`.
    pub fn c2_norm(&self) -> f64 {
        let (start, span) = match self {
            PerturbationProfile::Constant { value } => return value.abs(),
            PerturbationProfile::Fourier { period, .. } => (0.0, *period),
            PerturbationProfile::Bump { center, width, .. } => (center - 0.5 * width, *width),
        };
        const SAMPLES: usize = 8192;
        (0..=SAMPLES)
            .map(|i| {
                let (l0, l1, l2) = self.value(start + span * i as f64 / SAMPLES as f64);
                l0.abs().max(l1.abs()).max(l2.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Upper bound on `max |lambda|`.
    pub fn sup_abs(&self) -> f64 {
        match self {
            PerturbationProfile::Constant { value } => value.abs(),
            PerturbationProfile::Fourier { coeffs, .. } => {
                coeffs.iter().map(|[a, b]| a.hypot(*b)).sum()
            }
            // x^2 envelope(x) <= 1
            PerturbationProfile::Bump {
                width, amplitude, ..
            } => amplitude.abs() * 0.25 * width * width,
        }
    }
}
