//! Shared fixtures for the benchmarks.

use billiard_core::{Oval, OvalSpec, SurfaceKind};

pub const RESOLUTION: usize = billiard_core::oval::DEFAULT_RESOLUTION;

/// The polar oval used throughout the benchmarks, one per surface.
pub fn polar(kind: SurfaceKind) -> Oval {
    let c0 = if kind == SurfaceKind::Euclidean {
        1.0
    } else {
        0.8
    };
    let spec = OvalSpec::polar(kind, c0, vec![[0.0, 0.0], [0.05, 0.0], [0.0, 0.02]]);
    Oval::build(&spec, RESOLUTION).expect("benchmark oval")
}

pub fn ellipse() -> Oval {
    Oval::build(&OvalSpec::ellipse(1.2, 1.0), RESOLUTION).expect("benchmark oval")
}
