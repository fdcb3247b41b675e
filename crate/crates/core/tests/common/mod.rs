#![allow(dead_code)]

use std::sync::LazyLock;

use billiard_core::{Oval, OvalSpec, SurfaceKind};
use nalgebra::Vector3;

/// Asymmetric polar ovals, one per surface.
pub fn polar_spec(kind: SurfaceKind) -> OvalSpec {
    let c0 = match kind {
        SurfaceKind::Euclidean => 1.0,
        _ => 0.8,
    };
    OvalSpec::polar(kind, c0, vec![[0.0, 0.0], [0.05, 0.0], [0.0, 0.02]])
}

pub static POLAR: LazyLock<Vec<Oval>> = LazyLock::new(|| {
    SurfaceKind::ALL
        .iter()
        .map(|&k| Oval::build(&polar_spec(k), 1024).unwrap())
        .collect()
});

/// Geodesic distance recovered from the ambient chord, accurate for nearby points.
pub fn short_distance(kind: SurfaceKind, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let w = a - b;
    match kind {
        SurfaceKind::Euclidean => w.norm(),
        SurfaceKind::Sphere => 2.0 * (0.5 * w.norm()).asin(),
        SurfaceKind::Hyperbolic => {
            let c = (w.x * w.x + w.y * w.y - w.z * w.z).max(0.0).sqrt();
            2.0 * (0.5 * c).asinh()
        }
    }
}
