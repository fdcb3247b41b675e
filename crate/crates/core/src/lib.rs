//! Convex billiards on the three constant-curvature surfaces.
//!
//! Points live in a single ambient `R^3` model: the plane `{z = 1}`, the upper unit
//! hemisphere, and the upper sheet of the hyperboloid `x^2 + y^2 - z^2 = -1`. Geodesics
//! are the intersections of the surface with planes through the origin.
//!
//! - [`geometry`]: points, tangent vectors, distances and geodesics.
//! - [`oval`]: boundary curves, arclength parameterization and normal perturbations.
//! - [`billiard`]: the billiard map, its generating function and Jacobian.
//! - [`orbits`]: Birkhoff periodic orbits, their action, Hessian and stability.

pub mod billiard;
pub mod error;
pub mod geometry;
mod jet;
pub mod orbits;
pub mod oval;
mod root;
pub mod verify;

pub use billiard::{JacobianMatrix, MomentumPoint, PhasePoint};
pub use error::{Error, Result};
pub use geometry::{SurfaceKind, SurfacePoint, TangentVector};
pub use orbits::{Configuration, PeriodicOrbit, StabilityClass};
pub use oval::{CurveFamily, FramedPoint, Oval, OvalCertificate, OvalSpec, PerturbationProfile};
