use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orbits::{
    closure_residual, gradient_and_hessian, strip_bound, strip_check, Configuration, PeriodicOrbit,
    StabilityClass,
};
use crate::oval::Oval;

pub const DEFAULT_TOLERANCE: f64 = 1e-11;
const MAX_NEWTON: usize = 100;
const MAX_RELAX: usize = 200;
const DEDUP_TOL: f64 = 1e-6;
/// Returned orbits must close under the map to this accuracy.
const CLOSURE_TOL: f64 = 1e-9;

/// Knobs for [`find_birkhoff`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Number of starting values of `s0`, spread uniformly over the curve.
    pub seeds: usize,
    /// Random displacement of the other seed vertices, as a fraction of the mean gap.
    pub jitter: f64,
    pub rng_seed: u64,
    /// Target `|grad W|`.
    pub tolerance: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seeds: 16,
            jitter: 0.1,
            rng_seed: 0,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SearchOptions {
    pub fn with_seeds(seeds: usize) -> Self {
        Self {
            seeds,
            ..Self::default()
        }
    }
}

/// Distinct orbits found by the multi-start search, ordered by action.
#[derive(Debug, Clone)]
pub struct BirkhoffSearch {
    pub orbits: Vec<PeriodicOrbit>,
    pub converged_seeds: usize,
    /// Why the other seeds were dropped.
    pub failures: Vec<String>,
}

/// Solves `grad W = 0` by Newton's method on the cyclic Hessian (pseudo-inverse when it
/// is singular), with backtracking on `|grad W|` and on the vertex ordering.
pub fn newton_refine(oval: &Oval, config: &Configuration, tol: f64) -> Result<Configuration> {
    newton_counted(oval, config, tol).map(|(c, _)| c)
}

pub(crate) fn newton_counted(
    oval: &Oval,
    config: &Configuration,
    tol: f64,
) -> Result<(Configuration, usize)> {
    let mut cur = config.clone();
    let (_, mut g, mut h) = gradient_and_hessian(oval, &cur)?;
    for it in 0..MAX_NEWTON {
        let gn = g.norm();
        if gn < tol {
            return Ok((cur, it));
        }
        let hm = h.to_matrix();
        let newton = pseudo_solve(&hm, &g).map(|d| -d);
        let mut accepted = false;
        for dir in newton.into_iter().chain(std::iter::once(-(&hm * &g))) {
            let mut alpha = 1.0;
            for _ in 0..40 {
                let trial = step(&cur, &dir, alpha);
                if let Ok((_, g2, h2)) = gradient_and_hessian(oval, &trial) {
                    if g2.norm() < gn {
                        cur = trial;
                        g = g2;
                        h = h2;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if accepted {
                break;
            }
        }
        if !accepted {
            return Err(Error::Convergence {
                iterations: it,
                residual: gn,
            });
        }
    }
    let residual = g.norm();
    if residual < tol {
        Ok((cur, MAX_NEWTON))
    } else {
        Err(Error::Convergence {
            iterations: MAX_NEWTON,
            residual,
        })
    }
}

fn step(c: &Configuration, dir: &DVector<f64>, alpha: f64) -> Configuration {
    c.with_s(
        c.s()
            .iter()
            .zip(dir.iter())
            .map(|(s, d)| s + alpha * d)
            .collect(),
    )
}

/// Minimum-norm solution of `H x = g`, ignoring singular values below `1e-10 sigma_max`.
fn pseudo_solve(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = h.clone().svd(true, true);
    let eps = 1e-10 * svd.singular_values.max();
    svd.solve(g, eps).ok()
}

/// Minimizes `W` over the vertices other than `s0`, which stays fixed.
fn relax(oval: &Oval, config: &Configuration) -> Result<Configuration> {
    let mut cur = config.clone();
    let n = cur.n();
    for _ in 0..MAX_RELAX {
        let (w, g, h) = gradient_and_hessian(oval, &cur)?;
        let gr = g.rows(1, n - 1).into_owned();
        if gr.norm() < 1e-10 {
            break;
        }
        let hr = h.to_matrix().view((1, 1), (n - 1, n - 1)).into_owned();
        let mut dir = match hr.cholesky() {
            Some(ch) => -ch.solve(&gr),
            None => -&gr,
        };
        if dir.dot(&gr) >= 0.0 {
            dir = -&gr;
        }
        let slope = dir.dot(&gr);
        let mut full = DVector::zeros(n);
        full.rows_mut(1, n - 1).copy_from(&dir);
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..50 {
            let trial = step(&cur, &full, alpha);
            if let Ok((w2, _, _)) = gradient_and_hessian(oval, &trial) {
                if w2 <= w + 1e-4 * alpha * slope {
                    cur = trial;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok(cur)
}

fn seed_configuration(
    oval: &Oval,
    m: usize,
    n: usize,
    k: usize,
    opts: &SearchOptions,
) -> Result<Configuration> {
    let l = oval.length();
    let gap = m as f64 * l / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    rng.set_stream(k as u64);
    let s0 = l * k as f64 / opts.seeds as f64;
    let s = (0..n)
        .map(|i| {
            let jitter = if i == 0 || opts.jitter == 0.0 {
                0.0
            } else {
                rng.random_range(-opts.jitter..opts.jitter) * gap
            };
            s0 + i as f64 * gap + jitter
        })
        .collect();
    Configuration::new(oval, m, s)
}

fn run_seed(
    oval: &Oval,
    m: usize,
    n: usize,
    k: usize,
    opts: &SearchOptions,
) -> Result<PeriodicOrbit> {
    let seed = seed_configuration(oval, m, n, k, opts)?;
    let relaxed = relax(oval, &seed)?;
    let refined = newton_refine(oval, &relaxed, opts.tolerance)?;
    let orbit = PeriodicOrbit::from_configuration(oval, refined)?;
    let closure = closure_residual(oval, &orbit)?;
    if closure > CLOSURE_TOL {
        return Err(Error::Solver(format!(
            "critical configuration does not close under the map (residual {closure:e})"
        )));
    }
    Ok(orbit)
}

fn same_vertices(oval: &Oval, a: &PeriodicOrbit, b: &PeriodicOrbit) -> bool {
    let l = oval.length();
    let sorted = |o: &PeriodicOrbit| {
        let mut v: Vec<f64> = o.phase_points.iter().map(|x| x.s()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (va, vb) = (sorted(a), sorted(b));
    if va.len() != vb.len() {
        return false;
    }
    // vertex sets on R/lZ agree up to the choice of starting vertex
    (0..vb.len()).any(|shift| {
        va.iter().enumerate().all(|(i, x)| {
            let y = vb[(i + shift) % vb.len()];
            let d = (x - y).rem_euclid(l);
            d.min(l - d) < DEDUP_TOL
        })
    })
}

/// Multi-start search for Birkhoff orbits of rotation type `(m, n)`.
///
/// Each seed fixes `s0` on a uniform grid, maximizes the polygon length over the other
/// vertices, then refines all vertices with [`newton_refine`]. Orbits with the same vertex
/// set are merged. On a geodesic circle every parabolic orbit is a rotation of any other
/// with the same action, so each such family is reported once; elsewhere the members of
/// a degenerate family are distinct orbits and are all kept.
pub fn find_birkhoff(
    oval: &Oval,
    m: usize,
    n: usize,
    opts: &SearchOptions,
) -> Result<BirkhoffSearch> {
    if !(0 < m && m < n) || gcd(m, n) != 1 {
        return Err(Error::Usage(format!(
            "rotation type needs 0 < m < n and gcd(m, n) = 1, got ({m}, {n})"
        )));
    }
    if opts.seeds == 0 || !(opts.tolerance > 0.0) || !(0.0..0.5).contains(&opts.jitter) {
        return Err(Error::Usage(
            "search needs seeds >= 1, tolerance > 0 and jitter in [0, 0.5)".into(),
        ));
    }
    let results: Vec<Result<PeriodicOrbit>> = (0..opts.seeds)
        .into_par_iter()
        .map(|k| run_seed(oval, m, n, k, opts))
        .collect();

    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let mut failures = Vec::new();
    let mut converged_seeds = 0;
    let rotation_invariant = oval.has_constant_curvature();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(orbit) => {
                converged_seeds += 1;
                let duplicate = orbits.iter().any(|o| {
                    same_vertices(oval, o, &orbit)
                        || (rotation_invariant
                            && o.class == StabilityClass::Parabolic
                            && orbit.class == StabilityClass::Parabolic
                            && (o.action - orbit.action).abs() < 1e-8 * o.action.abs().max(1.0))
                });
                if !duplicate {
                    orbits.push(orbit);
                }
            }
            Err(e) => failures.push(format!("seed {k}: {e}")),
        }
    }
    orbits.sort_by(|a, b| a.action.total_cmp(&b.action));
    Ok(BirkhoffSearch {
        orbits,
        converged_seeds,
        failures,
    })
}

/// Strip-bound verdict for every orbit of a search.
pub fn strip_checks(oval: &Oval, search: &BirkhoffSearch) -> Result<Vec<bool>> {
    search
        .orbits
        .iter()
        .map(|o| Ok(strip_check(o, &strip_bound(oval, o.n())?)))
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
