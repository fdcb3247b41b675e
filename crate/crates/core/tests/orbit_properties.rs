mod common;

use billiard_core::orbits::{
    action, action_gradient, action_hessian, closure_residual, find_birkhoff, strip_bound,
    strip_check, SearchOptions,
};
use billiard_core::Configuration;
use common::POLAR;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn action_derivatives_match_finite_differences(
        idx in 0usize..3,
        rot in 0usize..3,
        start in 0.0f64..1.0,
        jitter in proptest::collection::vec(-0.2f64..0.2, 5),
    ) {
        let oval = &POLAR[idx];
        let (m, n) = [(1, 2), (1, 3), (2, 5)][rot];
        let l = oval.length();
        let gap = m as f64 * l / n as f64;
        let s: Vec<f64> = (0..n)
            .map(|i| start * l + i as f64 * gap + if i == 0 { 0.0 } else { jitter[i] * gap })
            .collect();
        let c = Configuration::new(oval, m, s.clone()).unwrap();
        let g = action_gradient(oval, &c).unwrap();
        let h = action_hessian(oval, &c).unwrap().to_matrix();
        let at = |k: usize, dx: f64| {
            let mut t = s.clone();
            t[k] += dx;
            Configuration::new(oval, m, t).unwrap()
        };
        let eps = 1e-5;
        for k in 0..n {
            let fd = (action(oval, &at(k, eps)).unwrap() - action(oval, &at(k, -eps)).unwrap())
                / (2.0 * eps);
            prop_assert!((fd - g[k]).abs() < 1e-8, "grad {k}: {fd} vs {}", g[k]);
            let gp = action_gradient(oval, &at(k, eps)).unwrap();
            let gm = action_gradient(oval, &at(k, -eps)).unwrap();
            for r in 0..n {
                let fd = (gp[r] - gm[r]) / (2.0 * eps);
                prop_assert!((fd - h[(r, k)]).abs() < 1e-5, "H[{r},{k}]: {fd} vs {}", h[(r, k)]);
            }
        }
    }
}

#[test]
fn found_orbits_are_closed_critical_and_in_the_strip() {
    for oval in POLAR.iter() {
        for (m, n) in [(1, 2), (1, 3), (2, 5)] {
            let found = find_birkhoff(oval, m, n, &SearchOptions::default()).unwrap();
            assert!(found.orbits.len() >= 2, "{} ({m},{n})", oval.kind());
            for o in &found.orbits {
                assert!(o.residual < 1e-9);
                assert!(closure_residual(oval, o).unwrap() < 1e-9);
                assert!((o.monodromy.determinant() - 1.0).abs() < 1e-7);
                assert!(strip_check(o, &strip_bound(oval, n).unwrap()));
                if !o.degenerate {
                    assert!(o.residue.discrepancy() < 1e-6);
                }
            }
        }
    }
}
