//! Substitutes the summed series back into the integral equation, with the
//! integral evaluated by an independent Gauss–Legendre rule.

mod common;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use common::*;

#[test]
fn summed_series_solves_the_integral_equation() {
    let rule = GaussLegendre::new(40.try_into().unwrap());
    let i = Complex64::i();
    for (name, problem, numerics) in cases() {
        let sol = problem.solve(&numerics).unwrap();
        let jost = &sol.jost;
        let grid = &jost.grid;
        let delta = jost.delta;
        let m = |x: f64| grid.interpolate(&jost.normalized, x);
        let breaks = grid.breaks();
        let mut worst: f64 = 0.0;
        for k in 0..60 {
            let x = numerics.x_max * (k as f64 / 60.0).powi(2);
            let mut integral = Complex64::new(0.0, 0.0);
            for w in breaks.windows(2) {
                if w[1] <= x {
                    continue;
                }
                let a = w[0].max(x);
                let re = rule.integrate(a, w[1], |xi| {
                    let k = delta / (2.0 * i) * (1.0 - (-2.0 * i * delta * (xi - x)).exp());
                    (k * sol.context.potential(xi) * m(xi)).re
                });
                let im = rule.integrate(a, w[1], |xi| {
                    let k = delta / (2.0 * i) * (1.0 - (-2.0 * i * delta * (xi - x)).exp());
                    (k * sol.context.potential(xi) * m(xi)).im
                });
                integral += Complex64::new(re, im);
            }
            let r = (m(x) - 1.0 - integral).norm();
            worst = worst.max(r);
        }
        assert!(worst <= 10.0 * numerics.tol, "{name}: residual {worst:e}");
    }
}
