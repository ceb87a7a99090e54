mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use tubewave::oracle::{compare, solve_ode, OracleMethod};
use tubewave::prelude::*;

use common::*;

fn deviation(sol: &Solution, tol: f64, method: OracleMethod) -> f64 {
    let ode = solve_ode(sol.context.delta, &sol.context, &sol.jost.grid, tol, method).unwrap();
    compare(&sol.jost, &ode).max_relative
}

#[test]
fn series_matches_both_oracles_on_all_cases() {
    for (name, problem, numerics) in cases() {
        let sol = problem.solve(&numerics).unwrap();
        for method in [OracleMethod::BackwardMarch, OracleMethod::Collocation] {
            let d = deviation(&sol, 1e-10, method);
            assert!(d < 1e-6, "{name} {method:?}: {d:e}");
        }
    }
}

#[test]
fn march_error_shrinks_with_its_tolerance() {
    for (name, problem, numerics) in cases() {
        let sol = problem.solve(&numerics).unwrap();
        let devs: Vec<f64> = [1e-4, 1e-6, 1e-8]
            .iter()
            .map(|&tol| deviation(&sol, tol, OracleMethod::BackwardMarch))
            .collect();
        // once both sit on the series' own accuracy floor there is nothing to order
        let floor = 1e-9;
        for w in devs.windows(2) {
            assert!(w[1] <= w[0].max(floor), "{name}: {devs:?}");
        }
        assert!(devs[2] < 1e-6, "{name}: {devs:?}");
    }
}

#[test]
fn wrong_root_is_caught() {
    // heavy damping makes the sign of Im δ visible over the domain
    let problem = common::problem(
        RheologySpectrum::maxwell(400.0, 0.2).unwrap(),
        bump(0.5, 1.0),
        flat(),
    );
    let numerics = Numerics {
        x_max: 12.0,
        ..Numerics::default()
    };
    let sol = problem.solve(&numerics).unwrap();
    let delta = sol.context.delta;
    assert!(
        delta.im * numerics.x_max < -0.5,
        "damping too weak: {delta}"
    );
    let good = solve_ode(
        delta,
        &sol.context,
        &sol.jost.grid,
        1e-10,
        OracleMethod::BackwardMarch,
    )
    .unwrap();
    assert!(!compare(&sol.jost, &good).flagged);

    // the growing root cannot be marched stably, so its reference is the
    // free wave, which is what the far field of that root looks like
    let wrong = delta.conj();
    let i = Complex64::i();
    let grid = sol.jost.grid.clone();
    let y: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&x| (-i * wrong * x).exp())
        .collect();
    let y_prime = y.iter().map(|v| -i * wrong * v).collect();
    let bad = OracleSolution {
        grid,
        delta: wrong,
        y,
        y_prime,
        method: OracleMethod::BackwardMarch,
        bc_residual: 0.0,
        steps: 0,
    };
    let d = compare(&sol.jost, &bad);
    assert!(d.flagged);
    assert!(
        d.max_relative > 0.1,
        "negated Im δ still agrees: {:e}",
        d.max_relative
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_matches_march_for_random_bumps(
        a1 in -0.6f64..1.5,
        k1 in 0.4f64..2.5,
        a2 in -0.5f64..2.0,
        k2 in 0.4f64..2.5,
        eta in 0.001f64..10.0,
        lambda in 0.01f64..0.5,
    ) {
        let problem = common::problem(RheologySpectrum::maxwell(eta, lambda).unwrap(), bump(a1, k1), bump(a2, k2));
        let numerics = Numerics { x_max: 50.0, ..Numerics::default() };
        let sol = problem.solve(&numerics).unwrap();
        let d = deviation(&sol, 1e-10, OracleMethod::BackwardMarch);
        prop_assert!(d < 1e-6, "deviation {:e}", d);
    }
}
