//! Independent check of the Jost solution: the normal-form equation
//! `y″ + δ²y = δ²q y` integrated directly as an initial-value problem from
//! the truncation point back to the origin.
//!
//! Both methods work on `m = y e^{iδx}`, which satisfies
//! `m″ = 2iδ m′ + δ² q m` with `m(x_max) = 1`, `m′(x_max) = 0`. The second
//! homogeneous mode `e^{2iδx}` decays toward the origin when `Im δ < 0`, so
//! marching backward is stable.
//!
//! * [`OracleMethod::BackwardMarch`]: adaptive Dormand–Prince 5(4).
//! * [`OracleMethod::Collocation`]: Chebyshev collocation panel by panel,
//!   each panel solved as a small dense linear system.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dispersion::Potential;
use crate::error::{Error, Result};
use crate::jost::JostSolution;
use crate::spectral::Grid;

/// `|q(x_max)|` above which the free-wave start is not a valid match.
pub const MATCHING_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    BackwardMarch,
    Collocation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub grid: Grid,
    pub delta: Complex64,
    pub y: Vec<Complex64>,
    pub y_prime: Vec<Complex64>,
    pub method: OracleMethod,
    /// `|q(x_max)|`: how far the matching point is from the free-wave regime.
    pub bc_residual: f64,
    /// Accepted steps (march) or panels (collocation).
    pub steps: usize,
}

type State = [Complex64; 2];

fn rhs(delta: Complex64, q: &dyn Potential, x: f64, s: &State) -> State {
    let i = Complex64::i();
    [s[1], 2.0 * i * delta * s[1] + delta * delta * q.q(x) * s[0]]
}

pub fn solve_ode(
    delta: Complex64,
    q: &dyn Potential,
    grid: &Grid,
    tol: f64,
    method: OracleMethod,
) -> Result<OracleSolution> {
    if delta.im > 0.0 || !delta.is_finite() {
        return Err(Error::bad_parameter(
            "delta",
            format!("need Im δ ≤ 0, got {delta}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::bad_parameter("tol", "must be positive"));
    }
    let x_max = grid.x_max();
    let bc_residual = q.q(x_max).norm();
    if !(bc_residual < MATCHING_LIMIT) {
        return Err(Error::BadTruncation(bc_residual));
    }
    let (normalized, steps) = match method {
        OracleMethod::BackwardMarch => march(delta, q, grid, tol)?,
        OracleMethod::Collocation => collocate(delta, q, grid)?,
    };
    let i = Complex64::i();
    let mut y = Vec::with_capacity(grid.len());
    let mut y_prime = Vec::with_capacity(grid.len());
    for (s, &x) in normalized.iter().zip(grid.points()) {
        let e = (-i * delta * x).exp();
        y.push(s[0] * e);
        y_prime.push((s[1] - i * delta * s[0]) * e);
    }
    Ok(OracleSolution {
        grid: grid.clone(),
        delta,
        y,
        y_prime,
        method,
        bc_residual,
        steps,
    })
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn march(
    delta: Complex64,
    q: &dyn Potential,
    grid: &Grid,
    tol: f64,
) -> Result<(Vec<State>, usize)> {
    let xs = grid.points();
    let n = xs.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![[zero; 2]; n];
    let mut state: State = [Complex64::new(1.0, 0.0), zero];
    out[n - 1] = state;
    let slope_scale = delta.norm().max(1e-300);
    let atol = [tol * 1e-3, tol * 1e-3 * slope_scale];
    let mut x = xs[n - 1];
    let mut h = -(0.1 / slope_scale).min(x - xs[0]).max(1e-6);
    let mut steps = 0usize;
    let mut k = [[zero; 2]; 7];
    for target in (0..n - 1).rev() {
        let goal = xs[target];
        while x > goal {
            let last = x + h <= goal;
            let step = if last { goal - x } else { h };
            k[0] = rhs(delta, q, x, &state);
            for s in 1..7 {
                let mut trial = state;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j] * step;
                    trial[0] += kj[0] * a;
                    trial[1] += kj[1] * a;
                }
                k[s] = rhs(delta, q, x + C[s] * step, &trial);
            }
            let mut next = state;
            let mut err = 0.0f64;
            for c in 0..2 {
                let mut inc = zero;
                let mut e = zero;
                for s in 0..7 {
                    inc += k[s][c] * B[s];
                    e += k[s][c] * E[s];
                }
                next[c] += inc * step;
                let sc = atol[c] + tol * state[c].norm().max(next[c].norm());
                err = err.max((e * step).norm() / sc);
            }
            if !err.is_finite() {
                return Err(Error::StiffnessFailure { x });
            }
            if err <= 1.0 {
                x = if last { goal } else { x + step };
                state = next;
                steps += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !last || err > 1.0 {
                h = step * factor;
            }
            if h.abs() < 1e-13 * grid.x_max().max(1.0) {
                return Err(Error::StiffnessFailure { x });
            }
        }
        out[target] = state;
    }
    Ok((out, steps))
}

fn collocate(delta: Complex64, q: &dyn Potential, grid: &Grid) -> Result<(Vec<State>, usize)> {
    let p = grid.nodes_per_panel();
    let xs = grid.points();
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    let mut out = vec![[zero; 2]; xs.len()];
    let d_ref = grid.rule().diff();
    let mut right: State = [Complex64::new(1.0, 0.0), zero];
    out[xs.len() - 1] = right;
    for panel in (0..grid.n_panels()).rev() {
        let (a, b) = grid.panel(panel);
        let scale = 2.0 / (b - a);
        let off = grid.panel_offset(panel);
        let d = DMatrix::from_fn(p, p, |r, c| Complex64::new(d_ref[r][c] * scale, 0.0));
        let d2 = &d * &d;
        let mut lhs = DMatrix::from_element(p, p, zero);
        let mut rhs_v = DVector::from_element(p, zero);
        // ODE at interior nodes, both conditions at the right end.
        for r in 1..p - 1 {
            let qr = q.q(xs[off + r]);
            for c in 0..p {
                lhs[(r, c)] = d2[(r, c)] - 2.0 * i * delta * d[(r, c)];
            }
            lhs[(r, r)] -= delta * delta * qr;
        }
        for c in 0..p {
            lhs[(0, c)] = d[(p - 1, c)];
            lhs[(p - 1, c)] = zero;
        }
        lhs[(p - 1, p - 1)] = Complex64::new(1.0, 0.0);
        rhs_v[0] = right[1];
        rhs_v[p - 1] = right[0];
        let sol = lhs
            .lu()
            .solve(&rhs_v)
            .ok_or(Error::StiffnessFailure { x: a })?;
        let slope = &d * &sol;
        for j in 0..p {
            out[off + j] = [sol[j], slope[j]];
        }
        right = [sol[0], slope[0]];
    }
    Ok((out, grid.n_panels()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    /// `sup |f − y| / sup |f|`.
    pub max_relative: f64,
    pub location: f64,
    /// The two solutions used different `δ`, or disagree beyond [`AGREEMENT`].
    pub flagged: bool,
}

/// Relative sup-norm deviation accepted between series and oracle.
pub const AGREEMENT: f64 = 1e-6;

/// Sup-norm deviation of the oracle from the Jost solution, on the Jost grid.
pub fn compare(jost: &JostSolution, ode: &OracleSolution) -> Deviation {
    let same_grid = jost.grid.points() == ode.grid.points();
    let scale = jost.f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = Deviation {
        max_relative: 0.0,
        location: 0.0,
        flagged: false,
    };
    for (k, &x) in jost.grid.points().iter().enumerate() {
        let y = if same_grid {
            ode.y[k]
        } else {
            ode.grid.interpolate(&ode.y, x)
        };
        let d = (jost.f[k] - y).norm() / scale;
        if d > worst.max_relative {
            worst.max_relative = d;
            worst.location = x;
        }
    }
    let delta_mismatch = (jost.delta - ode.delta).norm() > 1e-12 * jost.delta.norm();
    worst.flagged = delta_mismatch || !(worst.max_relative <= AGREEMENT);
    worst
}
