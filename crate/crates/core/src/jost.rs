//! Jost-type solution of the half-line problem by successive approximations.
//!
//! The decaying solution of `y″ + δ²y = δ²q y` is the fixed point of the
//! Volterra equation
//!
//! ```text
//! f(x) = e^{−iδx} + δ ∫ₓ^∞ sin δ(ξ − x) q(ξ) f(ξ) dξ.
//! ```
//!
//! The solver works with the normalized function `m(x) = f(x) e^{iδx}`,
//! for which the kernel becomes `(δ/2i)(1 − e^{−2iδ(ξ−x)})`. With
//! `Im δ ≤ 0` that kernel is bounded by `|δ|`, so every stored quantity is
//! `O(1)` and the `n`-th iterate obeys `|m_n| ≤ (|δ|·∫|q|)ⁿ / n!`.
//!
//! Each iterate needs the two running integrals
//!
//! ```text
//! A(x) = ∫ₓ^X q m dξ,    B(x) = ∫ₓ^X e^{−2iδ(ξ−x)} q m dξ,
//! ```
//!
//! accumulated panel by panel from `X = x_max` toward the origin, so one
//! iterate costs `O(N·p)` on a grid of `N` panels with `p` nodes.
//! Each term carries exactly one factor of `δ` from the kernel; the terms are
//! summed without further weights.

use num_complex::Complex64;

use crate::dispersion::{IntegrabilityCertificate, Potential};
use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Sup-norm bound of `sin δt · e^{−iδt}` for `t ≥ 0`, `Im δ ≤ 0`.
pub const KERNEL_BOUND: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostOptions {
    /// Target for both the last term's sup-norm and the remainder bound.
    pub tol: f64,
    pub n_max: usize,
}

impl Default for JostOptions {
    fn default() -> Self {
        JostOptions {
            tol: 1e-10,
            n_max: 50,
        }
    }
}

/// One term of the normalized Neumann series.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannTerm {
    /// `m_n(x) = f_n(x) e^{iδx}` on the grid.
    pub value: Vec<Complex64>,
    /// `f_n′(x) e^{iδx}` on the grid.
    pub slope: Vec<Complex64>,
    pub sup_norm: f64,
    /// Bound on the contribution of `[x_max, ∞)` that the quadrature omits.
    pub tail_estimate: f64,
}

/// Applies the Volterra operator once: `prev` is the previous normalized
/// term sampled on `grid`, `q` the potential on the same grid, and `q_tail`
/// an estimate of `∫_{x_max}^∞ |q|`.
pub fn neumann_iterate(
    prev: &[Complex64],
    q: &[Complex64],
    delta: Complex64,
    grid: &Grid,
    q_tail: f64,
) -> NeumannTerm {
    assert_eq!(prev.len(), grid.len());
    assert_eq!(q.len(), grid.len());
    let p = grid.nodes_per_panel();
    let integ = grid.rule().integ();
    let xs = grid.points();
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let value_factor = delta / (2.0 * i);
    let slope_factor = -0.5 * delta * delta;

    let mut value = vec![zero; grid.len()];
    let mut slope = vec![zero; grid.len()];
    let mut a_run = zero;
    let mut b_run = zero;
    let mut h = vec![zero; p];
    let mut h_shift = vec![zero; p];
    for panel in (0..grid.n_panels()).rev() {
        let (a, b) = grid.panel(panel);
        let half = 0.5 * (b - a);
        let off = grid.panel_offset(panel);
        for k in 0..p {
            h[k] = q[off + k] * prev[off + k];
            h_shift[k] = (-2.0 * i * delta * (xs[off + k] - a)).exp() * h[k];
        }
        let (mut a_left, mut b_left) = (zero, zero);
        for j in 0..p {
            let x = xs[off + j];
            let mut ia = zero;
            let mut ib = zero;
            for k in 0..p {
                ia += h[k] * integ[j][k];
                ib += h_shift[k] * integ[j][k];
            }
            let big_a = a_run + ia * half;
            let big_b = (-2.0 * i * delta * (b - x)).exp() * b_run
                + (2.0 * i * delta * (x - a)).exp() * ib * half;
            value[off + j] = value_factor * (big_a - big_b);
            slope[off + j] = slope_factor * (big_a + big_b);
            if j == 0 {
                a_left = big_a;
                b_left = big_b;
            }
        }
        a_run = a_left;
        b_run = b_left;
    }
    let sup_norm = value.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let prev_sup = prev.iter().map(|v| v.norm()).fold(0.0, f64::max);
    NeumannTerm {
        value,
        slope,
        sup_norm,
        tail_estimate: delta.norm() * KERNEL_BOUND * q_tail * prev_sup,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JostSolution {
    pub grid: Grid,
    pub delta: Complex64,
    /// `f(x, −δ)`.
    pub f: Vec<Complex64>,
    /// `f′(x, −δ)`, from the differentiated integral equation.
    pub f_prime: Vec<Complex64>,
    /// `f(x) e^{iδx}`.
    pub normalized: Vec<Complex64>,
    /// `f′(x) e^{iδx}`.
    pub normalized_slope: Vec<Complex64>,
    /// `f(x) e^{iδx} − 1`, summed from the terms `n ≥ 1` directly.
    pub scattered: Vec<Complex64>,
    /// Number of series terms summed, including the free term.
    pub n_terms: usize,
    /// Sup-norm of each normalized term, starting with the free term.
    pub term_norms: Vec<f64>,
    pub kernel_bound: f64,
    pub q_l1: f64,
    /// Certified bound on the sum of all dropped series terms.
    pub tail_bound: f64,
    /// Estimated effect of truncating `q` at `x_max`.
    pub truncation_bound: f64,
    /// `sup |m − 1 − K m|` of the returned normalized solution.
    pub fixed_point_residual: f64,
}

impl JostSolution {
    pub fn f_at_origin(&self) -> Complex64 {
        self.f[0]
    }

    pub fn f_prime_at_origin(&self) -> Complex64 {
        self.f_prime[0]
    }

    /// Majorant `(|δ|·K·q_l1)ⁿ / n!` for the `n`-th normalized term.
    pub fn weierstrass_bound(&self, n: usize) -> f64 {
        let c = self.delta.norm() * self.kernel_bound * self.q_l1;
        (1..=n).fold(1.0, |acc, k| acc * c / k as f64)
    }
}

/// Sums the Neumann series until the last term and the certified remainder
/// both fall below `opts.tol`.
pub fn solve_jost(
    delta: Complex64,
    q: &dyn Potential,
    cert: &IntegrabilityCertificate,
    grid: &Grid,
    opts: &JostOptions,
) -> Result<JostSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::bad_parameter("tol", "must be positive"));
    }
    if delta.im > 0.0 || !delta.is_finite() {
        return Err(Error::bad_parameter(
            "delta",
            format!("need Im δ ≤ 0, got {delta}"),
        ));
    }
    let q_samples: Vec<Complex64> = grid.points().iter().map(|&x| q.q(x)).collect();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let c = delta.norm() * KERNEL_BOUND * cert.q_l1;
    let growth = c.exp_m1();

    let mut normalized = vec![one; grid.len()];
    let mut scattered = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut slope = vec![-i * delta; grid.len()];
    let mut prev = normalized.clone();
    let mut term_norms = vec![1.0];
    let mut remainder = growth;
    let mut converged = c == 0.0;
    if converged {
        remainder = 0.0;
    }
    while !converged {
        let n = term_norms.len();
        if n > opts.n_max {
            return Err(Error::NoConvergence(format!(
                "last term norm {:e} after {} terms (remainder bound {remainder:e})",
                term_norms.last().unwrap(),
                n
            )));
        }
        let term = neumann_iterate(&prev, &q_samples, delta, grid, cert.tail);
        if !term.sup_norm.is_finite() {
            return Err(Error::OverflowRisk { term: n });
        }
        for k in 0..grid.len() {
            normalized[k] += term.value[k];
            scattered[k] += term.value[k];
            slope[k] += term.slope[k];
        }
        term_norms.push(term.sup_norm);
        remainder = term.sup_norm * growth;
        converged = term.sup_norm < opts.tol && remainder < opts.tol;
        prev = term.value;
    }
    if remainder >= opts.tol {
        return Err(Error::TruncationTooShort {
            bound: remainder,
            tol: opts.tol,
        });
    }

    let image = neumann_iterate(&normalized, &q_samples, delta, grid, cert.tail);
    let fixed_point_residual = normalized
        .iter()
        .zip(&image.value)
        .map(|(m, km)| (m - one - km).norm())
        .fold(0.0, f64::max);
    if fixed_point_residual > 10.0 * opts.tol {
        return Err(Error::NoConvergence(format!(
            "fixed-point residual {fixed_point_residual:e} exceeds 10·tol"
        )));
    }

    let phase: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&x| (-i * delta * x).exp())
        .collect();
    let f = normalized.iter().zip(&phase).map(|(m, e)| m * e).collect();
    let f_prime = slope.iter().zip(&phase).map(|(s, e)| s * e).collect();
    Ok(JostSolution {
        grid: grid.clone(),
        delta,
        f,
        f_prime,
        normalized,
        normalized_slope: slope,
        scattered,
        n_terms: term_norms.len(),
        term_norms,
        kernel_bound: KERNEL_BOUND,
        q_l1: cert.q_l1,
        tail_bound: remainder,
        truncation_bound: delta.norm() * cert.tail * (2.0 * c).exp(),
        fixed_point_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::certify_integrability;
    use crate::profile::TailDecay;
    use crate::spectral::GridSpec;

    fn grid(x_max: f64, panels: usize) -> Grid {
        Grid::new(&GridSpec::uniform(x_max, panels, 16)).unwrap()
    }

    #[test]
    fn zero_potential_returns_free_wave() {
        let g = grid(10.0, 8);
        let delta = Complex64::new(1.2, -0.1);
        let q = |_x: f64| Complex64::new(0.0, 0.0);
        let sol = solve_jost(
            delta,
            &q,
            &IntegrabilityCertificate::zero(10.0),
            &g,
            &JostOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.n_terms, 1);
        for (k, &x) in g.points().iter().enumerate() {
            let e = (-Complex64::i() * delta * x).exp();
            assert!((sol.f[k] - e).norm() <= 1e-15 * e.norm());
            assert!(
                (sol.f_prime[k] + Complex64::i() * delta * e).norm()
                    <= 1e-15 * e.norm() * delta.norm()
            );
        }
        let term = neumann_iterate(
            &sol.normalized,
            &vec![Complex64::new(0.0, 0.0); g.len()],
            delta,
            &g,
            0.0,
        );
        assert_eq!(term.sup_norm, 0.0);
    }

    #[test]
    fn first_term_matches_brute_force_quadrature() {
        let eps = 1e-3;
        let delta = Complex64::new(1.4, -0.05);
        let q = move |x: f64| Complex64::new(eps * (-x).exp(), 0.0);
        let g = grid(40.0, 40);
        let ones = vec![Complex64::new(1.0, 0.0); g.len()];
        let qs: Vec<Complex64> = g.points().iter().map(|&x| q(x)).collect();
        let term = neumann_iterate(&ones, &qs, delta, &g, 0.0);
        // f₁(0) = δ ∫₀^X sin(δξ) q(ξ) e^{−iδξ} dξ by composite Gauss–Legendre at 10× resolution
        let rule = gauss_legendre::GaussLegendre::new(20.try_into().unwrap());
        let mut exact = Complex64::new(0.0, 0.0);
        for k in 0..400 {
            let (a, b) = (0.1 * k as f64, 0.1 * (k + 1) as f64);
            for (t, w) in rule.iter() {
                let xi = a + 0.5 * (b - a) * (t + 1.0);
                exact += 0.5
                    * (b - a)
                    * w
                    * delta
                    * (delta * xi).sin()
                    * q(xi)
                    * (-Complex64::i() * delta * xi).exp();
            }
        }
        assert!((term.value[0] - exact).norm() <= 1e-9 * exact.norm());
    }

    mod gauss_legendre {
        pub use gauss_quad::GaussLegendre;
    }

    #[test]
    fn terms_respect_the_weierstrass_majorant() {
        let delta = Complex64::new(2.0, -0.3);
        let q = |x: f64| Complex64::new(0.4, 0.1) * (-0.8 * x).exp();
        let g = grid(40.0, 48);
        let cert =
            certify_integrability(&q, 40.0, 1e-12, TailDecay::Exponential { rate: 0.8 }).unwrap();
        let sol = solve_jost(delta, &q, &cert, &g, &JostOptions::default()).unwrap();
        for (n, &norm) in sol.term_norms.iter().enumerate() {
            assert!(norm <= sol.weierstrass_bound(n) * (1.0 + 1e-12), "term {n}");
        }
        assert!(sol.tail_bound < 1e-10);
        assert!(sol.fixed_point_residual < 1e-9);
        assert!((sol.normalized.last().unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn stalls_are_reported() {
        let delta = Complex64::new(2.0, -0.3);
        let q = |x: f64| Complex64::new(3.0, 0.0) * (-0.5 * x).exp();
        let g = grid(60.0, 60);
        let cert =
            certify_integrability(&q, 60.0, 1e-12, TailDecay::Exponential { rate: 0.5 }).unwrap();
        let opts = JostOptions {
            tol: 1e-10,
            n_max: 5,
        };
        assert!(matches!(
            solve_jost(delta, &q, &cert, &g, &opts),
            Err(Error::NoConvergence(_))
        ));
        let growing = Complex64::new(1.0, 0.2);
        assert!(solve_jost(growing, &q, &cert, &g, &JostOptions::default()).is_err());
    }
}
