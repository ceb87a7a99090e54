//! Composite panel grids on `[0, x_max]`.
//!
//! Every panel carries the same `p` Chebyshev–Lobatto nodes, so neighbouring
//! panels share their endpoints and the grid contains both `0` and `x_max`.
//! On a panel, samples are identified with their interpolating polynomial;
//! integrals of that polynomial over `[x_j, b]` are precomputed once on the
//! reference interval with Gauss–Legendre quadrature, and derivatives use
//! the barycentric differentiation matrix.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let pn = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * pn - p0) / (x * x - 1.0);
    (pn, dp)
}

/// Reference Chebyshev–Lobatto panel on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRule {
    nodes: Vec<f64>,
    bary: Vec<f64>,
    /// `diff[j][k] = ℓ_k′(t_j)`
    diff: Vec<Vec<f64>>,
    /// `integ[j][k] = ∫_{t_j}^{1} ℓ_k(t) dt`
    integ: Vec<Vec<f64>>,
}

impl PanelRule {
    pub fn new(p: usize) -> Self {
        assert!(p >= 3, "a panel needs at least three nodes");
        let nodes: Vec<f64> = (0..p)
            .map(|k| -(PI * k as f64 / (p - 1) as f64).cos())
            .collect();
        let bary: Vec<f64> = (0..p)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                if k == 0 || k == p - 1 {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        let mut diff = vec![vec![0.0; p]; p];
        for j in 0..p {
            let mut row_sum = 0.0;
            for k in 0..p {
                if j != k {
                    let d = bary[k] / bary[j] / (nodes[j] - nodes[k]);
                    diff[j][k] = d;
                    row_sum += d;
                }
            }
            diff[j][j] = -row_sum;
        }
        let (gx, gw) = gauss_legendre(p);
        let mut integ = vec![vec![0.0; p]; p];
        let mut basis = vec![0.0; p];
        for (j, row) in integ.iter_mut().enumerate() {
            let (lo, hi) = (nodes[j], 1.0);
            let half = 0.5 * (hi - lo);
            if half == 0.0 {
                continue;
            }
            for (&t, &w) in gx.iter().zip(&gw) {
                let tau = lo + half * (t + 1.0);
                lagrange_basis(&nodes, &bary, tau, &mut basis);
                for k in 0..p {
                    row[k] += half * w * basis[k];
                }
            }
        }
        PanelRule {
            nodes,
            bary,
            diff,
            integ,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub(crate) fn diff(&self) -> &[Vec<f64>] {
        &self.diff
    }

    pub(crate) fn integ(&self) -> &[Vec<f64>] {
        &self.integ
    }
}

/// Values of all Lagrange basis polynomials at `t` (barycentric form).
fn lagrange_basis(nodes: &[f64], bary: &[f64], t: f64, out: &mut [f64]) {
    if let Some(k) = nodes.iter().position(|&x| x == t) {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[k] = 1.0;
        return;
    }
    let mut denom = 0.0;
    for k in 0..nodes.len() {
        let c = bary[k] / (t - nodes[k]);
        out[k] = c;
        denom += c;
    }
    out.iter_mut().for_each(|v| *v /= denom);
}

/// How to lay out panels on `[0, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Ratio of the last to the first panel width (1 = uniform).
    pub grading: f64,
    /// Panels wider than this are split evenly.
    pub max_width: Option<f64>,
}

impl GridSpec {
    pub fn uniform(x_max: f64, panels: usize, nodes_per_panel: usize) -> Self {
        GridSpec {
            x_max,
            panels,
            nodes_per_panel,
            grading: 1.0,
            max_width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    breaks: Vec<f64>,
    rule: Arc<PanelRule>,
    points: Vec<f64>,
}

impl Grid {
    /// A grid from explicit, strictly increasing panel breakpoints.
    pub fn from_breaks(breaks: Vec<f64>, nodes_per_panel: usize) -> Result<Self> {
        if breaks.len() < 2
            || breaks.windows(2).any(|w| !(w[1] > w[0]))
            || !breaks.iter().all(|b| b.is_finite())
        {
            return Err(Error::bad_parameter(
                "grid",
                "breakpoints must be finite and strictly increasing",
            ));
        }
        if nodes_per_panel < 3 {
            return Err(Error::bad_parameter("nodes_per_panel", "need at least 3"));
        }
        let rule = Arc::new(PanelRule::new(nodes_per_panel));
        let p = nodes_per_panel;
        let mut points = Vec::with_capacity((breaks.len() - 1) * (p - 1) + 1);
        for (i, w) in breaks.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let skip = usize::from(i > 0);
            for &t in &rule.nodes[skip..] {
                points.push(panel_point(a, b, t));
            }
        }
        Ok(Grid {
            breaks,
            rule,
            points,
        })
    }

    pub fn new(spec: &GridSpec) -> Result<Self> {
        if !(spec.x_max > 0.0 && spec.x_max.is_finite()) {
            return Err(Error::bad_parameter(
                "x_max",
                format!("must be positive, got {}", spec.x_max),
            ));
        }
        if spec.panels == 0 {
            return Err(Error::bad_parameter("panels", "need at least one panel"));
        }
        if !(spec.grading >= 1.0 && spec.grading.is_finite()) {
            return Err(Error::bad_parameter("grading", "must be at least 1"));
        }
        let n = spec.panels;
        let ratio = if n > 1 {
            spec.grading.powf(1.0 / (n - 1) as f64)
        } else {
            1.0
        };
        let widths: Vec<f64> = (0..n).map(|k| ratio.powi(k as i32)).collect();
        let total: f64 = widths.iter().sum();
        let mut breaks = vec![0.0];
        let mut acc = 0.0;
        for w in &widths {
            acc += w;
            breaks.push(spec.x_max * acc / total);
        }
        *breaks.last_mut().unwrap() = spec.x_max;
        if let Some(max_w) = spec.max_width {
            if !(max_w > 0.0) {
                return Err(Error::bad_parameter("max_width", "must be positive"));
            }
            let mut split = vec![0.0];
            for w in breaks.windows(2) {
                let pieces = ((w[1] - w[0]) / max_w).ceil().max(1.0) as usize;
                for k in 1..=pieces {
                    split.push(if k == pieces {
                        w[1]
                    } else {
                        w[0] + (w[1] - w[0]) * k as f64 / pieces as f64
                    });
                }
            }
            breaks = split;
        }
        Self::from_breaks(breaks, spec.nodes_per_panel)
    }

    /// Splits panels so that each of `xs` inside `(0, x_max)` becomes a
    /// breakpoint. Points already within `1e−6` of a panel width from an
    /// existing break are skipped.
    pub fn with_breaks_at(&self, xs: &[f64]) -> Result<Grid> {
        let mut breaks = self.breaks.clone();
        for &x in xs {
            if !(x > 0.0 && x < self.x_max()) {
                continue;
            }
            let i = breaks.partition_point(|&b| b <= x);
            let (a, b) = (breaks[i - 1], breaks[i]);
            let eps = 1e-6 * (b - a);
            if x - a > eps && b - x > eps {
                breaks.insert(i, x);
            }
        }
        Self::from_breaks(breaks, self.nodes_per_panel())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn n_panels(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.rule.len()
    }

    pub fn rule(&self) -> &PanelRule {
        &self.rule
    }

    /// `(a, b)` of panel `i`.
    pub fn panel(&self, i: usize) -> (f64, f64) {
        (self.breaks[i], self.breaks[i + 1])
    }

    /// Index of the first node of panel `i` in [`Grid::points`].
    pub fn panel_offset(&self, i: usize) -> usize {
        i * (self.rule.len() - 1)
    }

    /// Largest panel width.
    pub fn max_width(&self) -> f64 {
        self.breaks
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Spectral derivative of the samples on panel `i`.
    pub fn differentiate_panel(&self, i: usize, values: &[Complex64]) -> Vec<Complex64> {
        let (a, b) = self.panel(i);
        let scale = 2.0 / (b - a);
        let off = self.panel_offset(i);
        let p = self.rule.len();
        (0..p)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..p {
                    acc += values[off + k] * self.rule.diff[j][k];
                }
                acc * scale
            })
            .collect()
    }

    /// Derivative on the whole grid; shared panel endpoints take the mean of
    /// the two one-sided panel values.
    pub fn differentiate(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        let p = self.rule.len();
        for i in 0..self.n_panels() {
            let d = self.differentiate_panel(i, values);
            let off = self.panel_offset(i);
            for (k, v) in d.into_iter().enumerate() {
                if k == 0 && i > 0 {
                    out[off] = 0.5 * (out[off] + v);
                } else {
                    out[off + k] = v;
                }
            }
            debug_assert!(off + p <= self.len());
        }
        out
    }

    /// Evaluates the piecewise interpolant of `values` at `x ∈ [0, x_max]`.
    pub fn interpolate(&self, values: &[Complex64], x: f64) -> Complex64 {
        assert_eq!(values.len(), self.len());
        let i = self
            .breaks
            .partition_point(|&b| b <= x)
            .saturating_sub(1)
            .min(self.n_panels() - 1);
        let (a, b) = self.panel(i);
        let t = 2.0 * (x - a) / (b - a) - 1.0;
        let p = self.rule.len();
        let mut basis = vec![0.0; p];
        lagrange_basis(&self.rule.nodes, &self.rule.bary, t, &mut basis);
        let off = self.panel_offset(i);
        basis
            .iter()
            .enumerate()
            .map(|(k, w)| values[off + k] * *w)
            .sum()
    }
}

fn panel_point(a: f64, b: f64, t: f64) -> f64 {
    if t == -1.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a + 0.5 * (b - a) * (t + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // ∫ t^12 over [-1, 1] = 2/13, degree 12 ≤ 2·7 − 1
        let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-15);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn integration_matrix_is_exact_for_the_interpolant() {
        let rule = PanelRule::new(9);
        // ∫_{t}^{1} s^5 ds = (1 − t^6)/6
        for (j, &t) in rule.nodes().iter().enumerate() {
            let s: f64 = rule
                .nodes()
                .iter()
                .enumerate()
                .map(|(k, &tk)| rule.integ()[j][k] * tk.powi(5))
                .sum();
            assert!((s - (1.0 - t.powi(6)) / 6.0).abs() < 1e-14);
        }
    }

    #[test]
    fn extra_breaks_are_inserted_once() {
        let g = Grid::new(&GridSpec::uniform(4.0, 2, 5)).unwrap();
        let h = g
            .with_breaks_at(&[-1.0, 0.0, 1.0, 2.0, 2.0 + 1e-9, 3.5, 4.0, 9.0])
            .unwrap();
        assert_eq!(h.breaks(), &[0.0, 1.0, 2.0, 3.5, 4.0]);
        assert_eq!(h.len(), 4 * 4 + 1);
    }

    #[test]
    fn grid_layout() {
        let g = Grid::new(&GridSpec::uniform(10.0, 4, 6)).unwrap();
        assert_eq!(g.len(), 4 * 5 + 1);
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(*g.points().last().unwrap(), 10.0);
        assert!(g.points().windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g.points()[g.panel_offset(2)], 5.0);

        let graded = Grid::new(&GridSpec {
            grading: 8.0,
            max_width: Some(2.0),
            ..GridSpec::uniform(30.0, 6, 8)
        })
        .unwrap();
        assert!(graded.max_width() <= 2.0 + 1e-12);
        let (a, b) = graded.panel(0);
        assert!(b - a < 2.0 && a == 0.0);
    }

    #[test]
    fn differentiation_and_interpolation_are_spectral() {
        let g = Grid::new(&GridSpec::uniform(6.0, 6, 14)).unwrap();
        let k = Complex64::new(1.3, -0.2);
        let f: Vec<Complex64> = g
            .points()
            .iter()
            .map(|&x| (Complex64::i() * k * x).exp())
            .collect();
        let d = g.differentiate(&f);
        for (i, &x) in g.points().iter().enumerate() {
            let exact = Complex64::i() * k * (Complex64::i() * k * x).exp();
            assert!((d[i] - exact).norm() < 1e-9, "x = {x}");
        }
        for x in [0.0, 0.37, 2.5, 5.999, 6.0] {
            let exact = (Complex64::i() * k * x).exp();
            assert!((g.interpolate(&f, x) - exact).norm() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(&GridSpec::uniform(0.0, 4, 6)).is_err());
        assert!(Grid::new(&GridSpec::uniform(1.0, 0, 6)).is_err());
        assert!(Grid::new(&GridSpec::uniform(1.0, 3, 2)).is_err());
        assert!(Grid::from_breaks(vec![0.0, 1.0, 1.0], 5).is_err());
    }
}
