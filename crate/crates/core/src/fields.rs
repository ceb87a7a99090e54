//! Physical amplitudes from the Jost solution.
//!
//! With `y = y₀ f(x)/f(0)` and the Liouville factor `φ(x) = √G(x)`:
//!
//! ```text
//! F  = f / (φ f(0))
//! Q₁ = πR² y₀ F
//! w₁ = −R y₀ F′ / (2iω)
//! σ₁ = 2η y₀ (b/a) F′
//! p₁ = y₀ [ (i h E_∞ / (2Rω)) g₁ − (i R h ρ_m∞ ω / 2) g₂ ] F′
//! ```
//!
//! `φ` is the branch of `√G` that is continuous in `x` and equals the
//! positive real `√|G_∞|` at infinity; when `G` has constant phase it
//! reduces to `√|G|`. The inlet condition `p₁(0) = p₀` fixes `y₀`.
//!
//! [`residual_report`] substitutes the amplitudes back into the harmonic
//! system (continuity, momentum, wall law, constitutive law) using
//! spectral differentiation on the solver grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::{CoefficientG, ScatteringContext, TubeSystem};
use crate::error::{Error, Result};
use crate::jost::JostSolution;
use crate::profile::InhomogeneityProfile;
use crate::rheology::RheologySpectrum;
use crate::spectral::Grid;

/// Harmonic inlet pressure `p(0, t) = p₀ e^{iωt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryForcing {
    p0: f64,
    omega: f64,
}

impl BoundaryForcing {
    pub fn new(p0: f64, omega: f64) -> Result<Self> {
        if !p0.is_finite() {
            return Err(Error::bad_parameter("p0", "must be finite"));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidFrequency(omega));
        }
        Ok(BoundaryForcing { p0, omega })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// `F(x)` and `F′(x)` on the solver grid, with the Liouville factor used.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFlow {
    pub values: Vec<Complex64>,
    pub slopes: Vec<Complex64>,
    pub liouville: Vec<Complex64>,
}

pub fn build_f(jost: &JostSolution, coefficient: &CoefficientG) -> Result<ReducedFlow> {
    let f0 = jost.f_at_origin();
    if !(f0.norm() > 1e-12) {
        return Err(Error::JostZeroAtOrigin(f0.norm()));
    }
    let xs = jost.grid.points();
    let g_inf = coefficient.limit();
    let jets: Vec<_> = xs.iter().map(|&x| coefficient.eval(x)).collect();
    let mut liouville = vec![Complex64::new(0.0, 0.0); xs.len()];
    let scale = g_inf.norm().sqrt();
    for k in (0..xs.len()).rev() {
        let mut s = (jets[k].value / g_inf).sqrt() * scale;
        if let Some(next) = liouville.get(k + 1) {
            if (s - next).norm() > (s + next).norm() {
                s = -s;
            }
        }
        liouville[k] = s;
    }
    let mut values = Vec::with_capacity(xs.len());
    let mut slopes = Vec::with_capacity(xs.len());
    for k in 0..xs.len() {
        let denom = liouville[k] * f0;
        let log_slope = 0.5 * jets[k].d1 / jets[k].value;
        values.push(jost.f[k] / denom);
        slopes.push((jost.f_prime[k] - jost.f[k] * log_slope) / denom);
    }
    Ok(ReducedFlow {
        values,
        slopes,
        liouville,
    })
}

/// `(i h E_∞/(2Rω)) g₁(x) − (i R h ρ_m∞ ω/2) g₂(x)`, so that `p₁ = y₀·bracket·F′`.
pub fn pressure_bracket(
    tube: &TubeSystem,
    profile: &InhomogeneityProfile,
    omega: f64,
    x: f64,
) -> Complex64 {
    let (e, mass) = bracket_parts(tube, omega);
    Complex64::new(0.0, e * profile.g1.value(x) - mass * profile.g2.value(x))
}

fn bracket_parts(tube: &TubeSystem, omega: f64) -> (f64, f64) {
    (
        tube.thickness() * tube.young_modulus() / (2.0 * tube.radius() * omega),
        tube.radius() * tube.thickness() * tube.wall_density() * omega / 2.0,
    )
}

/// `y₀ = p₀ / (bracket(0)·F′(0))`.
pub fn boundary_amplitude(
    forcing: &BoundaryForcing,
    tube: &TubeSystem,
    profile: &InhomogeneityProfile,
    f_prime_at_0: Complex64,
    f_at_0: Complex64,
    delta: Complex64,
) -> Result<Complex64> {
    let bracket = pressure_bracket(tube, profile, forcing.omega(), 0.0);
    let (e, mass) = bracket_parts(tube, forcing.omega());
    if !(bracket.norm() > 1e-14 * (e + mass)) {
        return Err(Error::DegenerateBracket);
    }
    if !(f_prime_at_0.norm() > 1e-12 * delta.norm() * f_at_0.norm()) {
        return Err(Error::DegenerateSlope);
    }
    Ok(forcing.p0() / (bracket * f_prime_at_0))
}

/// Per-equation maximum normalized residual of the harmonic system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    /// `Q₁′ + 2πR iω w₁ = 0`
    pub continuity: f64,
    /// `ρ_f iω Q₁ = πR² (σ₁′ − p₁′)`
    pub momentum: f64,
    /// `p₁ = (hE_∞/R² g₁ − hω²ρ_m∞ g₂) w₁`
    pub wall: f64,
    /// `σ₁ = (2η/(πR²)) (b/a) Q₁′`
    pub constitutive: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.continuity
            .max(self.momentum)
            .max(self.wall)
            .max(self.constitutive)
    }

    /// Named entries, in equation order.
    pub fn entries(&self) -> [(&'static str, f64); 4] {
        [
            ("continuity", self.continuity),
            ("momentum", self.momentum),
            ("wall", self.wall),
            ("constitutive", self.constitutive),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSolution {
    pub grid: Grid,
    pub omega: f64,
    /// Volumetric flow amplitude `Q₁` [m³/s].
    pub q1: Vec<Complex64>,
    /// Radial wall displacement amplitude `w₁` [m].
    pub w1: Vec<Complex64>,
    /// Viscoelastic stress amplitude `σ₁` [Pa].
    pub sigma1: Vec<Complex64>,
    /// Pressure amplitude `p₁` [Pa].
    pub p1: Vec<Complex64>,
    pub y0: Complex64,
    pub reduced: ReducedFlow,
    pub residuals: ResidualReport,
}

/// Builds all amplitudes and rejects them if any governing-equation
/// residual exceeds `residual_tol`.
pub fn reconstruct(
    jost: &JostSolution,
    ctx: &ScatteringContext,
    tube: &TubeSystem,
    spec: &RheologySpectrum,
    y0: Complex64,
    residual_tol: f64,
) -> Result<FieldSolution> {
    let reduced = build_f(jost, &ctx.coefficient)?;
    let fields = assemble(jost.grid.clone(), reduced, ctx, tube, spec, y0);
    for (equation, residual) in fields.residuals.entries() {
        if !(residual <= residual_tol) {
            return Err(Error::ResidualTooLarge {
                equation,
                residual,
                tol: residual_tol,
            });
        }
    }
    Ok(fields)
}

fn assemble(
    grid: Grid,
    reduced: ReducedFlow,
    ctx: &ScatteringContext,
    tube: &TubeSystem,
    spec: &RheologySpectrum,
    y0: Complex64,
) -> FieldSolution {
    let omega = ctx.omega;
    let i = Complex64::i();
    let r = tube.radius();
    let area = PI * r * r;
    let ratio = ctx.moduli.b / ctx.moduli.a;
    let profile = ctx.profile();
    let xs = grid.points();
    let q1 = reduced.values.iter().map(|v| area * y0 * v).collect();
    let w1 = reduced
        .slopes
        .iter()
        .map(|s| -r * y0 * s / (2.0 * i * omega))
        .collect();
    let sigma1 = reduced
        .slopes
        .iter()
        .map(|s| 2.0 * spec.viscosity() * y0 * ratio * s)
        .collect();
    let p1 = reduced
        .slopes
        .iter()
        .zip(xs)
        .map(|(s, &x)| y0 * pressure_bracket(tube, profile, omega, x) * s)
        .collect();
    let mut fields = FieldSolution {
        grid,
        omega,
        q1,
        w1,
        sigma1,
        p1,
        y0,
        reduced,
        residuals: ResidualReport::default(),
    };
    fields.residuals = residual_report(&fields, ctx, tube, spec);
    fields
}

/// Largest normalized residual of each governing equation.
///
/// On every panel the residual is divided by the largest magnitude any of
/// the equation's terms attains on that panel.
pub fn residual_report(
    fields: &FieldSolution,
    ctx: &ScatteringContext,
    tube: &TubeSystem,
    spec: &RheologySpectrum,
) -> ResidualReport {
    let grid = &fields.grid;
    let omega = ctx.omega;
    let i = Complex64::i();
    let r = tube.radius();
    let area = PI * r * r;
    let stiff = tube.thickness() * tube.young_modulus() / (r * r);
    let mass = tube.thickness() * omega * omega * tube.wall_density();
    let visc = 2.0 * spec.viscosity() / area * ctx.moduli.b / ctx.moduli.a;
    let profile = ctx.profile();
    let xs = grid.points();
    let p = grid.nodes_per_panel();

    let mut report = ResidualReport::default();
    for panel in 0..grid.n_panels() {
        let off = grid.panel_offset(panel);
        let dq = grid.differentiate_panel(panel, &fields.q1);
        let dsigma = grid.differentiate_panel(panel, &fields.sigma1);
        let dp = grid.differentiate_panel(panel, &fields.p1);
        let mut res = [0.0f64; 4];
        let mut scale = [0.0f64; 4];
        for j in 0..p {
            let k = off + j;
            let x = xs[k];
            let wall_coef = stiff * profile.g1.value(x) - mass * profile.g2.value(x);
            let terms: [[Complex64; 3]; 4] = [
                [
                    dq[j],
                    2.0 * PI * r * i * omega * fields.w1[k],
                    Complex64::new(0.0, 0.0),
                ],
                [
                    tube.fluid_density() * i * omega * fields.q1[k],
                    -area * dsigma[j],
                    area * dp[j],
                ],
                [
                    fields.p1[k],
                    -wall_coef * fields.w1[k],
                    Complex64::new(0.0, 0.0),
                ],
                [fields.sigma1[k], -visc * dq[j], Complex64::new(0.0, 0.0)],
            ];
            for (e, t) in terms.iter().enumerate() {
                res[e] = res[e].max((t[0] + t[1] + t[2]).norm());
                scale[e] = scale[e].max(t.iter().map(|v| v.norm()).fold(0.0, f64::max));
            }
        }
        let rel = |e: usize| {
            if scale[e] > 0.0 {
                res[e] / scale[e]
            } else {
                0.0
            }
        };
        report.continuity = report.continuity.max(rel(0));
        report.momentum = report.momentum.max(rel(1));
        report.wall = report.wall.max(rel(2));
        report.constitutive = report.constitutive.max(rel(3));
    }
    report
}

/// Real fields `Re{amplitude · e^{iωt}}` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub flow: Vec<f64>,
    pub displacement: Vec<f64>,
    pub stress: Vec<f64>,
    pub pressure: Vec<f64>,
}

pub fn time_snapshot(fields: &FieldSolution, t: f64) -> Snapshot {
    let phase = Complex64::from_polar(1.0, fields.omega * t);
    let real = |v: &[Complex64]| v.iter().map(|a| (a * phase).re).collect();
    Snapshot {
        t,
        x: fields.grid.points().to_vec(),
        flow: real(&fields.q1),
        displacement: real(&fields.w1),
        stress: real(&fields.sigma1),
        pressure: real(&fields.p1),
    }
}

/// Closed-form amplitudes of the homogeneous tube at `x`.
pub fn homogeneous_amplitudes(
    ctx: &ScatteringContext,
    tube: &TubeSystem,
    spec: &RheologySpectrum,
    forcing: &BoundaryForcing,
    x: f64,
) -> [Complex64; 4] {
    let i = Complex64::i();
    let omega = ctx.omega;
    let delta = ctx.delta;
    let root = ctx.coefficient.limit().norm().sqrt();
    let bracket = pressure_bracket(tube, &InhomogeneityProfile::homogeneous(), omega, 0.0);
    let slope0 = -i * delta / root;
    let y0 = forcing.p0() / (bracket * slope0);
    let wave = (-i * delta * x).exp() / root;
    let slope = -i * delta * wave;
    let r = tube.radius();
    [
        PI * r * r * y0 * wave,
        -r * y0 * slope / (2.0 * i * omega),
        2.0 * spec.viscosity() * y0 * ctx.moduli.b / ctx.moduli.a * slope,
        y0 * bracket * slope,
    ]
}
