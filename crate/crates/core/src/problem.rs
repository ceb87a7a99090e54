//! End-to-end solve at one frequency.

use std::f64::consts::PI;

use crate::dispersion::{IntegrabilityCertificate, ScatteringContext, TubeSystem};
use crate::error::Result;
use crate::fields::{boundary_amplitude, build_f, reconstruct, BoundaryForcing, FieldSolution};
use crate::jost::{solve_jost, JostOptions, JostSolution};
use crate::profile::InhomogeneityProfile;
use crate::rheology::RheologySpectrum;
use crate::spectral::{Grid, GridSpec};

/// Discretization and tolerance settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub x_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Last-to-first panel width ratio before splitting.
    pub grading: f64,
    /// Panels are split so that `|δ|·width ≤ max_phase`.
    pub max_phase: f64,
    pub tol: f64,
    pub n_max: usize,
    pub residual_tol: f64,
    pub integrability_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            x_max: 40.0,
            panels: 32,
            nodes_per_panel: 16,
            grading: 4.0,
            max_phase: 2.0,
            tol: 1e-10,
            n_max: 50,
            residual_tol: 1e-6,
            integrability_tol: 1e-12,
        }
    }
}

impl Numerics {
    pub fn jost_options(&self) -> JostOptions {
        JostOptions {
            tol: self.tol,
            n_max: self.n_max,
        }
    }

    /// Graded panels, split to the phase limit, with breaks added at the
    /// profile's breakpoints.
    pub fn grid(&self, ctx: &ScatteringContext) -> Result<Grid> {
        Grid::new(&GridSpec {
            x_max: self.x_max,
            panels: self.panels,
            nodes_per_panel: self.nodes_per_panel,
            grading: self.grading,
            max_width: Some(self.max_phase / ctx.delta.norm()),
        })?
        .with_breaks_at(&ctx.profile().breakpoints())
    }
}

/// Tube, liquid, wall profiles and inlet forcing.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub tube: TubeSystem,
    pub spectrum: RheologySpectrum,
    pub profile: InhomogeneityProfile,
    pub forcing: BoundaryForcing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub context: ScatteringContext,
    pub certificate: IntegrabilityCertificate,
    pub jost: JostSolution,
    pub fields: FieldSolution,
}

impl Solution {
    /// Wave speed `ω / Re δ`.
    pub fn phase_speed(&self) -> f64 {
        self.context.omega / self.context.delta.re
    }

    /// Spatial attenuation rate `−Im δ`.
    pub fn attenuation(&self) -> f64 {
        -self.context.delta.im
    }

    /// `|p₁(0) − p₀| / |p₀|`.
    pub fn inlet_error(&self, p0: f64) -> f64 {
        (self.fields.p1[0] - p0).norm() / p0.abs()
    }

    /// Wavelength `2π / Re δ`.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.context.delta.re
    }
}

impl Problem {
    pub fn context(&self) -> Result<ScatteringContext> {
        ScatteringContext::new(
            &self.tube,
            &self.spectrum,
            &self.profile,
            self.forcing.omega(),
        )
    }

    /// Runs the whole chain: wavenumber, integrability, Neumann series,
    /// inlet matching and field reconstruction with the residual gate.
    pub fn solve(&self, numerics: &Numerics) -> Result<Solution> {
        let context = self.context()?;
        let grid = numerics.grid(&context)?;
        context.coefficient.check_nonvanishing(grid.points())?;
        let certificate = context.certify(numerics.x_max, numerics.integrability_tol)?;
        let jost = solve_jost(
            context.delta,
            &context,
            &certificate,
            &grid,
            &numerics.jost_options(),
        )?;
        let reduced = build_f(&jost, &context.coefficient)?;
        let y0 = boundary_amplitude(
            &self.forcing,
            &self.tube,
            &self.profile,
            reduced.slopes[0],
            reduced.values[0],
            context.delta,
        )?;
        let fields = reconstruct(
            &jost,
            &context,
            &self.tube,
            &self.spectrum,
            y0,
            numerics.residual_tol,
        )?;
        Ok(Solution {
            context,
            certificate,
            jost,
            fields,
        })
    }
}
