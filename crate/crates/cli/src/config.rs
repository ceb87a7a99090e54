//! TOML run configuration. All quantities are SI.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use tubewave::prelude::*;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub tube: TubeConfig,
    pub rheology: RheologyConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    pub forcing: ForcingConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory of the config file; table paths are relative to it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeConfig {
    pub radius: f64,
    pub thickness: f64,
    pub fluid_density: f64,
    pub wall_density: f64,
    pub young_modulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    InstantaneousElastic,
    ViscousAtLoading,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RheologyConfig {
    pub viscosity: f64,
    #[serde(default)]
    pub relaxation_times: Vec<f64>,
    #[serde(default)]
    pub retardation_times: Vec<f64>,
    /// Inferred from the list lengths when absent.
    pub class: Option<ClassName>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(default)]
    pub g1: ChannelConfig,
    #[serde(default)]
    pub g2: ChannelConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelConfig {
    #[default]
    Homogeneous,
    ExponentialBump {
        amplitude: f64,
        rate: f64,
    },
    RationalDecay {
        amplitude: f64,
        rate: f64,
    },
    Tabulated {
        table: PathBuf,
        blend_window: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    pub p0: f64,
    pub omega: Option<f64>,
    /// Explicit sweep frequencies.
    #[serde(default)]
    pub omegas: Vec<f64>,
    /// `[start, stop, count]`, evenly spaced and inclusive.
    pub omega_range: Option<(f64, f64, usize)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    pub x_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub grading: f64,
    pub max_phase: f64,
    pub tol: f64,
    pub n_max: usize,
    pub residual_tol: f64,
    pub integrability_tol: f64,
    /// Tolerance handed to the ODE oracle in `verify`.
    pub oracle_tol: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = Numerics::default();
        NumericsConfig {
            x_max: n.x_max,
            panels: n.panels,
            nodes_per_panel: n.nodes_per_panel,
            grading: n.grading,
            max_phase: n.max_phase,
            tol: n.tol,
            n_max: n.n_max,
            residual_tol: n.residual_tol,
            integrability_tol: n.integrability_tol,
            oracle_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub plots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            plots: false,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub omega_range: Option<(f64, f64, usize)>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub x_max: Option<f64>,
    pub panels: Option<usize>,
    pub plots: Option<bool>,
}

/// Parses `START:STOP:N`.
pub fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected START:STOP:N, got `{s}`"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let n = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("`{}`: {e}", parts[2]))?;
    Ok((num(parts[0])?, num(parts[1])?, n))
}

fn range_points((start, stop, n): (f64, f64, usize)) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(w) = o.omega {
            self.forcing.omega = Some(w);
        }
        if let Some(r) = o.omega_range {
            self.forcing.omega_range = Some(r);
            self.forcing.omegas.clear();
        }
        if let Some(d) = &o.out {
            self.output.dir = d.clone();
        }
        if let Some(t) = o.tol {
            self.numerics.tol = t;
        }
        if let Some(x) = o.x_max {
            self.numerics.x_max = x;
        }
        if let Some(n) = o.panels {
            self.numerics.panels = n;
        }
        if let Some(p) = o.plots {
            self.output.plots = p;
        }
    }

    pub fn tube(&self) -> Result<TubeSystem, CliError> {
        let t = &self.tube;
        Ok(TubeSystem::new(
            t.radius,
            t.thickness,
            t.fluid_density,
            t.wall_density,
            t.young_modulus,
        )?)
    }

    pub fn spectrum(&self) -> Result<RheologySpectrum, CliError> {
        let r = &self.rheology;
        let (nl, nt) = (r.relaxation_times.len(), r.retardation_times.len());
        let class = match r.class {
            Some(ClassName::InstantaneousElastic) => ModelClass::InstantaneousElastic,
            Some(ClassName::ViscousAtLoading) => ModelClass::ViscousAtLoading,
            None if nl == nt + 1 => ModelClass::InstantaneousElastic,
            None => ModelClass::ViscousAtLoading,
        };
        Ok(RheologySpectrum::new(
            r.relaxation_times.clone(),
            r.retardation_times.clone(),
            r.viscosity,
            class,
        )?)
    }

    fn channel(&self, c: &ChannelConfig) -> Result<Profile, CliError> {
        Ok(match c {
            ChannelConfig::Homogeneous => Profile::homogeneous(),
            ChannelConfig::ExponentialBump { amplitude, rate } => {
                Profile::exponential_bump(*amplitude, *rate)?
            }
            ChannelConfig::RationalDecay { amplitude, rate } => {
                Profile::rational_decay(*amplitude, *rate)?
            }
            ChannelConfig::Tabulated {
                table,
                blend_window,
            } => {
                let path = self.base_dir.join(table);
                let text = fs::read_to_string(&path).map_err(|e| {
                    CliError::Config(format!("cannot read table {}: {e}", path.display()))
                })?;
                Profile::from_table(&text, *blend_window)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
        })
    }

    pub fn profile(&self) -> Result<InhomogeneityProfile, CliError> {
        Ok(InhomogeneityProfile::new(
            self.channel(&self.profile.g1)?,
            self.channel(&self.profile.g2)?,
        ))
    }

    pub fn numerics(&self) -> Result<Numerics, CliError> {
        let n = &self.numerics;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && !v.is_nan() {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "numerics.{name} must be positive, got {v}"
                )))
            }
        };
        positive("x_max", n.x_max)?;
        positive("tol", n.tol)?;
        positive("residual_tol", n.residual_tol)?;
        positive("integrability_tol", n.integrability_tol)?;
        positive("oracle_tol", n.oracle_tol)?;
        positive("max_phase", n.max_phase)?;
        Ok(Numerics {
            x_max: n.x_max,
            panels: n.panels,
            nodes_per_panel: n.nodes_per_panel,
            grading: n.grading,
            max_phase: n.max_phase,
            tol: n.tol,
            n_max: n.n_max,
            residual_tol: n.residual_tol,
            integrability_tol: n.integrability_tol,
        })
    }

    /// The single solve frequency.
    pub fn omega(&self) -> Result<f64, CliError> {
        self.forcing
            .omega
            .ok_or_else(|| CliError::Config("forcing.omega is required".into()))
    }

    /// Sweep frequencies: the explicit list, then the range.
    pub fn omegas(&self) -> Vec<f64> {
        let mut out = self.forcing.omegas.clone();
        if let Some(r) = self.forcing.omega_range {
            out.extend(range_points(r));
        }
        out
    }

    pub fn problem(&self, omega: f64) -> Result<Problem, CliError> {
        Ok(Problem {
            tube: self.tube()?,
            spectrum: self.spectrum()?,
            profile: self.profile()?,
            forcing: BoundaryForcing::new(self.forcing.p0, omega)?,
        })
    }
}
