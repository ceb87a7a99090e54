//! The `solve`, `sweep` and `verify` subcommands.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use tubewave::oracle::{compare, solve_ode, AGREEMENT};
use tubewave::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{self, write_atomic, SweepRow};
use crate::plot::write_pressure_plots;

/// Inlet pressure must be reproduced to this relative accuracy.
pub const INLET_TOL: f64 = 1e-10;

/// Solves once and writes `fields.csv`, `summary.csv` and, if enabled, the plots.
pub fn cmd_solve(cfg: &RunConfig) -> Result<Solution, CliError> {
    let problem = cfg.problem(cfg.omega()?)?;
    let sol = problem.solve(&cfg.numerics()?)?;
    let dir = &cfg.output.dir;
    write_atomic(&dir.join("fields.csv"), &output::fields_csv(&sol))?;
    write_atomic(
        &dir.join("summary.csv"),
        &output::summary_csv(&sol, cfg.forcing.p0),
    )?;
    if cfg.output.plots {
        write_pressure_plots(&sol, dir)?;
    }
    Ok(sol)
}

/// Worker count from `TUBEWAVE_THREADS`, if set.
pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("TUBEWAVE_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "TUBEWAVE_THREADS must be a positive integer, got `{s}`"
            ))),
        },
    }
}

/// Variant name of the error, safe to put in a CSV cell.
fn status_label(e: &CliError) -> String {
    match e {
        CliError::Solver(inner) => format!("{inner:?}")
            .chars()
            .take_while(|c| c.is_alphanumeric())
            .collect(),
        CliError::Config(_) => "ConfigError".into(),
        CliError::Io(_) => "IoError".into(),
    }
}

pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Worst exit code among the frequencies; 0 when all succeeded.
    pub exit_code: i32,
}

fn sweep_one(cfg: &RunConfig, numerics: &Numerics, omega: f64) -> (SweepRow, i32) {
    let mut row = SweepRow {
        omega,
        delta: None,
        solution: None,
        status: "ok".into(),
    };
    let result = cfg.problem(omega).and_then(|problem| {
        row.delta = problem.context().ok().map(|c| c.delta);
        problem.solve(numerics).map_err(CliError::from)
    });
    match result {
        Ok(sol) => {
            row.solution = Some(sol);
            (row, 0)
        }
        Err(e) => {
            row.status = status_label(&e);
            (row, e.exit_code())
        }
    }
}

/// Solves every frequency concurrently and writes `dispersion.csv` and
/// `sweep_summary.csv`. Failed frequencies keep their row, flagged in the
/// `status` column.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepReport, CliError> {
    let omegas = cfg.omegas();
    if omegas.is_empty() {
        return Err(CliError::Config(
            "sweep needs at least one frequency".into(),
        ));
    }
    let numerics = cfg.numerics()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(SweepRow, i32)> = pool.install(|| {
        omegas
            .par_iter()
            .map(|&w| sweep_one(cfg, &numerics, w))
            .collect()
    });
    let exit_code = results.iter().map(|r| r.1).max().unwrap_or(0);
    let rows: Vec<SweepRow> = results.into_iter().map(|r| r.0).collect();
    let dir = &cfg.output.dir;
    write_atomic(&dir.join("dispersion.csv"), &output::dispersion_csv(&rows))?;
    write_atomic(
        &dir.join("sweep_summary.csv"),
        &output::sweep_summary_csv(&rows, cfg.forcing.p0),
    )?;
    Ok(SweepReport { rows, exit_code })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Gate {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict}  {:<28} {:>12.3e}  (limit {:.1e})",
            self.name, self.value, self.limit
        )
    }
}

pub struct VerifyReport {
    pub solution: Solution,
    pub gates: Vec<Gate>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }
}

/// Largest ratio `‖m_n‖ / bound_n` over the computed terms `n ≥ 1`.
pub fn weierstrass_ratio(jost: &JostSolution) -> f64 {
    jost.term_norms
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &t)| {
            let b = jost.weierstrass_bound(n);
            if b > 0.0 {
                t / b
            } else if t == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

/// Solves and checks every gate: governing-system residuals, inlet
/// pressure, fixed-point residual, the Weierstrass majorant, agreement
/// with both ODE oracles and, with `golden`, byte equality of the CSVs.
pub fn cmd_verify(cfg: &RunConfig, golden: Option<&Path>) -> Result<VerifyReport, CliError> {
    let problem = cfg.problem(cfg.omega()?)?;
    let numerics = cfg.numerics()?;
    let sol = problem.solve(&numerics)?;
    let mut gates: Vec<Gate> = sol
        .fields
        .residuals
        .entries()
        .iter()
        .map(|(name, r)| Gate::at_most(format!("residual {name}"), *r, numerics.residual_tol))
        .collect();
    gates.push(Gate::at_most(
        "inlet pressure",
        sol.inlet_error(cfg.forcing.p0),
        INLET_TOL,
    ));
    gates.push(Gate::at_most(
        "fixed-point residual",
        sol.jost.fixed_point_residual,
        10.0 * numerics.tol,
    ));
    gates.push(Gate::at_most(
        "weierstrass ratio",
        weierstrass_ratio(&sol.jost),
        1.0,
    ));
    for method in [OracleMethod::BackwardMarch, OracleMethod::Collocation] {
        let ode = solve_ode(
            sol.context.delta,
            &sol.context,
            &sol.jost.grid,
            cfg.numerics.oracle_tol,
            method,
        )?;
        let d = compare(&sol.jost, &ode);
        gates.push(Gate {
            name: format!("oracle {method:?}"),
            value: d.max_relative,
            limit: AGREEMENT,
            pass: !d.flagged,
        });
    }
    if let Some(dir) = golden {
        let fresh = [
            ("fields.csv", output::fields_csv(&sol)),
            ("summary.csv", output::summary_csv(&sol, cfg.forcing.p0)),
        ];
        for (name, text) in fresh {
            let path = dir.join(name);
            let stored = fs::read(&path).map_err(|e| {
                CliError::Config(format!("cannot read golden {}: {e}", path.display()))
            })?;
            let same = stored == text.as_bytes();
            gates.push(Gate {
                name: format!("golden {name}"),
                value: if same { 0.0 } else { 1.0 },
                limit: 0.0,
                pass: same,
            });
        }
    }
    Ok(VerifyReport {
        solution: sol,
        gates,
    })
}
