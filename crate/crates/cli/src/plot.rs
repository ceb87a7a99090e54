//! Static SVG plots of the inlet-driven pressure wave.

use std::path::Path;

use plotters::prelude::*;
use tubewave::prelude::*;

use crate::output::write_atomic;

fn line_chart(title: &str, y_label: &str, points: &[(f64, f64)]) -> Result<String, String> {
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (800, 480)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| e.to_string())?;
        let x_max = points.last().map_or(1.0, |p| p.0);
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.1), b.max(p.1))
            });
        let pad = 0.05 * (hi - lo).max(1e-12);
        let mut chart = ChartBuilder::on(&root)
            .caption(title, ("sans-serif", 22))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(70)
            .build_cartesian_2d(0.0..x_max, (lo - pad)..(hi + pad))
            .map_err(|e| e.to_string())?;
        chart
            .configure_mesh()
            .x_desc("x [m]")
            .y_desc(y_label)
            .draw()
            .map_err(|e| e.to_string())?;
        chart
            .draw_series(LineSeries::new(points.iter().copied(), &BLUE))
            .map_err(|e| e.to_string())?;
        root.present().map_err(|e| e.to_string())?;
    }
    Ok(svg)
}

/// Writes `p1_abs.svg` and `p1_phase.svg` into `dir`.
pub fn write_pressure_plots(sol: &Solution, dir: &Path) -> std::io::Result<()> {
    let f = &sol.fields;
    let xs = f.grid.points();
    let abs: Vec<(f64, f64)> = xs.iter().zip(&f.p1).map(|(&x, p)| (x, p.norm())).collect();
    let phase: Vec<(f64, f64)> = xs.iter().zip(&f.p1).map(|(&x, p)| (x, p.arg())).collect();
    for (name, title, label, pts) in [
        ("p1_abs.svg", "pressure amplitude", "|p1| [Pa]", abs),
        ("p1_phase.svg", "pressure phase", "arg p1 [rad]", phase),
    ] {
        let svg = line_chart(title, label, &pts).map_err(std::io::Error::other)?;
        write_atomic(&dir.join(name), &svg)?;
    }
    Ok(())
}
