//! Deterministic CSV tables and atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use tempfile::NamedTempFile;
use tubewave::prelude::*;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to a temporary file beside `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn cplx(cells: &mut Vec<String>, z: Complex64) {
    cells.push(num(z.re));
    cells.push(num(z.im));
}

pub const FIELDS_HEADER: &str = "x,re_q1,im_q1,re_w1,im_w1,re_sigma1,im_sigma1,re_p1,im_p1,abs_q";

pub fn fields_csv(sol: &Solution) -> String {
    let f = &sol.fields;
    let mut out = String::new();
    out.push_str(FIELDS_HEADER);
    out.push('\n');
    for (k, &x) in f.grid.points().iter().enumerate() {
        let mut cells = vec![num(x)];
        for z in [f.q1[k], f.w1[k], f.sigma1[k], f.p1[k]] {
            cplx(&mut cells, z);
        }
        cells.push(num(sol.context.potential(x).norm()));
        row(&mut out, &cells);
    }
    out
}

pub const SUMMARY_HEADER: &str =
    "omega,re_delta,im_delta,re_delta_sq,im_delta_sq,k0,k1,q_l1,n_terms,\
tail_bound,truncation_bound,fixed_point_residual,res_continuity,res_momentum,res_wall,\
res_constitutive,re_y0,im_y0,inlet_error";

pub fn summary_row(sol: &Solution, p0: f64) -> String {
    let c = &sol.context;
    let j = &sol.jost;
    let r = &sol.fields.residuals;
    let mut cells = vec![num(c.omega)];
    cplx(&mut cells, c.delta);
    cplx(&mut cells, c.delta_sq);
    cells.extend([num(c.k0), num(c.k1), num(j.q_l1), j.n_terms.to_string()]);
    cells.extend([
        num(j.tail_bound),
        num(j.truncation_bound),
        num(j.fixed_point_residual),
    ]);
    cells.extend([
        num(r.continuity),
        num(r.momentum),
        num(r.wall),
        num(r.constitutive),
    ]);
    cplx(&mut cells, sol.fields.y0);
    cells.push(num(sol.inlet_error(p0)));
    let mut out = String::new();
    row(&mut out, &cells);
    out
}

pub fn summary_csv(sol: &Solution, p0: f64) -> String {
    format!("{SUMMARY_HEADER}\n{}", summary_row(sol, p0))
}

/// Outcome of one sweep frequency.
pub struct SweepRow {
    pub omega: f64,
    /// Present whenever the wavenumber could be formed.
    pub delta: Option<Complex64>,
    pub solution: Option<Solution>,
    /// `ok`, or a short failure label.
    pub status: String,
}

pub const DISPERSION_HEADER: &str = "omega,re_delta,im_delta,phase_speed,attenuation,status";

pub fn dispersion_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(DISPERSION_HEADER);
    out.push('\n');
    for r in rows {
        let mut cells = vec![num(r.omega)];
        match r.delta {
            Some(d) => cells.extend([num(d.re), num(d.im), num(r.omega / d.re), num(-d.im)]),
            None => cells.extend(["nan".to_string(), "nan".into(), "nan".into(), "nan".into()]),
        }
        cells.push(r.status.clone());
        row(&mut out, &cells);
    }
    out
}

pub fn sweep_summary_csv(rows: &[SweepRow], p0: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SUMMARY_HEADER},status");
    for r in rows {
        if let Some(sol) = &r.solution {
            let line = summary_row(sol, p0);
            let _ = writeln!(out, "{},{}", line.trim_end(), r.status);
        } else {
            let blanks = vec!["nan"; SUMMARY_HEADER.split(',').count() - 1].join(",");
            let _ = writeln!(out, "{},{blanks},{}", num(r.omega), r.status);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02e23, 5e-324, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(num(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b,c\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b,c\n");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
