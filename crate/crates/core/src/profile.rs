//! Axial inhomogeneity of the tube wall.
//!
//! The Young modulus and wall density are written as `E(x) = E_∞ g₁(x)` and
//! `ρ_m(x) = ρ_m∞ g₂(x)`. Each channel is a [`Profile`]: strictly positive,
//! twice continuously differentiable, and tending to 1 with vanishing first
//! and second derivatives as `x → ∞`.
//!
//! Profiles report `g − 1` through [`Profile::excess`] in closed form so that
//! far-field quantities built from it do not suffer from cancellation.

use crate::error::{Error, Result};

/// A value together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFamily {
    Homogeneous,
    ExponentialBump,
    RationalDecay,
    TabulatedSpline,
}

/// How fast a profile approaches its limit, used to bound the part of the
/// potential beyond the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDecay {
    /// Exactly homogeneous for `x ≥ end`.
    Compact { end: f64 },
    /// `|g − 1| ∝ e^{−rate·x}`.
    Exponential { rate: f64 },
    /// `|g − 1| ∝ (1 + rate·x)^{−power}`.
    Algebraic { power: f64, rate: f64 },
    /// No decay law is known.
    Unknown,
}

impl TailDecay {
    /// The slower of two decay laws.
    pub fn slowest(self, other: TailDecay) -> TailDecay {
        use TailDecay::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Compact { end: a }, Compact { end: b }) => Compact { end: a.max(b) },
            (Compact { .. }, d) | (d, Compact { .. }) => d,
            (Exponential { rate: a }, Exponential { rate: b }) => Exponential { rate: a.min(b) },
            (Algebraic { .. }, Exponential { .. }) => self,
            (Exponential { .. }, Algebraic { .. }) => other,
            (
                Algebraic {
                    power: p1,
                    rate: r1,
                },
                Algebraic {
                    power: p2,
                    rate: r2,
                },
            ) => {
                if p1 < p2 || (p1 == p2 && r1 < r2) {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Construction parameters for each built-in family.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Homogeneous,
    /// `g(x) = 1 + A e^{−κx}`
    ExponentialBump {
        amplitude: f64,
        rate: f64,
    },
    /// `g(x) = 1 + A / (1 + κx)²`
    RationalDecay {
        amplitude: f64,
        rate: f64,
    },
    /// Natural cubic spline through `(xs, gs)`; beyond the last sample it is
    /// blended to 1 over `blend_window` (or held constant when `None`).
    Tabulated {
        xs: Vec<f64>,
        gs: Vec<f64>,
        blend_window: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    spec: ProfileSpec,
    spline: Option<CubicSpline>,
}

pub fn make_profile(spec: &ProfileSpec) -> Result<Profile> {
    match spec {
        ProfileSpec::Homogeneous => {}
        ProfileSpec::ExponentialBump { amplitude, rate }
        | ProfileSpec::RationalDecay { amplitude, rate } => {
            if !(rate.is_finite() && *rate > 0.0) {
                return Err(Error::bad_parameter(
                    "rate",
                    format!("must be positive, got {rate}"),
                ));
            }
            if !amplitude.is_finite() {
                return Err(Error::bad_parameter("amplitude", "must be finite"));
            }
            // Both families attain their minimum 1 + A at x = 0 when A < 0.
            if 1.0 + amplitude <= 0.0 {
                return Err(Error::PositivityViolation {
                    x: 0.0,
                    value: 1.0 + amplitude,
                });
            }
        }
        ProfileSpec::Tabulated {
            xs,
            gs,
            blend_window,
        } => {
            let spline = CubicSpline::natural(xs, gs)?;
            if let Some(w) = blend_window {
                if !(w.is_finite() && *w > 0.0) {
                    return Err(Error::bad_parameter(
                        "blend_window",
                        format!("must be positive, got {w}"),
                    ));
                }
            }
            let profile = Profile {
                spec: spec.clone(),
                spline: Some(spline),
            };
            profile.check_positive_on_samples()?;
            return Ok(profile);
        }
    }
    Ok(Profile {
        spec: spec.clone(),
        spline: None,
    })
}

impl Profile {
    pub fn homogeneous() -> Self {
        Profile {
            spec: ProfileSpec::Homogeneous,
            spline: None,
        }
    }

    pub fn exponential_bump(amplitude: f64, rate: f64) -> Result<Self> {
        make_profile(&ProfileSpec::ExponentialBump { amplitude, rate })
    }

    pub fn rational_decay(amplitude: f64, rate: f64) -> Result<Self> {
        make_profile(&ProfileSpec::RationalDecay { amplitude, rate })
    }

    pub fn tabulated(xs: Vec<f64>, gs: Vec<f64>, blend_window: Option<f64>) -> Result<Self> {
        make_profile(&ProfileSpec::Tabulated {
            xs,
            gs,
            blend_window,
        })
    }

    /// Parses a two-column `x g` table (whitespace separated, `#` comments)
    /// and builds a spline profile from it.
    pub fn from_table(text: &str, blend_window: Option<f64>) -> Result<Self> {
        let (xs, gs) = parse_table(text)?;
        Self::tabulated(xs, gs, blend_window)
    }

    pub fn spec(&self) -> &ProfileSpec {
        &self.spec
    }

    pub fn family(&self) -> ProfileFamily {
        match self.spec {
            ProfileSpec::Homogeneous => ProfileFamily::Homogeneous,
            ProfileSpec::ExponentialBump { .. } => ProfileFamily::ExponentialBump,
            ProfileSpec::RationalDecay { .. } => ProfileFamily::RationalDecay,
            ProfileSpec::Tabulated { .. } => ProfileFamily::TabulatedSpline,
        }
    }

    /// `g(x)`.
    pub fn value(&self, x: f64) -> f64 {
        1.0 + self.excess_jet(x).value
    }

    /// `(g, g′, g″)` at `x`.
    pub fn eval(&self, x: f64) -> Jet<f64> {
        let e = self.excess_jet(x);
        Jet {
            value: 1.0 + e.value,
            ..e
        }
    }

    /// `g(x) − 1` evaluated without cancellation.
    pub fn excess(&self, x: f64) -> f64 {
        self.excess_jet(x).value
    }

    /// `(g − 1, g′, g″)` at `x`.
    pub fn excess_jet(&self, x: f64) -> Jet<f64> {
        match &self.spec {
            ProfileSpec::Homogeneous => Jet {
                value: 0.0,
                d1: 0.0,
                d2: 0.0,
            },
            ProfileSpec::ExponentialBump { amplitude, rate } => {
                let e = amplitude * (-rate * x).exp();
                Jet {
                    value: e,
                    d1: -rate * e,
                    d2: rate * rate * e,
                }
            }
            ProfileSpec::RationalDecay { amplitude, rate } => {
                let s = 1.0 / (1.0 + rate * x);
                let s2 = s * s;
                Jet {
                    value: amplitude * s2,
                    d1: -2.0 * amplitude * rate * s2 * s,
                    d2: 6.0 * amplitude * rate * rate * s2 * s2,
                }
            }
            ProfileSpec::Tabulated { blend_window, .. } => {
                let spline = self
                    .spline
                    .as_ref()
                    .expect("tabulated profile carries a spline");
                spline.excess_jet(x, *blend_window)
            }
        }
    }

    pub fn tail_decay(&self) -> TailDecay {
        match &self.spec {
            ProfileSpec::Homogeneous => TailDecay::Compact { end: 0.0 },
            ProfileSpec::ExponentialBump { rate, .. } => TailDecay::Exponential { rate: *rate },
            ProfileSpec::RationalDecay { rate, .. } => TailDecay::Algebraic {
                power: 2.0,
                rate: *rate,
            },
            ProfileSpec::Tabulated { blend_window, .. } => match blend_window {
                Some(w) => TailDecay::Compact {
                    end: self.spline.as_ref().map_or(0.0, |s| s.x_last()) + w,
                },
                None => TailDecay::Unknown,
            },
        }
    }

    /// Points where `g″` is only continuous: spline knots and blend edges.
    /// Grids that put panel breaks here keep their spectral accuracy.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (Some(spline), ProfileSpec::Tabulated { blend_window, .. }) =
            (&self.spline, &self.spec)
        else {
            return Vec::new();
        };
        let mut out = spline.x.clone();
        if let Some(w) = blend_window {
            out.push(spline.x_last() + w);
        }
        out
    }

    fn check_positive_on_samples(&self) -> Result<()> {
        let Some(spline) = &self.spline else {
            return Ok(());
        };
        let mut xs: Vec<f64> = Vec::new();
        for w in spline.x.windows(2) {
            for k in 0..8 {
                xs.push(w[0] + (w[1] - w[0]) * k as f64 / 8.0);
            }
        }
        xs.push(spline.x_last());
        if let ProfileSpec::Tabulated {
            blend_window: Some(bw),
            ..
        } = self.spec
        {
            for k in 1..=16 {
                xs.push(spline.x_last() + bw * k as f64 / 16.0);
            }
        }
        for x in xs.into_iter().filter(|x| *x >= 0.0) {
            let g = self.value(x);
            if !(g > 0.0) {
                return Err(Error::PositivityViolation { x, value: g });
            }
        }
        Ok(())
    }
}

/// The pair `(g₁, g₂)` of stiffness and wall-density profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct InhomogeneityProfile {
    pub g1: Profile,
    pub g2: Profile,
}

impl InhomogeneityProfile {
    pub fn new(g1: Profile, g2: Profile) -> Self {
        InhomogeneityProfile { g1, g2 }
    }

    pub fn homogeneous() -> Self {
        Self::new(Profile::homogeneous(), Profile::homogeneous())
    }

    pub fn tail_decay(&self) -> TailDecay {
        self.g1.tail_decay().slowest(self.g2.tail_decay())
    }

    /// Union of both channels' breakpoints, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = self.g1.breakpoints();
        out.extend(self.g2.breakpoints());
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Runs [`check_asymptotics`] on both channels and returns the worse report.
    pub fn check_asymptotics(&self, x_max: f64, tol: f64) -> Result<AsymptoticsReport> {
        let r1 = check_asymptotics(&self.g1, x_max, tol)?;
        let r2 = check_asymptotics(&self.g2, x_max, tol)?;
        Ok(if r2.residual > r1.residual { r2 } else { r1 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsReport {
    /// Largest of `|g − 1|`, `|g′|`, `|g″|` over the ladder.
    pub residual: f64,
    /// Where it was attained.
    pub x: f64,
}

/// Verifies that the profile has reached its homogeneous limit at `x_max`
/// by sampling a logarithmic ladder `x_max·10^{k/4}`, `k = 0..=8`.
pub fn check_asymptotics(p: &Profile, x_max: f64, tol: f64) -> Result<AsymptoticsReport> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::bad_parameter(
            "x_max",
            format!("must be positive, got {x_max}"),
        ));
    }
    let mut worst = AsymptoticsReport {
        residual: 0.0,
        x: x_max,
    };
    for k in 0..=8 {
        let x = x_max * 10f64.powf(k as f64 / 4.0);
        let e = p.excess_jet(x);
        let r = e.value.abs().max(e.d1.abs()).max(e.d2.abs());
        if r > worst.residual {
            worst = AsymptoticsReport { residual: r, x };
        }
    }
    if worst.residual >= tol && worst.residual > 0.0 {
        return Err(Error::AsymptoticsViolated {
            x: worst.x,
            residual: worst.residual,
        });
    }
    Ok(worst)
}

/// Reads `x g` pairs, one per line, separated by whitespace or a comma.
/// Blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut gs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|c| !c.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::Table {
                line: i + 1,
                reason: format!("expected 2 columns, found {}", cols.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Table {
                line: i + 1,
                reason: format!("`{s}`: {e}"),
            })
        };
        let (x, g) = (parse(cols[0])?, parse(cols[1])?);
        if let Some(&prev) = xs.last() {
            if x <= prev {
                return Err(Error::Table {
                    line: i + 1,
                    reason: "x must be strictly increasing".into(),
                });
            }
        }
        xs.push(x);
        gs.push(g);
    }
    Ok((xs, gs))
}

/// Natural cubic spline (`S″ = 0` at both ends), extended linearly outside
/// the sampled range, which keeps it C² everywhere.
#[derive(Debug, Clone, PartialEq)]
struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    fn natural(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::bad_parameter(
                "table",
                format!(
                    "need at least two (x, g) pairs of equal length, got {} and {}",
                    n,
                    y.len()
                ),
            ));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::bad_parameter("table", "entries must be finite"));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::bad_parameter(
                "table",
                "x must be strictly increasing",
            ));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior knots.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    fn x_last(&self) -> f64 {
        *self.x.last().unwrap()
    }

    fn eval(&self, t: f64) -> Jet<f64> {
        let n = self.x.len();
        if t <= self.x[0] {
            let s = self.slope_at(0);
            return Jet {
                value: self.y[0] + s * (t - self.x[0]),
                d1: s,
                d2: 0.0,
            };
        }
        if t >= self.x[n - 1] {
            let s = self.slope_at(n - 1);
            return Jet {
                value: self.y[n - 1] + s * (t - self.x[n - 1]),
                d1: s,
                d2: 0.0,
            };
        }
        let i = self
            .x
            .partition_point(|&xi| xi <= t)
            .saturating_sub(1)
            .min(n - 2);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let value = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0
            + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let d2 = a * m0 + b * m1;
        Jet { value, d1, d2 }
    }

    fn slope_at(&self, knot: usize) -> f64 {
        let n = self.x.len();
        if knot == 0 {
            let h = self.x[1] - self.x[0];
            (self.y[1] - self.y[0]) / h - h * (2.0 * self.m[0] + self.m[1]) / 6.0
        } else {
            let h = self.x[n - 1] - self.x[n - 2];
            (self.y[n - 1] - self.y[n - 2]) / h + h * (self.m[n - 2] + 2.0 * self.m[n - 1]) / 6.0
        }
    }

    fn excess_jet(&self, t: f64, blend_window: Option<f64>) -> Jet<f64> {
        let last = self.x_last();
        match blend_window {
            None if t > last => Jet {
                value: self.y[self.y.len() - 1] - 1.0,
                d1: 0.0,
                d2: 0.0,
            },
            Some(w) if t > last => {
                let s = (t - last) / w;
                if s >= 1.0 {
                    return Jet {
                        value: 0.0,
                        d1: 0.0,
                        d2: 0.0,
                    };
                }
                // Quintic smoothstep: zero first and second derivatives at both ends.
                let step = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
                let dstep = 30.0 * s * s * (1.0 - s) * (1.0 - s) / w;
                let d2step = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s * s) / (w * w);
                let lin = self.eval(t);
                let e = lin.value - 1.0;
                Jet {
                    value: e * (1.0 - step),
                    d1: lin.d1 * (1.0 - step) - e * dstep,
                    d2: -2.0 * lin.d1 * dstep - e * d2step,
                }
            }
            _ => {
                let j = self.eval(t);
                Jet {
                    value: j.value - 1.0,
                    ..j
                }
            }
        }
    }
}
