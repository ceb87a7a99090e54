//! Frequency-domain scattering data.
//!
//! Eliminating wall displacement, stress and pressure from the harmonic
//! amplitude system leaves one second-order equation for the flow amplitude,
//! `(G Q₁′)′ − Q₁ = 0`, with the complex coefficient
//!
//! ```text
//! G(x) = (2η / (ρ_f ω)) · b / (i a) − (c₀² / ω²) g₁(x) + (R h ρ_m∞ / (2 ρ_f)) g₂(x)
//! ```
//!
//! and `c₀² = h E_∞ / (2 R ρ_f)`. The Liouville substitution `y = Q₁ √G`
//! brings it to normal form `y″ + I y = 0` with
//!
//! ```text
//! I = ¼ (G′/G)² − ½ G″/G − 1/G,
//! ```
//!
//! whose far-field value defines the wavenumber, `δ² = −1/G_∞`, and the
//! potential `q = 1 − I/δ²` that drives the half-line scattering problem.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::{InhomogeneityProfile, Jet, TailDecay};
use crate::rheology::{ComplexModuli, RheologySpectrum};
use crate::spectral::gauss_legendre;

/// Geometry and far-field material constants of the tube and the liquid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeSystem {
    radius: f64,
    thickness: f64,
    fluid_density: f64,
    wall_density: f64,
    young_modulus: f64,
}

impl TubeSystem {
    /// `R`, `h`, `ρ_f`, `ρ_m∞`, `E_∞`, all SI.
    pub fn new(
        radius: f64,
        thickness: f64,
        fluid_density: f64,
        wall_density: f64,
        young_modulus: f64,
    ) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::bad_parameter(
                    name,
                    format!("must be positive, got {v}"),
                ))
            }
        };
        positive("radius", radius)?;
        positive("thickness", thickness)?;
        positive("fluid_density", fluid_density)?;
        positive("young_modulus", young_modulus)?;
        if !(wall_density >= 0.0 && wall_density.is_finite()) {
            return Err(Error::bad_parameter(
                "wall_density",
                format!("must be nonnegative, got {wall_density}"),
            ));
        }
        Ok(TubeSystem {
            radius,
            thickness,
            fluid_density,
            wall_density,
            young_modulus,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn fluid_density(&self) -> f64 {
        self.fluid_density
    }

    pub fn wall_density(&self) -> f64 {
        self.wall_density
    }

    pub fn young_modulus(&self) -> f64 {
        self.young_modulus
    }

    /// Squared Moens–Korteweg speed `h E_∞ / (2 R ρ_f)`.
    pub fn c0_sq(&self) -> f64 {
        self.thickness * self.young_modulus / (2.0 * self.radius * self.fluid_density)
    }
}

/// Anything that can be sampled as a complex potential `q(x)` on `x ≥ 0`.
pub trait Potential: Sync {
    fn q(&self, x: f64) -> Complex64;
}

impl<F> Potential for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn q(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// The coefficient `G(x)`, split into its constant viscous part and the
/// two profile-weighted parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientG {
    viscous: Complex64,
    stiffness: f64,
    inertia: f64,
    profile: InhomogeneityProfile,
}

pub fn coefficient_g(
    tube: &TubeSystem,
    spec: &RheologySpectrum,
    profile: &InhomogeneityProfile,
    omega: f64,
) -> Result<CoefficientG> {
    let m = spec.moduli(omega)?;
    let rho = tube.fluid_density();
    let viscous = 2.0 * spec.viscosity() / (rho * omega) * m.b / (Complex64::i() * m.a);
    Ok(CoefficientG {
        viscous,
        stiffness: tube.c0_sq() / (omega * omega),
        inertia: tube.radius() * tube.thickness() * tube.wall_density() / (2.0 * rho),
        profile: profile.clone(),
    })
}

impl CoefficientG {
    pub fn profile(&self) -> &InhomogeneityProfile {
        &self.profile
    }

    /// `(G, G′, G″)` at `x`.
    pub fn eval(&self, x: f64) -> Jet<Complex64> {
        let e1 = self.profile.g1.excess_jet(x);
        let e2 = self.profile.g2.excess_jet(x);
        let lin = |a: f64, b: f64| Complex64::new(-self.stiffness * a + self.inertia * b, 0.0);
        Jet {
            value: self.limit() + lin(e1.value, e2.value),
            d1: lin(e1.d1, e2.d1),
            d2: lin(e1.d2, e2.d2),
        }
    }

    /// `G(x) − G_∞`, free of cancellation.
    pub fn excess(&self, x: f64) -> Complex64 {
        let e1 = self.profile.g1.excess(x);
        let e2 = self.profile.g2.excess(x);
        Complex64::new(-self.stiffness * e1 + self.inertia * e2, 0.0)
    }

    /// `lim_{x→∞} G(x)`.
    pub fn limit(&self) -> Complex64 {
        self.viscous + Complex64::new(self.inertia - self.stiffness, 0.0)
    }

    /// Fails when `|G|` drops below `1e−12·|G_∞|` at any of `xs`.
    pub fn check_nonvanishing(&self, xs: &[f64]) -> Result<()> {
        let floor = 1e-12 * self.limit().norm();
        for &x in xs {
            let modulus = self.eval(x).value.norm();
            if !(modulus >= floor) || modulus == 0.0 {
                return Err(Error::GVanishes { x, modulus });
            }
        }
        Ok(())
    }
}

/// Liouville invariant `I = ¼(G′/G)² − ½G″/G − 1/G` from a jet of `G`.
pub fn invariant_i(g: &Jet<Complex64>) -> Result<Complex64> {
    if g.value.norm() == 0.0 {
        return Err(Error::GVanishes {
            x: f64::NAN,
            modulus: 0.0,
        });
    }
    let r1 = g.d1 / g.value;
    Ok(0.25 * r1 * r1 - 0.5 * g.d2 / g.value - 1.0 / g.value)
}

/// `q = 1 − I/δ²`, literally.
pub fn potential_q(invariant: Complex64, delta_sq: Complex64) -> Complex64 {
    1.0 - invariant / delta_sq
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber {
    pub delta_sq: Complex64,
    /// Root of `δ²` with `Im δ < 0`, or `Re δ > 0` when `δ` is real.
    pub delta: Complex64,
    /// `k₀ + i k₁ := −G_∞`.
    pub k0: f64,
    pub k1: f64,
}

/// `δ² = −1/G_∞` and the decaying root.
pub fn wavenumber(g_limit: Complex64) -> Result<Wavenumber> {
    if g_limit.norm() == 0.0 || !g_limit.is_finite() {
        return Err(Error::DegenerateG);
    }
    let k = -g_limit;
    let delta_sq = 1.0 / k;
    let root = delta_sq.sqrt();
    let delta = if root.im > 0.0 || (root.im == 0.0 && root.re < 0.0) {
        -root
    } else {
        root
    };
    Ok(Wavenumber {
        delta_sq,
        delta,
        k0: k.re,
        k1: k.im,
    })
}

/// Wavenumber of the inviscid liquid (`η = 0`), where `G_∞` keeps only its
/// wall terms. With `ρ_m∞ = 0` this is `ω/c₀`.
pub fn inviscid_wavenumber(tube: &TubeSystem, omega: f64) -> Result<Wavenumber> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidFrequency(omega));
    }
    let inertia =
        tube.radius() * tube.thickness() * tube.wall_density() / (2.0 * tube.fluid_density());
    wavenumber(Complex64::new(
        inertia - tube.c0_sq() / (omega * omega),
        0.0,
    ))
}

/// Everything the half-line problem needs at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringContext {
    pub omega: f64,
    pub moduli: ComplexModuli,
    pub coefficient: CoefficientG,
    pub delta: Complex64,
    pub delta_sq: Complex64,
    pub k0: f64,
    pub k1: f64,
}

impl ScatteringContext {
    pub fn new(
        tube: &TubeSystem,
        spec: &RheologySpectrum,
        profile: &InhomogeneityProfile,
        omega: f64,
    ) -> Result<Self> {
        let moduli = spec.moduli(omega)?;
        let coefficient = coefficient_g(tube, spec, profile, omega)?;
        let w = wavenumber(coefficient.limit())?;
        Ok(ScatteringContext {
            omega,
            moduli,
            coefficient,
            delta: w.delta,
            delta_sq: w.delta_sq,
            k0: w.k0,
            k1: w.k1,
        })
    }

    pub fn profile(&self) -> &InhomogeneityProfile {
        self.coefficient.profile()
    }

    pub fn invariant(&self, x: f64) -> Result<Complex64> {
        invariant_i(&self.coefficient.eval(x))
    }

    /// `q(x)`, rearranged as `(G − G_∞)/G + G_∞(¼(G′/G)² − ½G″/G)` so that
    /// small values keep their relative accuracy.
    pub fn potential(&self, x: f64) -> Complex64 {
        let g = self.coefficient.eval(x);
        let r1 = g.d1 / g.value;
        let g_inf = self.coefficient.limit();
        self.coefficient.excess(x) / g.value + g_inf * (0.25 * r1 * r1 - 0.5 * g.d2 / g.value)
    }

    pub fn certify(&self, x_max: f64, tol: f64) -> Result<IntegrabilityCertificate> {
        certify_integrability(self, x_max, tol, self.profile().tail_decay())
    }
}

impl Potential for ScatteringContext {
    fn q(&self, x: f64) -> Complex64 {
        self.potential(x)
    }
}

/// Upper estimate of `∫₀^∞ |q|`, split at the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrabilityCertificate {
    pub x_max: f64,
    /// `∫₀^{x_max} |q|` including its quadrature error margin.
    pub body: f64,
    /// Estimate of `∫_{x_max}^∞ |q|` from the decay law.
    pub tail: f64,
    pub q_l1: f64,
}

impl IntegrabilityCertificate {
    /// Certificate for `q ≡ 0`.
    pub fn zero(x_max: f64) -> Self {
        IntegrabilityCertificate {
            x_max,
            body: 0.0,
            tail: 0.0,
            q_l1: 0.0,
        }
    }
}

/// Absolute level below which `|q|` counts as already decayed.
const DECAYED: f64 = 1e-14;
/// Finest panel count tried for `∫|q|`.
const MAX_PANELS: usize = 1 << 14;
/// Relative change at the finest level still accepted as convergence.
const SETTLED: f64 = 1e-6;

/// Bounds `∫₀^∞ |q(x)| dx`.
///
/// The body `[0, x_max]` is integrated with composite 16-point
/// Gauss–Legendre, doubling the panel count until two levels agree to
/// `tol` (relative), or to `1e−6` at the finest level. The last difference
/// is added to the result. The tail uses `decay`; with [`TailDecay::Unknown`] a
/// rate is fitted from `|q(x_max/2)|` and `|q(x_max)|`.
pub fn certify_integrability(
    q: &dyn Potential,
    x_max: f64,
    tol: f64,
    decay: TailDecay,
) -> Result<IntegrabilityCertificate> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::bad_parameter(
            "x_max",
            format!("must be positive, got {x_max}"),
        ));
    }
    let abs_q = |x: f64| q.q(x).norm();
    let q_end = abs_q(x_max);
    let q_mid = abs_q(0.5 * x_max);
    if !q_end.is_finite() || !q_mid.is_finite() {
        return Err(Error::NotIntegrable("q is not finite".into()));
    }
    if q_end > DECAYED && q_end >= 0.9 * q_mid {
        return Err(Error::NotIntegrable(format!(
            "|q| does not decay: |q({})| = {q_mid:e}, |q({x_max})| = {q_end:e}",
            0.5 * x_max
        )));
    }

    let (gx, gw) = gauss_legendre(16);
    let integrate = |a: f64, b: f64, panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = 0.0;
        for k in 0..panels {
            let lo = a + h * k as f64;
            for (t, w) in gx.iter().zip(&gw) {
                s += w * abs_q(lo + 0.5 * h * (t + 1.0));
            }
        }
        0.5 * h * s
    };
    let refined = |a: f64, b: f64| -> Result<f64> {
        let mut panels = 64;
        let mut prev = integrate(a, b, panels);
        loop {
            panels *= 2;
            let next = integrate(a, b, panels);
            if !next.is_finite() {
                return Err(Error::NotIntegrable("∫|q| is not finite".into()));
            }
            let diff = (next - prev).abs();
            let scale = next.max(1.0);
            if diff <= tol.max(1e-15) * scale {
                return Ok(next + diff);
            }
            if panels >= MAX_PANELS {
                // kinks in q (spline knots) only allow algebraic convergence;
                // the inflated value is still a usable upper estimate
                if diff <= SETTLED * scale {
                    return Ok(next + diff);
                }
                return Err(Error::NotIntegrable(
                    "∫|q| does not settle under grid refinement".into(),
                ));
            }
            prev = next;
        }
    };

    let body = refined(0.0, x_max)?;
    let samples: Vec<f64> = (0..=4).map(|k| x_max * (1.0 - 0.05 * k as f64)).collect();
    let tail = match decay {
        TailDecay::Compact { end } if end <= x_max => 0.0,
        TailDecay::Compact { end } => refined(x_max, end)?,
        TailDecay::Exponential { rate } => {
            let amp = samples
                .iter()
                .map(|&x| abs_q(x) * (-rate * (x_max - x)).exp())
                .fold(0.0, f64::max);
            2.0 * amp / rate
        }
        TailDecay::Algebraic { power, rate } => {
            let end = 1.0 + rate * x_max;
            let amp = samples
                .iter()
                .map(|&x| abs_q(x) * ((1.0 + rate * x) / end).powf(power))
                .fold(0.0, f64::max);
            2.0 * amp * end / (rate * (power - 1.0))
        }
        TailDecay::Unknown => {
            if q_end <= DECAYED {
                DECAYED * x_max
            } else {
                let rate = (q_mid / q_end).ln() / (0.5 * x_max);
                2.0 * q_end / rate
            }
        }
    };
    Ok(IntegrabilityCertificate {
        x_max,
        body,
        tail,
        q_l1: body + tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;
    use crate::rheology::RheologySpectrum;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn tube() -> TubeSystem {
        TubeSystem::new(0.01, 0.001, 1050.0, 1100.0, 4.0e5).unwrap()
    }

    fn bump_g1() -> InhomogeneityProfile {
        InhomogeneityProfile::new(
            Profile::exponential_bump(0.1, 1.0).unwrap(),
            Profile::homogeneous(),
        )
    }

    #[test]
    fn tube_validation() {
        assert!(matches!(
            TubeSystem::new(-0.01, 0.001, 1050.0, 1100.0, 4.0e5),
            Err(Error::BadParameter { ref name, .. }) if name == "radius"
        ));
        assert!(TubeSystem::new(0.01, 0.001, 1050.0, 0.0, 4.0e5).is_ok());
        assert_relative_eq!(tube().c0_sq(), 0.001 * 4.0e5 / (2.0 * 0.01 * 1050.0));
    }

    #[test]
    fn homogeneous_coefficient_is_constant() {
        let spec = RheologySpectrum::newtonian(0.004).unwrap();
        let g = coefficient_g(&tube(), &spec, &InhomogeneityProfile::homogeneous(), 6.0).unwrap();
        for x in [0.0, 0.5, 17.0] {
            let j = g.eval(x);
            assert_eq!(j.value, g.limit());
            assert_eq!(j.d1, Complex64::new(0.0, 0.0));
            assert_eq!(j.d2, Complex64::new(0.0, 0.0));
        }
        // term dropout: vanishing viscosity and wall mass leave −c₀²/ω²
        let inviscid = RheologySpectrum::newtonian(1e-300).unwrap();
        let light = TubeSystem::new(0.01, 0.001, 1050.0, 0.0, 4.0e5).unwrap();
        let g =
            coefficient_g(&light, &inviscid, &InhomogeneityProfile::homogeneous(), 6.0).unwrap();
        assert_relative_eq!(g.limit().re, -light.c0_sq() / 36.0, max_relative = 1e-15);
        assert!(g.limit().im.abs() < 1e-300);
    }

    #[test]
    fn coefficient_derivatives_follow_the_profiles() {
        let spec = RheologySpectrum::maxwell(0.5, 0.1).unwrap();
        let t = tube();
        let profile = InhomogeneityProfile::new(
            Profile::exponential_bump(0.3, 0.7).unwrap(),
            Profile::rational_decay(-0.2, 1.5).unwrap(),
        );
        let omega = 4.0;
        let g = coefficient_g(&t, &spec, &profile, omega).unwrap();
        let stiff = t.c0_sq() / (omega * omega);
        let inert = t.radius() * t.thickness() * t.wall_density() / (2.0 * t.fluid_density());
        let x = 0.8;
        let (p1, p2) = (profile.g1.eval(x), profile.g2.eval(x));
        let j = g.eval(x);
        assert_relative_eq!(j.d1.re, inert * p2.d1 - stiff * p1.d1, max_relative = 1e-14);
        assert_relative_eq!(j.d2.re, inert * p2.d2 - stiff * p1.d2, max_relative = 1e-14);
        assert_eq!(j.d1.im, 0.0);
        let from_profiles = g.limit() - stiff * (p1.value - 1.0) + inert * (p2.value - 1.0);
        assert!((j.value - from_profiles).norm() < 1e-14 * j.value.norm());
    }

    #[test]
    fn invariant_matches_hand_expansion() {
        // G = α + β e^{−x} at x = 0 with α = 1, β = 0.1: G = 1.1, G′ = −0.1, G″ = 0.1
        let (alpha, beta) = (1.0, 0.1);
        let jet = Jet {
            value: Complex64::new(alpha + beta, 0.0),
            d1: Complex64::new(-beta, 0.0),
            d2: Complex64::new(beta, 0.0),
        };
        let s = alpha + beta;
        let expected = 0.25 * (beta / s).powi(2) - 0.5 * beta / s - 1.0 / s;
        assert_relative_eq!(
            invariant_i(&jet).unwrap().re,
            expected,
            max_relative = 1e-15
        );

        let homogeneous = Jet {
            value: Complex64::new(-0.4, 0.01),
            d1: Complex64::new(0.0, 0.0),
            d2: Complex64::new(0.0, 0.0),
        };
        let w = wavenumber(homogeneous.value).unwrap();
        assert!(
            (invariant_i(&homogeneous).unwrap() - w.delta_sq).norm() < 1e-15 * w.delta_sq.norm()
        );
    }

    #[test]
    fn moens_korteweg_limit() {
        let light = TubeSystem::new(0.01, 0.001, 1050.0, 0.0, 4.0e5).unwrap();
        let omega = 2.0;
        let w = wavenumber(Complex64::new(-light.c0_sq() / (omega * omega), 0.0)).unwrap();
        assert_relative_eq!(
            w.delta.re,
            omega / light.c0_sq().sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(w.delta.im, 0.0);
        // mass-dominated wall: negative δ², evanescent root
        let w = wavenumber(Complex64::new(0.3, 0.0)).unwrap();
        assert!(w.delta.im < 0.0 && w.delta.re.abs() < 1e-15);
        assert_eq!(
            wavenumber(Complex64::new(0.0, 0.0)),
            Err(Error::DegenerateG)
        );
    }

    #[test]
    fn newtonian_wavenumber_components() {
        let t = tube();
        let eta = 0.004;
        let omega = 6.0;
        let spec = RheologySpectrum::newtonian(eta).unwrap();
        let ctx =
            ScatteringContext::new(&t, &spec, &InhomogeneityProfile::homogeneous(), omega).unwrap();
        let k1 = 2.0 * eta / (t.fluid_density() * omega);
        let k0 = t.c0_sq() / (omega * omega)
            - t.radius() * t.thickness() * t.wall_density() / (2.0 * t.fluid_density());
        assert_relative_eq!(ctx.k1, k1, max_relative = 1e-14);
        assert_relative_eq!(ctx.k0, k0, max_relative = 1e-14);
        let expected = Complex64::new(k0, -k1) / (k0 * k0 + k1 * k1);
        assert!((ctx.delta_sq - expected).norm() < 1e-14 * expected.norm());
        assert!(ctx.delta_sq.im < 0.0);
        assert!(ctx.delta.im < 0.0);
        assert!((ctx.delta * ctx.delta - ctx.delta_sq).norm() < 1e-15 * ctx.delta_sq.norm());
    }

    #[test]
    fn potential_matches_independent_evaluation() {
        // Exponential bump on g₁, A = 0.1, κ = 1, evaluated by hand at x = 0.
        let t = tube();
        let spec = RheologySpectrum::newtonian(0.004).unwrap();
        let omega = 2.0 * std::f64::consts::PI;
        let ctx = ScatteringContext::new(&t, &spec, &bump_g1(), omega).unwrap();
        let rho = t.fluid_density();
        let g_inf = Complex64::new(0.0, -2.0 * 0.004 / (rho * omega))
            + Complex64::new(
                t.radius() * t.thickness() * t.wall_density() / (2.0 * rho)
                    - t.c0_sq() / (omega * omega),
                0.0,
            );
        let s = t.c0_sq() / (omega * omega);
        let (g, gp, gpp) = (
            g_inf - s * 0.1,
            Complex64::new(s * 0.1, 0.0),
            Complex64::new(-s * 0.1, 0.0),
        );
        let inv = 0.25 * (gp / g) * (gp / g) - 0.5 * gpp / g - 1.0 / g;
        let delta_sq = -1.0 / g_inf;
        let q0 = 1.0 - inv / delta_sq;
        assert!((ctx.potential(0.0) - q0).norm() < 1e-13 * q0.norm());
        // both algebraic forms agree everywhere
        for x in [0.0, 0.3, 2.0, 9.0] {
            let literal = potential_q(ctx.invariant(x).unwrap(), ctx.delta_sq);
            assert!((literal - ctx.potential(x)).norm() < 1e-14);
        }
        assert!(ctx.potential(60.0).norm() < 1e-25);
    }

    #[test]
    fn homogeneous_potential_vanishes() {
        let spec = RheologySpectrum::oldroyd(0.3, 0.2, 0.05).unwrap();
        let ctx = ScatteringContext::new(&tube(), &spec, &InhomogeneityProfile::homogeneous(), 3.0)
            .unwrap();
        for x in [0.0, 1.0, 10.0] {
            assert_eq!(ctx.potential(x), Complex64::new(0.0, 0.0));
        }
        let c = ctx.certify(20.0, 1e-10).unwrap();
        assert_eq!(c.q_l1, 0.0);
    }

    #[test]
    fn delta_depends_only_on_limits() {
        let spec = RheologySpectrum::maxwell(0.2, 0.05).unwrap();
        let a = ScatteringContext::new(&tube(), &spec, &InhomogeneityProfile::homogeneous(), 5.0)
            .unwrap();
        let b = ScatteringContext::new(&tube(), &spec, &bump_g1(), 5.0).unwrap();
        assert_eq!(a.delta, b.delta);
        assert_eq!(a.delta_sq, b.delta_sq);
    }

    #[test]
    fn integrability_certificates() {
        let spec = RheologySpectrum::newtonian(0.004).unwrap();
        let ctx = ScatteringContext::new(&tube(), &spec, &bump_g1(), 6.0).unwrap();
        let short = ctx.certify(12.0, 1e-12).unwrap();
        let long = ctx.certify(24.0, 1e-12).unwrap();
        assert!(short.q_l1.is_finite() && short.q_l1 > 0.0);
        // the tail estimate at 12 covers what the longer body picks up
        assert!(long.body - short.body <= short.tail);
        assert!(short.tail <= 1.0 * (-12.0f64).exp());

        let (xs, gs) = (vec![0.0, 1.0, 2.0], vec![1.0, 1.5, 2.0]);
        let bad = InhomogeneityProfile::new(
            Profile::tabulated(xs, gs, None).unwrap(),
            Profile::homogeneous(),
        );
        let ctx = ScatteringContext::new(&tube(), &spec, &bad, 6.0).unwrap();
        assert!(matches!(
            ctx.certify(20.0, 1e-10),
            Err(Error::NotIntegrable(_))
        ));
    }

    #[test]
    fn vanishing_coefficient_is_reported() {
        // choose ω so that −c₀²/ω² + mass term nearly cancels, then push g₁ across it
        let t = tube();
        let spec = RheologySpectrum::newtonian(1e-12).unwrap();
        let inert = t.radius() * t.thickness() * t.wall_density() / (2.0 * t.fluid_density());
        let omega = (t.c0_sq() / (2.0 * inert)).sqrt();
        // c₀²/ω² = 2·inert, so G_∞ ≈ −inert and G(0) = −inert − 2·inert·A vanishes at A = −0.5
        let profile = InhomogeneityProfile::new(
            Profile::exponential_bump(-0.5, 1.0).unwrap(),
            Profile::homogeneous(),
        );
        let g = coefficient_g(&t, &spec, &profile, omega).unwrap();
        assert!(matches!(
            g.check_nonvanishing(&[0.0, 1.0]),
            Err(Error::GVanishes { .. })
        ));
    }

    proptest! {
        #[test]
        fn invariant_scaling_identity(
            re in -2.0f64..2.0, im in -2.0f64..2.0,
            d1 in -1.0f64..1.0, d2 in -1.0f64..1.0,
            c in 0.1f64..10.0,
        ) {
            prop_assume!(re.abs() + im.abs() > 0.1);
            let g = Jet { value: Complex64::new(re, im), d1: Complex64::new(d1, 0.0), d2: Complex64::new(d2, 0.0) };
            let scaled = Jet { value: g.value * c, d1: g.d1 * c, d2: g.d2 * c };
            let lhs = invariant_i(&scaled).unwrap() + 1.0 / scaled.value;
            let rhs = invariant_i(&g).unwrap() + 1.0 / g.value;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn selected_root_squares_back(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            prop_assume!(re.abs() + im.abs() > 1e-6);
            let w = wavenumber(Complex64::new(re, im)).unwrap();
            prop_assert!((w.delta * w.delta - w.delta_sq).norm() <= 1e-14 * w.delta_sq.norm());
            prop_assert!(w.delta.im <= 0.0);
            if w.delta.im == 0.0 { prop_assert!(w.delta.re > 0.0); }
        }

        #[test]
        fn coefficient_approaches_limit_at_profile_rate(a in -0.5f64..2.0, k in 0.2f64..2.0) {
            let spec = RheologySpectrum::newtonian(0.004).unwrap();
            let profile = InhomogeneityProfile::new(Profile::exponential_bump(a, k).unwrap(), Profile::homogeneous());
            let g = coefficient_g(&tube(), &spec, &profile, 6.0).unwrap();
            let s = tube().c0_sq() / 36.0;
            for x in [1.0, 5.0, 20.0] {
                let d = (g.eval(x).value - g.limit()).norm();
                let expected = s * a.abs() * (-k * x).exp();
                prop_assert!((d - expected).abs() <= 1e-13 * (1.0 + s));
            }
        }
    }
}
