//! Viscoelastic constitutive model and its frequency-domain moduli.
//!
//! The liquid obeys a generalized Maxwell/Oldroyd law with a finite
//! relaxation spectrum `λ_j` (acting on the stress) and retardation
//! spectrum `θ_j` (acting on the rate of strain). Under a harmonic ansatz
//! `e^{iωt}` the two operator products collapse to the complex numbers
//!
//! ```text
//! a = Π (1 + iωλ_j),    b = Π (1 + iωθ_j)
//! ```
//!
//! Evaluation cost is linear in the number of time constants; no upper
//! limit is imposed.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The two admissible shapes of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    /// Instantaneous elastic response, `r = s + 1` (e.g. Maxwell: one `λ`, no `θ`).
    InstantaneousElastic,
    /// Viscous response on sudden loading, `r = s` (Newtonian, Oldroyd-B-like).
    ViscousAtLoading,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RheologySpectrum {
    lambdas: Vec<f64>,
    thetas: Vec<f64>,
    eta: f64,
    class: ModelClass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexModuli {
    pub a: Complex64,
    pub b: Complex64,
}

impl RheologySpectrum {
    /// Builds and validates a spectrum.
    pub fn new(lambdas: Vec<f64>, thetas: Vec<f64>, eta: f64, class: ModelClass) -> Result<Self> {
        validate_spectrum(RheologySpectrum {
            lambdas,
            thetas,
            eta,
            class,
        })
    }

    /// Newtonian liquid: no time constants.
    pub fn newtonian(eta: f64) -> Result<Self> {
        Self::new(vec![], vec![], eta, ModelClass::ViscousAtLoading)
    }

    pub fn maxwell(eta: f64, relaxation: f64) -> Result<Self> {
        Self::new(
            vec![relaxation],
            vec![],
            eta,
            ModelClass::InstantaneousElastic,
        )
    }

    pub fn oldroyd(eta: f64, relaxation: f64, retardation: f64) -> Result<Self> {
        Self::new(
            vec![relaxation],
            vec![retardation],
            eta,
            ModelClass::ViscousAtLoading,
        )
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn viscosity(&self) -> f64 {
        self.eta
    }

    pub fn class(&self) -> ModelClass {
        self.class
    }

    /// `(a, b)` at angular frequency `omega`.
    pub fn moduli(&self, omega: f64) -> Result<ComplexModuli> {
        moduli(self, omega)
    }
}

/// Checks positivity and the class/length rule.
pub fn validate_spectrum(spec: RheologySpectrum) -> Result<RheologySpectrum> {
    if !(spec.eta > 0.0 && spec.eta.is_finite()) {
        return Err(Error::NonpositiveViscosity(spec.eta));
    }
    if let Some(&t) = spec
        .lambdas
        .iter()
        .chain(spec.thetas.iter())
        .find(|t| !(**t >= 0.0 && t.is_finite()))
    {
        return Err(Error::NegativeTime(t));
    }
    let (r, s) = (spec.lambdas.len(), spec.thetas.len());
    let consistent = match spec.class {
        ModelClass::InstantaneousElastic => r == s + 1,
        ModelClass::ViscousAtLoading => r == s,
    };
    if !consistent {
        return Err(Error::ClassMismatch(format!(
            "{:?} requires {}, got r = {r}, s = {s}",
            spec.class,
            match spec.class {
                ModelClass::InstantaneousElastic => "r = s + 1",
                ModelClass::ViscousAtLoading => "r = s",
            }
        )));
    }
    Ok(spec)
}

pub fn moduli(spec: &RheologySpectrum, omega: f64) -> Result<ComplexModuli> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidFrequency(omega));
    }
    Ok(ComplexModuli {
        a: harmonic_product(&spec.lambdas, omega),
        b: harmonic_product(&spec.thetas, omega),
    })
}

/// `Π (1 + iωτ)` accumulated in ascending `τ` so the result does not
/// depend on the order the times were listed in.
fn harmonic_product(times: &[f64], omega: f64) -> Complex64 {
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().fold(Complex64::new(1.0, 0.0), |acc, &tau| {
        acc * Complex64::new(1.0, omega * tau)
    })
}
