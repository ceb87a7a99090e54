//! Harmonic waves of a viscoelastic liquid in a semi-infinite elastic tube
//! whose wall stiffness and density vary along its length.
//!
//! The harmonic flow equations are reduced to a half-line scattering
//! problem `y″ + δ²y = δ²q(x)y`, solved through its Volterra integral
//! equation by a certified Neumann series, and turned back into flow,
//! wall displacement, stress and pressure amplitudes.
//!
//! ```
//! use tubewave::prelude::*;
//!
//! let problem = Problem {
//!     tube: TubeSystem::new(0.01, 0.001, 1050.0, 1100.0, 4.0e5)?,
//!     spectrum: RheologySpectrum::maxwell(5.0, 0.2)?,
//!     profile: InhomogeneityProfile::new(Profile::exponential_bump(0.5, 1.0)?, Profile::homogeneous()),
//!     forcing: BoundaryForcing::new(1000.0, 2.0 * std::f64::consts::PI)?,
//! };
//! let solution = problem.solve(&Numerics::default())?;
//! assert!(solution.fields.residuals.max() < 1e-6);
//! assert!(solution.inlet_error(1000.0) < 1e-10);
//! # Ok::<(), tubewave::Error>(())
//! ```
//!
//! A longer walk-through lives in the `book/` directory of the repository.

// NaN-rejecting range checks are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod fields;
pub mod jost;
pub mod oracle;
pub mod problem;
pub mod profile;
pub mod rheology;
pub mod spectral;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dispersion::{
        IntegrabilityCertificate, Potential, ScatteringContext, TubeSystem,
    };
    pub use crate::fields::{BoundaryForcing, FieldSolution, ResidualReport};
    pub use crate::jost::{JostOptions, JostSolution};
    pub use crate::oracle::{OracleMethod, OracleSolution};
    pub use crate::problem::{Numerics, Problem, Solution};
    pub use crate::profile::{InhomogeneityProfile, Profile, ProfileSpec};
    pub use crate::rheology::{ModelClass, RheologySpectrum};
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rheology.md")]
    mod rheology {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/normal-form.md")]
    mod normal_form {}
    #[doc = include_str!("../../../book/src/jost-series.md")]
    mod jost_series {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
