#![allow(dead_code)]

use std::f64::consts::PI;

use tubewave::prelude::*;

pub const OMEGA: f64 = 2.0 * PI;
pub const P0: f64 = 1000.0;

pub fn tube() -> TubeSystem {
    TubeSystem::new(0.01, 0.001, 1050.0, 1100.0, 4.0e5).unwrap()
}

pub fn problem(spectrum: RheologySpectrum, g1: Profile, g2: Profile) -> Problem {
    Problem {
        tube: tube(),
        spectrum,
        profile: InhomogeneityProfile::new(g1, g2),
        forcing: BoundaryForcing::new(P0, OMEGA).unwrap(),
    }
}

pub fn bump(amplitude: f64, rate: f64) -> Profile {
    Profile::exponential_bump(amplitude, rate).unwrap()
}

pub fn rational(amplitude: f64, rate: f64) -> Profile {
    Profile::rational_decay(amplitude, rate).unwrap()
}

pub fn flat() -> Profile {
    Profile::homogeneous()
}

/// A short list of inhomogeneous cases covering each model class and
/// both decay families, with numerics suited to each.
pub fn cases() -> Vec<(&'static str, Problem, Numerics)> {
    let short = Numerics::default();
    let long = Numerics {
        x_max: 200.0,
        panels: 48,
        grading: 8.0,
        ..Numerics::default()
    };
    vec![
        (
            "bump-g1",
            problem(
                RheologySpectrum::newtonian(0.004).unwrap(),
                bump(0.5, 1.0),
                flat(),
            ),
            short,
        ),
        (
            "bump-g2",
            problem(
                RheologySpectrum::newtonian(0.004).unwrap(),
                flat(),
                bump(1.0, 1.0),
            ),
            short,
        ),
        (
            "rational",
            problem(
                RheologySpectrum::newtonian(0.004).unwrap(),
                rational(0.3, 0.5),
                rational(0.5, 0.5),
            ),
            long,
        ),
        (
            "maxwell",
            problem(
                RheologySpectrum::maxwell(5.0, 0.2).unwrap(),
                bump(-0.3, 0.8),
                flat(),
            ),
            short,
        ),
        (
            "oldroyd",
            problem(
                RheologySpectrum::oldroyd(5.0, 0.2, 0.05).unwrap(),
                bump(0.4, 1.5),
                bump(0.5, 1.0),
            ),
            short,
        ),
    ]
}
