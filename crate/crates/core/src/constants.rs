//! Physical constants shared by every model in the crate.
//!
//! Values default to the exact SI (2019) definitions for `h`, `e` and `k_B`
//! and the CODATA 2018 recommendation for `mu0`. The flux quantum is always
//! derived from the stored `h` and `e`, never stored independently.

use thiserror::Error;

/// Planck constant (J·s), exact SI value.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge (C), exact SI value.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permeability (H/m), CODATA 2018.
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
/// Boltzmann constant (J/K), exact SI value.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Electron rest mass (kg), CODATA 2018.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Invalid constant set.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("physical constant `{name}` must be finite and positive, got {value}")]
pub struct ConstantsError {
    pub name: &'static str,
    pub value: f64,
}

/// Immutable set of fundamental constants.
///
/// The Cooper-pair charge `2e` sets the flux quantum `phi0 = h / (2e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    h: f64,
    e: f64,
    mu0: f64,
    kb: f64,
    phi0: f64,
}

impl PhysicalConstants {
    pub fn codata() -> Self {
        Self::new(PLANCK, ELEMENTARY_CHARGE, VACUUM_PERMEABILITY, BOLTZMANN)
            .expect("built-in constants are positive")
    }

    /// Build a custom constant set. Used for sensitivity studies.
    pub fn new(h: f64, e: f64, mu0: f64, kb: f64) -> Result<Self, ConstantsError> {
        for (name, value) in [("h", h), ("e", e), ("mu0", mu0), ("kB", kb)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConstantsError { name, value });
            }
        }
        Ok(Self {
            h,
            e,
            mu0,
            kb,
            phi0: h / (2.0 * e),
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn hbar(&self) -> f64 {
        self.h / (2.0 * std::f64::consts::PI)
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    /// Superconducting flux quantum `h/(2e)` in webers.
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// Cooper-pair charge `2e`.
    pub fn pair_charge(&self) -> f64 {
        2.0 * self.e
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Flux quantum for the given constant set.
pub fn flux_quantum(constants: &PhysicalConstants) -> f64 {
    constants.phi0()
}
