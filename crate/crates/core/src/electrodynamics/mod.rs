//! Frequency-domain field and current solutions for conducting and
//! superconducting slabs, solenoid and loop relations, and a Crank–Nicolson
//! time-domain solver used to cross-check the closed forms.
//!
//! The slab geometry is infinite in `y` and `z` with half-thickness `d`
//! along `x`; the applied field is `Re{B0 e^{jwt}}` along `z` on both faces.
//! Profiles are complex phasors.

mod coils;
pub mod diffusion;
mod slab;

use std::io::Write;

use num_complex::Complex64;
use thiserror::Error;

use crate::export::{csv_writer, num};
use crate::materials::{Material, MaterialError};

pub use coils::{
    circular_loop_center_field, circular_loop_current, solenoid_field, square_loop_center_field,
    square_loop_current,
};
pub use slab::{
    normal_slab_profile, super_slab_profile, two_fluid_slab_profile, two_fluid_wavenumber,
};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("position x = {x} m lies outside the slab [-{d}, {d}]")]
    OutsideSlab { x: f64, d: f64 },
    #[error("invalid slab configuration: {0}")]
    Config(String),
    #[error("|B0| = {b0} T reaches the critical field {limit} T at T = {temperature} K; transition the material instead")]
    PhaseViolation {
        b0: f64,
        limit: f64,
        temperature: f64,
    },
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
}

/// Slab geometry, drive and material.
#[derive(Debug, Clone)]
pub struct SlabConfig {
    /// Half-thickness `d` (m); the slab occupies `[-d, d]`.
    pub half_thickness: f64,
    pub material: Material,
    /// Applied field amplitude `B0` (T).
    pub b0: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Operating temperature (K), used for the superconducting phase check.
    pub temperature: f64,
}

impl SlabConfig {
    fn validate(&self) -> Result<(), FieldError> {
        if !(self.half_thickness.is_finite() && self.half_thickness > 0.0) {
            return Err(FieldError::Config("half_thickness must be positive".into()));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(FieldError::Config("omega must be non-negative".into()));
        }
        if !self.b0.is_finite() {
            return Err(FieldError::Config("b0 must be finite".into()));
        }
        Ok(())
    }

    /// Classical skin depth `sqrt(2 / (w mu0 sigma))` of the normal state.
    pub fn skin_depth(&self) -> f64 {
        skin_depth(self.omega, self.material.sigma_n)
    }
}

/// Classical skin depth for a non-magnetic conductor.
pub fn skin_depth(omega: f64, sigma: f64) -> f64 {
    (2.0 / (omega * crate::constants::VACUUM_PERMEABILITY * sigma)).sqrt()
}

/// Field and current-density phasors sampled across the slab.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub x: Vec<f64>,
    pub b: Vec<Complex64>,
    pub j: Vec<Complex64>,
}

impl FieldProfile {
    /// Columns `x, re_b, im_b, re_j, im_j`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FieldError> {
        let mut w = csv_writer(out);
        w.write_record(["x", "re_b", "im_b", "re_j", "im_j"])?;
        for ((x, b), j) in self.x.iter().zip(&self.b).zip(&self.j) {
            w.write_record([num(*x), num(b.re), num(b.im), num(j.re), num(j.im)])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// `n` evenly spaced positions spanning `[-d, d]` inclusive.
pub fn slab_grid(half_thickness: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    half_thickness
                } else {
                    -half_thickness + 2.0 * half_thickness * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
