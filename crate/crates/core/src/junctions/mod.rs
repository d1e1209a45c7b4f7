//! Normal-metal/superconductor interface transport in the plane-wave
//! Bogoliubov–de Gennes picture: coherence factors, Andreev scattering,
//! the long SNS junction supercurrent and NIS tunnelling.
//!
//! Energies are in joules and measured from the Fermi level.

mod coherence;
mod nis;
mod scattering;
mod sns;

use thiserror::Error;

use crate::constants::{PhysicalConstants, ELECTRON_MASS};
use crate::materials::Material;
use crate::quad::QuadError;

pub use coherence::{coherence_factors, dirty_spectrum, DirtySpectrum};
pub use nis::{iv_sweep, nis_current, nis_current_low_t, write_iv_csv, IvPoint, Regime};
pub use scattering::{
    andreev_outcome, btk_probabilities, match_interface, Amplitudes, BtkProbabilities, Channel,
    ChannelKind, Incidence, ScatterOutcome, Side, Species,
};
pub use sns::{normal_coherence_length, sns_current, sns_prefactor, SnsPrefactor};

#[derive(Debug, Error)]
pub enum JunctionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical integration failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
}

/// Junction parameters shared by the SNS and NIS models.
#[derive(Debug, Clone)]
pub struct JunctionConfig {
    pub material: Material,
    /// Superconducting gap (J).
    pub delta: f64,
    /// Fermi energy (J).
    pub fermi_energy: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Normal-region length of an SNS junction (m).
    pub length: f64,
    /// Junction cross-section (m^2).
    pub area: f64,
    /// Dimensionless barrier strength `m I / (hbar^2 |k_x|)`.
    pub barrier: f64,
    /// NIS prefactor `A e N(0) v_F S`; I = prefactor x energy integral (J).
    pub nis_prefactor: f64,
    pub sns_form: SnsPrefactor,
}

impl JunctionConfig {
    /// Defaults from a material: its gap, a free-electron Fermi energy from
    /// `k_F`, 1 K, a 1 µm long 1 µm² junction, no barrier and unit prefactor.
    pub fn for_material(material: Material, constants: &PhysicalConstants) -> Self {
        let hbar = constants.hbar();
        let kf = material.fermi_wavenumber;
        Self {
            delta: material.delta,
            fermi_energy: hbar * hbar * kf * kf / (2.0 * ELECTRON_MASS),
            material,
            temperature: 1.0,
            length: 1e-6,
            area: 1e-12,
            barrier: 0.0,
            nis_prefactor: 1.0,
            sns_form: SnsPrefactor::Ballistic,
        }
    }

    /// Set the gap from a value in electron-volts.
    pub fn with_delta_ev(mut self, delta_ev: f64, constants: &PhysicalConstants) -> Self {
        self.delta = delta_ev * constants.e();
        self
    }

    pub fn validate(&self) -> Result<(), JunctionError> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(JunctionError::Domain(format!(
                "gap must be non-negative, got {}",
                self.delta
            )));
        }
        if !(self.barrier >= 0.0 && self.barrier.is_finite()) {
            return Err(JunctionError::Domain(format!(
                "barrier Z must be non-negative, got {}",
                self.barrier
            )));
        }
        if self.temperature.is_nan() {
            return Err(JunctionError::Domain("temperature is NaN".into()));
        }
        Ok(())
    }
}

/// Energy of motion normal to the interface, `E_F - hbar^2 (k_y^2 + k_z^2) / 2m`.
pub fn longitudinal_energy(
    fermi_energy: f64,
    k_y: f64,
    k_z: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let hbar = constants.hbar();
    fermi_energy - hbar * hbar * (k_y * k_y + k_z * k_z) / (2.0 * ELECTRON_MASS)
}

/// Barrier strength `Z = m I / (hbar^2 |k_x|)` of a delta barrier of
/// strength `I` (J m) for a carrier with longitudinal energy `e_x`.
pub fn barrier_strength(
    height: f64,
    e_x: f64,
    constants: &PhysicalConstants,
) -> Result<f64, JunctionError> {
    if !(e_x > 0.0) {
        return Err(JunctionError::Domain(format!(
            "longitudinal energy must be positive, got {e_x}"
        )));
    }
    let hbar = constants.hbar();
    let k_x = (2.0 * ELECTRON_MASS * e_x).sqrt() / hbar;
    Ok(ELECTRON_MASS * height / (hbar * hbar * k_x))
}
