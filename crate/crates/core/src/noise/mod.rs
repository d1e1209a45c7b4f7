//! Trap-and-release noise: the Lorentzian spectrum of a single relaxation
//! process, the 1/f spectrum of a log-uniform population of them, seeded
//! time-series synthesis and Welch spectral estimation.
//!
//! PSDs are one-sided densities per hertz evaluated at angular frequency, so
//! `integral_0^inf S(2 pi f) df` is the process variance.

mod synth;
mod welch;

use std::f64::consts::PI;
use std::io::Write;

use thiserror::Error;

use crate::export::{csv_writer, num};

pub use synth::{
    synth_flicker_series, synth_white_series, telegraph_bank, SynthesisMethod, TelegraphProcess,
};
pub use welch::{loglog_slope, welch_psd, Psd};

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("invalid noise model: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    /// Autocorrelation at zero lag of one trap process (signal units²).
    pub r0: f64,
    /// Shortest relaxation time (s); also the single-trap time constant.
    pub tau1: f64,
    /// Longest relaxation time (s).
    pub tau2: f64,
    /// Flicker strength `k'` of `S = (k'/w) [atan(w tau2) - atan(w tau1)]`.
    pub kprime: f64,
    pub seed: u64,
    /// Scattering directions that perturb the observable, 1 to 3.
    pub dof_coupled: u8,
    /// Optional white floor added to synthesized series (units²/Hz, one-sided).
    pub white_psd: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<(), NoiseError> {
        let bad = |m: String| Err(NoiseError::Config(m));
        if !(self.tau1 > 0.0 && self.tau1 < self.tau2 && self.tau2.is_finite()) {
            return bad(format!(
                "need 0 < tau1 < tau2, got tau1 = {}, tau2 = {}",
                self.tau1, self.tau2
            ));
        }
        if !(self.r0 >= 0.0) {
            return bad(format!("r0 must be non-negative, got {}", self.r0));
        }
        if !(self.kprime >= 0.0) {
            return bad(format!("kprime must be non-negative, got {}", self.kprime));
        }
        if !(1..=3).contains(&self.dof_coupled) {
            return bad(format!(
                "dof_coupled must be 1, 2 or 3, got {}",
                self.dof_coupled
            ));
        }
        if !(self.white_psd >= 0.0) {
            return bad(format!(
                "white_psd must be non-negative, got {}",
                self.white_psd
            ));
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            r0: 1.0,
            tau1: 1e-3,
            tau2: 1e2,
            kprime: 1.0,
            seed: 0,
            dof_coupled: 1,
            white_psd: 0.0,
        }
    }
}

/// Single trap PSD `4 R0 tau1 / (1 + (tau1 w)^2)`.
pub fn lorentzian_psd(model: &NoiseModel, omega: f64) -> f64 {
    let tau = model.tau1;
    4.0 * model.r0 * tau / (1.0 + (tau * omega).powi(2))
}

/// Flicker PSD `(k'/w) [atan(w tau2) - atan(w tau1)]`.
pub fn flicker_psd(model: &NoiseModel, omega: f64) -> Result<f64, NoiseError> {
    if !(omega > 0.0) {
        return Err(NoiseError::Domain(format!(
            "flicker PSD needs omega > 0, got {omega}"
        )));
    }
    Ok(model.kprime / omega * ((omega * model.tau2).atan() - (omega * model.tau1).atan()))
}

/// Fraction of isotropic scattering variance that reaches the observable.
pub fn dof_variance_factor(model: &NoiseModel) -> f64 {
    f64::from(model.dof_coupled) / 3.0
}

/// Columns `t, x` with `t = k / fs`.
pub fn write_series_csv<W: Write>(series: &[f64], fs: f64, out: W) -> Result<(), NoiseError> {
    let mut w = csv_writer(out);
    w.write_record(["t", "x"])?;
    for (k, x) in series.iter().enumerate() {
        w.write_record([num(k as f64 / fs), num(*x)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `f, S` in Hz and units²/Hz.
pub fn write_psd_csv<W: Write>(psd: &Psd, out: W) -> Result<(), NoiseError> {
    let mut w = csv_writer(out);
    w.write_record(["f", "S"])?;
    for (f, s) in psd.frequency.iter().zip(&psd.density) {
        w.write_record([num(*f), num(*s)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn angular(f: f64) -> f64 {
    2.0 * PI * f
}
