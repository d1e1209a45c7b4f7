//! Discrete-time delta-sigma modulator built from a chain of integrators,
//! the flux-quantized comparator and its feedback DAC.
//!
//! The loop is cascade-of-integrators with feed-forward summation: the input
//! and every integrator output are weighted into the comparator, and the DAC
//! output is subtracted at the first integrator. All integrators delay by one
//! sample, so with `a = [2, 1]`, `c = [1, 1]` the noise transfer function is
//! `(1 - z^-1)^2` and the signal transfer function is unity.
//!
//! Loop signals are fields (T) at the comparator. `u = ±1` maps to
//! `±full_scale`.

mod spectrum;

use std::io::Write;

use thiserror::Error;

use crate::comparator::{dac_feedback, quantize, ComparatorConfig, ComparatorError};
use crate::constants::PhysicalConstants;
use crate::electrodynamics::solenoid_field;
use crate::export::{csv_writer, num};
use crate::fluxtrap::{
    run_amplification_sequence, settle_time_device, CylinderGeometry, FluxTrapError, Schedule,
};
use crate::noise::{synth_flicker_series, NoiseError, NoiseModel, SynthesisMethod};

pub use spectrum::{
    analyze_spectrum, coherent_sine, periodogram, sndr, theoretical_sqnr, write_spectrum_csv,
    SpectralMetrics,
};

#[derive(Debug, Error)]
pub enum DsmError {
    #[error("invalid modulator configuration: {0}")]
    Config(String),
    #[error(
        "modulator unstable at sample {sample}: integrator {integrator} reached {value:e} T \
         (bound {bound:e} T)"
    )]
    Instability {
        sample: usize,
        integrator: usize,
        value: f64,
        bound: f64,
    },
    #[error(transparent)]
    Comparator(#[from] ComparatorError),
    #[error(transparent)]
    FluxTrap(#[from] FluxTrapError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
    #[error("report: {0}")]
    Io(#[from] std::io::Error),
}

/// Flux-trap stage standing in for the first integrator: each sample the
/// loop error is applied as the input field, trapped, amplified by the
/// schedule and accumulated by the SQUID.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxIntegrator {
    pub geometry: CylinderGeometry,
    pub schedule: Schedule,
    /// Field at the cylinder for a loop error of one full scale (T).
    pub input_full_scale: f64,
}

impl FluxIntegrator {
    /// Radius 5 mm cylinder, four segments, the two-fold doubling schedule
    /// and a 1 mT input solenoid.
    pub fn reference() -> Self {
        Self {
            geometry: CylinderGeometry::new(5e-3, 4, 1e4, 0.1)
                .expect("reference geometry is valid"),
            schedule: Schedule::four_segment_doubler(),
            input_full_scale: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum IntegratorBackend {
    /// `x[k] = x[k-1] + c (input - feedback)`.
    #[default]
    Ideal,
    FluxDevice(FluxIntegrator),
}

impl IntegratorBackend {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Ideal => "ideal",
            Self::FluxDevice(_) => "flux-device",
        }
    }
}

/// Settling parameters of one conversion cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleTiming {
    pub tau_cooper: f64,
    pub tau_ecoil: f64,
    pub n_segments: u32,
}

impl Default for CycleTiming {
    fn default() -> Self {
        Self {
            tau_cooper: 0.1e-9,
            tau_ecoil: 0.3e-9,
            n_segments: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulatorConfig {
    pub osr: u32,
    /// Feed-forward weight of each integrator into the comparator.
    pub feedforward: Vec<f64>,
    /// Gain of each integrator.
    pub scaling: Vec<f64>,
    pub comparator: ComparatorConfig,
    pub backend: IntegratorBackend,
    /// Sample rate (Hz).
    pub fs: f64,
    /// Comparator field for `u = 1` (T).
    pub full_scale: f64,
    /// Largest allowed integrator magnitude, in units of `full_scale`.
    pub stability_bound: f64,
    /// Optional flux noise added at the comparator (T²/Hz).
    pub comparator_noise: Option<NoiseModel>,
    pub timing: CycleTiming,
}

impl ModulatorConfig {
    /// Second-order loop with `a = [2, 1]`, `c = [1, 1]`, 20 MHz clock and a
    /// full scale two levels inside the comparator range.
    pub fn second_order(comparator: ComparatorConfig, osr: u32) -> Self {
        Self {
            osr,
            feedforward: vec![2.0, 1.0],
            scaling: vec![1.0, 1.0],
            comparator,
            backend: IntegratorBackend::Ideal,
            fs: 20e6,
            full_scale: default_full_scale(&comparator),
            stability_bound: 1e3,
            comparator_noise: None,
            timing: CycleTiming::default(),
        }
    }

    pub fn order(&self) -> usize {
        self.scaling.len()
    }

    /// Signal bandwidth `fs / (2 osr)`.
    pub fn bandwidth(&self) -> f64 {
        self.fs / (2.0 * f64::from(self.osr))
    }

    /// Checks the configuration and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>, DsmError> {
        let bad = |m: String| Err(DsmError::Config(m));
        if self.order() == 0 {
            return bad("loop order must be at least 1".into());
        }
        if self.feedforward.len() != self.order() {
            return bad(format!(
                "{} feed-forward coefficients given for a loop of order {}",
                self.feedforward.len(),
                self.order()
            ));
        }
        if self.osr < 8 {
            return bad(format!("osr must be at least 8, got {}", self.osr));
        }
        if self
            .feedforward
            .iter()
            .chain(&self.scaling)
            .any(|v| !v.is_finite())
        {
            return bad("loop coefficients must be finite".into());
        }
        if !(self.fs.is_finite() && self.fs > 0.0) {
            return bad(format!("sample rate must be positive, got {}", self.fs));
        }
        let range = self.comparator.max_code() as f64 * self.comparator.b_lsb;
        if !(self.full_scale > 0.0 && self.full_scale <= range) {
            return bad(format!(
                "full scale {:e} T must be positive and within the comparator range {:e} T",
                self.full_scale, range
            ));
        }
        if !(self.stability_bound > 0.0) {
            return bad(format!(
                "stability bound must be positive, got {}",
                self.stability_bound
            ));
        }
        if let Some(noise) = &self.comparator_noise {
            noise.validate()?;
        }
        if let IntegratorBackend::FluxDevice(dev) = &self.backend {
            if !(dev.input_full_scale > 0.0) {
                return bad(format!(
                    "device input full scale must be positive, got {}",
                    dev.input_full_scale
                ));
            }
        }
        let mut warnings = Vec::new();
        let n_segments = match &self.backend {
            IntegratorBackend::FluxDevice(dev) => dev.geometry.n_segments() as u32,
            IntegratorBackend::Ideal => self.timing.n_segments,
        };
        let settle = settle_time_device(self.timing.tau_cooper, n_segments, self.timing.tau_ecoil);
        if self.fs * settle > 0.5 {
            warnings.push(format!(
                "device settling {settle:e} s exceeds half of the {:e} s clock period",
                1.0 / self.fs
            ));
        }
        Ok(warnings)
    }
}

/// `(max_code - 2) B_LSB`, leaving room for the shaped quantization error.
pub fn default_full_scale(comparator: &ComparatorConfig) -> f64 {
    (comparator.max_code() - 2) as f64 * comparator.b_lsb
}

/// Full scale set by an input solenoid driven at its maximum current.
pub fn solenoid_full_scale(
    turns_per_meter: f64,
    max_current: f64,
    constants: &PhysicalConstants,
) -> f64 {
    solenoid_field(turns_per_meter, max_current, constants.mu0())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    pub u: Vec<f64>,
    pub v: Vec<i64>,
    /// `states[i][k]`: integrator `i` after sample `k` (T).
    pub states: Vec<Vec<f64>>,
    /// Samples at which the comparator saturated.
    pub saturated: usize,
    pub warnings: Vec<String>,
    /// `B_LSB / full_scale`, converting codes to input units.
    pub code_scale: f64,
}

impl TraceSet {
    /// Output codes in input units.
    pub fn scaled_output(&self) -> Vec<f64> {
        self.v.iter().map(|&c| c as f64 * self.code_scale).collect()
    }

    /// `mean(scaled v) - mean(u)`.
    pub fn mean_tracking_error(&self) -> f64 {
        let n = self.v.len().max(1) as f64;
        let out: f64 = self.scaled_output().iter().sum();
        let inp: f64 = self.u.iter().sum();
        (out - inp) / n
    }

    /// Columns `k, u, v, x1 .. xN`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), DsmError> {
        let mut w = csv_writer(out);
        let mut header = vec!["k".to_string(), "u".into(), "v".into()];
        header.extend((1..=self.states.len()).map(|i| format!("x{i}")));
        w.write_record(&header)?;
        for k in 0..self.u.len() {
            let mut row = vec![k.to_string(), num(self.u[k]), self.v[k].to_string()];
            row.extend(self.states.iter().map(|s| num(s[k])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

struct FluxStage<'a> {
    device: &'a FluxIntegrator,
    /// Loop field per device field.
    to_loop: f64,
    constants: PhysicalConstants,
}

impl FluxStage<'_> {
    /// Loop-field increment produced by a loop error `error` (T).
    fn increment(&self, error: f64) -> Result<f64, FluxTrapError> {
        let b_in = error / self.to_loop;
        let run = run_amplification_sequence(
            &self.device.geometry,
            b_in,
            &self.device.schedule,
            &self.constants,
        )?;
        if run.gain == 0 {
            return Ok(0.0);
        }
        let flux = run.amplified_quanta() as f64 * self.constants.phi0();
        Ok(flux / (run.gain as f64 * self.device.geometry.area()) * self.to_loop)
    }
}

/// Simulate the loop over input `u` (each `|u[k]| <= 1`).
pub fn run_modulator(cfg: &ModulatorConfig, u: &[f64]) -> Result<TraceSet, DsmError> {
    let warnings = cfg.validate()?;
    if let Some(k) = u.iter().position(|x| !(x.abs() <= 1.0)) {
        return Err(DsmError::Config(format!(
            "input sample {k} = {} lies outside [-1, 1]",
            u[k]
        )));
    }
    let n = u.len();
    let order = cfg.order();
    let noise = match &cfg.comparator_noise {
        Some(model) => synth_flicker_series(model, n, cfg.fs, SynthesisMethod::Telegraph)?,
        None => Vec::new(),
    };
    let flux = match &cfg.backend {
        IntegratorBackend::FluxDevice(device) => Some(FluxStage {
            device,
            to_loop: cfg.full_scale / device.input_full_scale,
            constants: PhysicalConstants::codata(),
        }),
        IntegratorBackend::Ideal => None,
    };
    let bound = cfg.stability_bound * cfg.full_scale;
    let mut x = vec![0.0; order];
    let mut states = vec![Vec::with_capacity(n); order];
    let mut v = Vec::with_capacity(n);
    let mut saturated = 0;
    for k in 0..n {
        let input = u[k] * cfg.full_scale;
        let mut y = input
            + cfg
                .feedforward
                .iter()
                .zip(&x)
                .map(|(a, s)| a * s)
                .sum::<f64>();
        if let Some(e) = noise.get(k) {
            y += e;
        }
        let decision = quantize(&cfg.comparator, y);
        saturated += usize::from(decision.saturated);
        let feedback = dac_feedback(&cfg.comparator, decision.code)?;
        v.push(decision.code);

        for i in (1..order).rev() {
            x[i] += cfg.scaling[i] * x[i - 1];
        }
        let error = input - feedback;
        x[0] += cfg.scaling[0]
            * match &flux {
                Some(stage) => stage.increment(error).map_err(|e| at_sample(e, k))?,
                None => error,
            };
        for (i, (s, trace)) in x.iter().zip(states.iter_mut()).enumerate() {
            if !(s.abs() <= bound) {
                return Err(DsmError::Instability {
                    sample: k,
                    integrator: i + 1,
                    value: *s,
                    bound,
                });
            }
            trace.push(*s);
        }
    }
    Ok(TraceSet {
        u: u.to_vec(),
        v,
        states,
        saturated,
        warnings,
        code_scale: cfg.comparator.b_lsb / cfg.full_scale,
    })
}

fn at_sample(e: FluxTrapError, sample: usize) -> DsmError {
    DsmError::Config(format!("flux integrator failed at sample {sample}: {e}"))
}

/// Plain-text `key = value` summary of a run, grouped in sections.
pub fn write_report<W: Write>(
    cfg: &ModulatorConfig,
    trace: &TraceSet,
    metrics: Option<&SpectralMetrics>,
    mut out: W,
) -> Result<(), DsmError> {
    let list = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
    writeln!(out, "[config]")?;
    writeln!(out, "order = {}", cfg.order())?;
    writeln!(out, "osr = {}", cfg.osr)?;
    writeln!(out, "feedforward = [{}]", list(&cfg.feedforward))?;
    writeln!(out, "scaling = [{}]", list(&cfg.scaling))?;
    writeln!(out, "backend = \"{}\"", cfg.backend.label())?;
    writeln!(out, "fs = {}", num(cfg.fs))?;
    writeln!(out, "bandwidth = {}", num(cfg.bandwidth()))?;
    writeln!(out, "full_scale = {}", num(cfg.full_scale))?;
    writeln!(out, "levels = {}", cfg.comparator.n_levels)?;
    writeln!(out, "b_lsb = {}", num(cfg.comparator.b_lsb))?;
    writeln!(out, "samples = {}", trace.u.len())?;
    writeln!(out)?;
    writeln!(out, "[results]")?;
    if let Some(m) = metrics {
        writeln!(out, "signal_frequency = {}", num(m.signal_frequency))?;
        writeln!(out, "sndr_db = {:.3}", m.sndr_db)?;
    }
    writeln!(
        out,
        "mean_tracking_error = {}",
        num(trace.mean_tracking_error())
    )?;
    writeln!(out, "saturated_samples = {}", trace.saturated)?;
    writeln!(out, "stable = true")?;
    for w in &trace.warnings {
        writeln!(out, "warning = \"{w}\"")?;
    }
    Ok(())
}
