use std::io::Write;

use super::{btk_probabilities, JunctionConfig, JunctionError};
use crate::constants::PhysicalConstants;
use crate::export::{csv_writer, num};
use crate::quad::{self, QuadTolerance};

/// Thermal tails beyond this many `k_B T` are dropped.
const THERMAL_WINDOW: f64 = 40.0;

/// `f0(x - ev) - f0(x)` with `f0(x) = 1 / (e^{x / k_B T} + 1)`, written with
/// `tanh` so that it cannot overflow.
fn occupation_difference(x: f64, ev: f64, kt: f64) -> f64 {
    0.5 * ((x / (2.0 * kt)).tanh() - ((x - ev) / (2.0 * kt)).tanh())
}

/// Tunnelling current through a normal-insulator-superconductor junction at
/// bias `voltage`, integrating the charge transmission `1 + |a|^2 - |b|^2`
/// against the occupation difference of the two electrodes.
pub fn nis_current(
    voltage: f64,
    cfg: &JunctionConfig,
    constants: &PhysicalConstants,
) -> Result<f64, JunctionError> {
    cfg.validate()?;
    if !(cfg.temperature > 0.0) {
        return Err(JunctionError::Domain(format!(
            "temperature must be positive, got {} K",
            cfg.temperature
        )));
    }
    let kt = constants.kb() * cfg.temperature;
    let ev = constants.e() * voltage;
    if ev == 0.0 {
        return Ok(0.0);
    }
    let delta = cfg.delta;
    let z = cfg.barrier;
    let integrand =
        |x: f64| btk_probabilities(x, delta, z).transmission() * occupation_difference(x, ev, kt);
    let lo = ev.min(0.0) - THERMAL_WINDOW * kt;
    let hi = ev.max(0.0) + THERMAL_WINDOW * kt;
    let breaks = [-delta, 0.0, delta, ev - delta, ev, ev + delta];
    let tol = QuadTolerance {
        absolute: 0.0,
        relative: 1e-9,
        max_depth: 30,
    };
    let r = quad::integrate(integrand, lo, hi, &breaks, tol)?;
    Ok(cfg.nis_prefactor * r.value)
}

/// Zero-temperature, large-barrier form:
/// `prefactor / (1 + Z^2) sqrt((eV)^2 - Delta^2)` above the gap, zero below.
pub fn nis_current_low_t(voltage: f64, cfg: &JunctionConfig, constants: &PhysicalConstants) -> f64 {
    let ev = constants.e() * voltage;
    if ev <= cfg.delta {
        return 0.0;
    }
    cfg.nis_prefactor / (1.0 + cfg.barrier * cfg.barrier) * (ev * ev - cfg.delta * cfg.delta).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SubGap,
    AboveGap,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::SubGap => "sub-gap",
            Regime::AboveGap => "above-gap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvPoint {
    pub voltage: f64,
    pub current: f64,
    pub regime: Regime,
}

/// NIS current at each bias in `voltages`.
pub fn iv_sweep(
    cfg: &JunctionConfig,
    voltages: &[f64],
    constants: &PhysicalConstants,
) -> Result<Vec<IvPoint>, JunctionError> {
    voltages
        .iter()
        .map(|&v| {
            let regime = if (constants.e() * v).abs() < cfg.delta {
                Regime::SubGap
            } else {
                Regime::AboveGap
            };
            Ok(IvPoint {
                voltage: v,
                current: nis_current(v, cfg, constants)?,
                regime,
            })
        })
        .collect()
}

/// Columns `voltage, current, regime`.
pub fn write_iv_csv<W: Write>(points: &[IvPoint], out: W) -> Result<(), JunctionError> {
    let mut w = csv_writer(out);
    w.write_record(["voltage", "current", "regime"])?;
    for p in points {
        w.write_record([num(p.voltage), num(p.current), p.regime.label().to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
