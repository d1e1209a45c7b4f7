//! Flux-quantized comparator and the matching feedback DAC.
//!
//! A square loop of side `L` carrying a differential current resolves fields
//! in steps of one flux quantum over its area, `B_LSB = phi0 / L^2`. The bias
//! current bounds the largest field the loop can represent. The quantizer is
//! mid-tread: zero field is code zero and ties round to even.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use thiserror::Error;

use crate::constants::PhysicalConstants;
use crate::electrodynamics::square_loop_current;
use crate::export::{csv_writer, num};

#[derive(Debug, Error)]
pub enum ComparatorError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparatorConfig {
    /// Square-loop side (m).
    pub side: f64,
    /// Mean arm current `(I1 + I2) / 2` (A).
    pub bias_current: f64,
    /// Field of one level, `phi0 / L^2` (T).
    pub b_lsb: f64,
    /// Largest centre field, `sqrt(2) mu0 I_bias / (pi L)` (T).
    pub b_max: f64,
    pub n_levels: u32,
}

impl ComparatorConfig {
    /// Largest representable code magnitude, `n_levels / 2`.
    pub fn max_code(&self) -> i64 {
        i64::from(self.n_levels / 2)
    }
}

/// Raw level count `2 sqrt(2) mu0 e L I / (pi h)`.
pub fn level_count_raw(side: f64, bias_current: f64, constants: &PhysicalConstants) -> f64 {
    2.0 * SQRT_2 * constants.mu0() * constants.e() * side * bias_current / (PI * constants.h())
}

pub fn make_comparator(
    side: f64,
    bias_current: f64,
    constants: &PhysicalConstants,
) -> Result<ComparatorConfig, ComparatorError> {
    if !(side.is_finite() && side > 0.0) {
        return Err(ComparatorError::Domain(format!(
            "loop side must be positive, got {side} m"
        )));
    }
    if !(bias_current.is_finite() && bias_current > 0.0) {
        return Err(ComparatorError::Domain(format!(
            "bias current must be positive, got {bias_current} A"
        )));
    }
    let raw = level_count_raw(side, bias_current, constants);
    if raw < 1.0 || raw > f64::from(u32::MAX) {
        return Err(ComparatorError::Domain(format!(
            "level count {raw:.3} is outside the representable range"
        )));
    }
    Ok(ComparatorConfig {
        side,
        bias_current,
        b_lsb: constants.phi0() / (side * side),
        b_max: SQRT_2 * constants.mu0() * bias_current / (PI * side),
        n_levels: raw.round() as u32,
    })
}

/// One comparator decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub code: i64,
    pub saturated: bool,
    /// Arm current imbalance `|I1 - I2| / 2` implied by the sensed field (A).
    pub half_difference: f64,
}

pub fn quantize(cfg: &ComparatorConfig, field: f64) -> Decision {
    let max = cfg.max_code();
    let level = (field / cfg.b_lsb).round_ties_even();
    let (code, saturated) = if level > max as f64 {
        (max, true)
    } else if level < -max as f64 {
        (-max, true)
    } else {
        (level as i64, false)
    };
    Decision {
        code,
        saturated,
        half_difference: square_loop_current(cfg.side, field).abs(),
    }
}

/// Ideal feedback field `code * B_LSB`.
pub fn dac_feedback(cfg: &ComparatorConfig, code: i64) -> Result<f64, ComparatorError> {
    if code.abs() > cfg.max_code() {
        return Err(ComparatorError::Domain(format!(
            "code {code} outside ±{}",
            cfg.max_code()
        )));
    }
    Ok(code as f64 * cfg.b_lsb)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPoint {
    pub field: f64,
    pub decision: Decision,
}

/// Quantizer response on `points` evenly spaced fields in `[lo, hi]`.
pub fn transfer_curve(
    cfg: &ComparatorConfig,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<TransferPoint>, ComparatorError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || points < 2 {
        return Err(ComparatorError::Domain(format!(
            "need lo < hi and at least two points, got [{lo}, {hi}] with {points}"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let field = if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            };
            TransferPoint {
                field,
                decision: quantize(cfg, field),
            }
        })
        .collect())
}

/// Columns `B_LF, code, saturated`.
pub fn write_transfer_csv<W: Write>(
    curve: &[TransferPoint],
    out: W,
) -> Result<(), ComparatorError> {
    let mut w = csv_writer(out);
    w.write_record(["B_LF", "code", "saturated"])?;
    for p in curve {
        w.write_record([
            num(p.field),
            p.decision.code.to_string(),
            p.decision.saturated.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> (ComparatorConfig, PhysicalConstants) {
        let c = PhysicalConstants::codata();
        (make_comparator(200e-6, 9.371e-3, &c).unwrap(), c)
    }

    #[test]
    fn reference_loop_levels() {
        let (cfg, c) = reference();
        let raw = level_count_raw(200e-6, 9.371e-3, &c);
        assert!((raw - 512.7).abs() < 0.05, "{raw}");
        assert!((i64::from(cfg.n_levels) - 512).abs() <= 1);
        assert!(((cfg.b_max / cfg.b_lsb).round() - f64::from(cfg.n_levels)).abs() <= 1.0);
    }

    #[test]
    fn lsb_is_flux_quantum_over_area() {
        let (cfg, _) = reference();
        let phi0 = 6.626_070_15e-34 / (2.0 * 1.602_176_634e-19);
        let oracle = phi0 / (200e-6f64).powi(2);
        assert!((cfg.b_lsb / oracle - 1.0).abs() < 1e-12);
        assert!((cfg.b_lsb - 5.170e-8).abs() < 5e-12);
    }

    #[test]
    fn doubling_bias_doubles_levels() {
        let (cfg, c) = reference();
        let doubled = make_comparator(200e-6, 2.0 * 9.371e-3, &c).unwrap();
        assert!((i64::from(doubled.n_levels) - 2 * i64::from(cfg.n_levels)).abs() <= 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = PhysicalConstants::codata();
        assert!(make_comparator(0.0, 1e-3, &c).is_err());
        assert!(make_comparator(1e-4, -1e-3, &c).is_err());
    }

    #[test]
    fn quantizer_points() {
        let (cfg, _) = reference();
        assert_eq!(quantize(&cfg, 0.0).code, 0);
        assert_eq!(quantize(&cfg, 1.5 * cfg.b_lsb).code, 2);
        assert_eq!(quantize(&cfg, 2.5 * cfg.b_lsb).code, 2);
        let over = quantize(&cfg, 2.0 * cfg.b_max);
        assert_eq!(over.code, cfg.max_code());
        assert!(over.saturated);
        let under = quantize(&cfg, -2.0 * cfg.b_max);
        assert_eq!(under.code, -cfg.max_code());
        assert!(under.saturated);
        assert!(!quantize(&cfg, cfg.b_lsb).saturated);
    }

    #[test]
    fn dac_values() {
        let (cfg, _) = reference();
        assert_eq!(dac_feedback(&cfg, 0).unwrap(), 0.0);
        let top = dac_feedback(&cfg, 256).unwrap();
        assert!((top - 256.0 * cfg.b_lsb).abs() < 1e-25);
        assert!((top - 1.324e-5).abs() < 1e-8);
        assert!(dac_feedback(&cfg, cfg.max_code() + 1).is_err());
        for code in -cfg.max_code()..=cfg.max_code() {
            let b = dac_feedback(&cfg, code).unwrap();
            assert_eq!(quantize(&cfg, b).code, code);
        }
    }

    #[test]
    fn implied_current_inverts_center_field() {
        let (cfg, _) = reference();
        let d = quantize(&cfg, cfg.b_lsb);
        let back = crate::electrodynamics::square_loop_center_field(cfg.side, d.half_difference);
        assert!((back / cfg.b_lsb - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transfer_export() {
        let (cfg, _) = reference();
        let curve = transfer_curve(&cfg, -cfg.b_lsb, cfg.b_lsb, 5).unwrap();
        let mut buf = Vec::new();
        write_transfer_csv(&curve, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "B_LF,code,saturated");
        assert_eq!(lines.len(), 6);
        assert!(lines[3].ends_with(",0,false"));
        assert!(transfer_curve(&cfg, 1.0, 0.0, 5).is_err());
    }
}
