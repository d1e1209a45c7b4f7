//! State machine of the segmented flux-trapping cylinder.
//!
//! A superconducting cylinder is divided along its axis into segments, each
//! wrapped by an E-coil. An energized E-coil drives its segment normal. Flux
//! from the input solenoid is frozen into isolated superconducting segments
//! as integer numbers of flux quanta. Rings are then shifted segment by segment
//! so that several of them end up side by side, multiplying the trapped flux.
//!
//! Segments are 0-based in the API and 1-based in schedule files.

mod coupled;
mod schedule;
mod squid;
mod state;
mod timing;

use thiserror::Error;

pub use coupled::{coupled_coil_delta_lambda, CoupledCoilTransfer};
pub use schedule::{run_amplification_sequence, AmplifierRun, Schedule, Step};
pub use squid::{integrate_cycle, SquidAccumulator};
pub use state::{trap_flux, FluxTrapState, Phase, Ring};
pub use timing::{settle_time_classical, settle_time_device};

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LossReason {
    /// A newly superconducting segment would join two flux-carrying rings.
    Merge { segment: usize },
    /// A newly normal segment would cut a ring into two pieces.
    Split { segment: usize },
    /// A ring would be left with no superconducting segment.
    EmptySpan { segment: usize },
    /// The input field was switched while part of the cylinder was superconducting.
    InputWhileSuperconducting { segment: usize },
}

impl std::fmt::Display for LossReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Merge { segment } => write!(f, "segment {} would merge two rings", segment + 1),
            Self::Split { segment } => write!(f, "segment {} would split a ring", segment + 1),
            Self::EmptySpan { segment } => {
                write!(
                    f,
                    "segment {} would leave a ring with no superconducting span",
                    segment + 1
                )
            }
            Self::InputWhileSuperconducting { segment } => write!(
                f,
                "input field switched on while segment {} is superconducting",
                segment + 1
            ),
        }
    }
}

fn step_label(step: &Option<usize>) -> String {
    match step {
        Some(i) => format!(" at step {i}"),
        None => String::new(),
    }
}

#[derive(Debug, Error)]
pub enum FluxTrapError {
    #[error("invalid geometry: {0}")]
    Domain(String),
    #[error("field {field} T is not below the critical field {limit} T")]
    PhaseViolation { field: f64, limit: f64 },
    #[error("segment {segment} out of range for {n_segments} segments")]
    SegmentOutOfRange { segment: usize, n_segments: usize },
    #[error("flux loss{}: {reason}", step_label(.step))]
    FluxLoss {
        step: Option<usize>,
        reason: LossReason,
    },
    #[error("schedule step {index}: {message}")]
    Schedule { index: usize, message: String },
    #[error("schedule file: {0}")]
    ScheduleSyntax(#[from] toml::de::Error),
    #[error("csv export: {0}")]
    Csv(#[from] csv::Error),
}

impl FluxTrapError {
    fn at_step(self, index: usize) -> Self {
        match self {
            Self::FluxLoss { reason, .. } => Self::FluxLoss {
                step: Some(index),
                reason,
            },
            Self::SegmentOutOfRange {
                segment,
                n_segments,
            } => Self::Schedule {
                index,
                message: format!(
                    "segment {} out of range for {n_segments} segments",
                    segment + 1
                ),
            },
            other => other,
        }
    }
}

/// Cylinder dimensions and the field limit of its superconductor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGeometry {
    radius: f64,
    area: f64,
    n_segments: usize,
    n_eff: f64,
    critical_b: f64,
}

impl CylinderGeometry {
    /// `n_eff` is the effective turns per unit length relating the trapped
    /// field to the ring current, `B = mu0 n_eff I_S`. `critical_b` is the
    /// field (T) above which the superconductor cannot hold a vortex-free state.
    pub fn new(
        radius: f64,
        n_segments: usize,
        n_eff: f64,
        critical_b: f64,
    ) -> Result<Self, FluxTrapError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(FluxTrapError::Domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if n_segments == 0 {
            return Err(FluxTrapError::Domain(
                "at least one segment is required".into(),
            ));
        }
        if !(n_eff.is_finite() && n_eff > 0.0) {
            return Err(FluxTrapError::Domain(format!(
                "n_eff must be positive, got {n_eff}"
            )));
        }
        if !(critical_b > 0.0) {
            return Err(FluxTrapError::Domain(format!(
                "critical field must be positive, got {critical_b}"
            )));
        }
        Ok(Self {
            radius,
            area: PI * radius * radius,
            n_segments,
            n_eff,
            critical_b,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn n_segments(&self) -> usize {
        self.n_segments
    }

    pub fn n_eff(&self) -> f64 {
        self.n_eff
    }

    pub fn critical_b(&self) -> f64 {
        self.critical_b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_is_cached() {
        let g = CylinderGeometry::new(2e-3, 4, 1e3, 0.08).unwrap();
        assert!((g.area() - PI * 4e-6).abs() < 1e-20);
    }

    #[test]
    fn geometry_rejects_bad_values() {
        assert!(CylinderGeometry::new(-1e-3, 4, 1e3, 0.08).is_err());
        assert!(CylinderGeometry::new(1e-3, 0, 1e3, 0.08).is_err());
        assert!(CylinderGeometry::new(1e-3, 4, 0.0, 0.08).is_err());
        assert!(CylinderGeometry::new(1e-3, 4, 1e3, 0.0).is_err());
    }

    #[test]
    fn flux_loss_message_names_step() {
        let e = FluxTrapError::FluxLoss {
            step: None,
            reason: LossReason::Merge { segment: 2 },
        }
        .at_step(5);
        assert_eq!(
            e.to_string(),
            "flux loss at step 5: segment 3 would merge two rings"
        );
    }
}
