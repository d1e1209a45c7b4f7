use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{CylinderGeometry, FluxTrapError, FluxTrapState};
use crate::constants::PhysicalConstants;
use crate::export::{csv_writer, num};

/// One control action. `segment` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Energize every E-coil.
    ResetAll,
    /// Switch the input solenoid.
    Input(bool),
    Coil {
        segment: usize,
        energized: bool,
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |on: bool| if on { "on" } else { "off" };
        match *self {
            Step::ResetAll => write!(f, "reset"),
            Step::Input(on) => write!(f, "input {}", word(on)),
            Step::Coil { segment, energized } => {
                write!(f, "coil {} {}", segment + 1, word(energized))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

/// One `[[step]]` table: exactly one of `reset = true`, `input = "on"|"off"`,
/// or `segment = <1-based>` with `coil = "on"|"off"`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRecord {
    reset: Option<bool>,
    input: Option<Switch>,
    segment: Option<usize>,
    coil: Option<Switch>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    #[serde(default)]
    step: Vec<StepRecord>,
}

impl StepRecord {
    fn into_step(self, index: usize) -> Result<Step, FluxTrapError> {
        let bad = |message: &str| FluxTrapError::Schedule {
            index,
            message: message.to_string(),
        };
        match (self.reset, self.input, self.segment, self.coil) {
            (Some(true), None, None, None) => Ok(Step::ResetAll),
            (None, Some(s), None, None) => Ok(Step::Input(s.into())),
            (None, None, Some(0), Some(_)) => Err(bad("segments are numbered from 1")),
            (None, None, Some(seg), Some(s)) => Ok(Step::Coil {
                segment: seg - 1,
                energized: s.into(),
            }),
            (None, None, Some(_), None) => Err(bad("segment given without coil = \"on\"|\"off\"")),
            (None, None, None, Some(_)) => Err(bad("coil given without segment")),
            (Some(false), None, None, None) => Err(bad("reset must be true")),
            _ => Err(bad("expected exactly one of reset, input, or segment+coil")),
        }
    }
}

/// Ordered E-coil and input actions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub steps: Vec<Step>,
}

impl Schedule {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    /// The four-segment doubler: capture in segments 1 and 4, remove the
    /// input, spread ring 1 over segment 2, then release segment 1.
    pub fn four_segment_doubler() -> Self {
        let coil = |segment, energized| Step::Coil { segment, energized };
        Self::new(vec![
            Step::ResetAll,
            Step::Input(true),
            coil(0, false),
            coil(3, false),
            Step::Input(false),
            coil(1, false),
            coil(0, true),
        ])
    }

    /// Pairwise capture-and-shift schedule for `n_segments` segments.
    ///
    /// Rings are captured in segments 1, 3, ..., 2K-1 (1-based, K = N/2) and
    /// then, starting from the top, each is shifted up by one segment. The
    /// final rings sit in segments 2, 4, ..., 2K, giving gain K. A single
    /// segment just captures one ring.
    pub fn pairwise(n_segments: usize) -> Self {
        let coil = |segment, energized| Step::Coil { segment, energized };
        let mut steps = vec![Step::ResetAll, Step::Input(true)];
        if n_segments == 1 {
            steps.extend([coil(0, false), Step::Input(false)]);
            return Self::new(steps);
        }
        let pairs = n_segments / 2;
        steps.extend((0..pairs).map(|k| coil(2 * k, false)));
        steps.push(Step::Input(false));
        for k in (0..pairs).rev() {
            steps.push(coil(2 * k + 1, false));
            steps.push(coil(2 * k, true));
        }
        Self::new(steps)
    }

    /// Parse a schedule file made of `[[step]]` tables.
    pub fn parse(text: &str) -> Result<Self, FluxTrapError> {
        let file: ScheduleFile = toml::from_str(text)?;
        let steps = file
            .step
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.into_step(i))
            .collect::<Result<_, _>>()?;
        Ok(Self { steps })
    }

    /// Inverse of [`Schedule::parse`].
    pub fn to_toml(&self) -> String {
        let word = |on: bool| if on { "on" } else { "off" };
        let mut out = String::new();
        for step in &self.steps {
            out.push_str("[[step]]\n");
            match *step {
                Step::ResetAll => out.push_str("reset = true\n"),
                Step::Input(on) => out.push_str(&format!("input = \"{}\"\n", word(on))),
                Step::Coil { segment, energized } => out.push_str(&format!(
                    "segment = {}\ncoil = \"{}\"\n",
                    segment + 1,
                    word(energized)
                )),
            }
            out.push('\n');
        }
        out
    }
}

/// Result of running a schedule: every intermediate state and the gain.
#[derive(Debug, Clone)]
pub struct AmplifierRun {
    /// State before the first step followed by the state after each step.
    pub trace: Vec<FluxTrapState>,
    pub steps: Vec<Step>,
    /// Number of independent rings left at the end.
    pub gain: usize,
    /// `round_half_even(B_in A / phi0)`.
    pub input_quanta: i64,
}

impl AmplifierRun {
    pub fn final_state(&self) -> &FluxTrapState {
        self.trace.last().expect("trace holds the initial state")
    }

    pub fn amplified_quanta(&self) -> i64 {
        self.final_state().trapped_flux_total()
    }

    /// Per-step state dump. Spans are 1-based `first-last`; list-valued
    /// columns are `;`-separated.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FluxTrapError> {
        let mut w = csv_writer(out);
        w.write_record([
            "step",
            "action",
            "phases",
            "ring_spans",
            "ring_currents",
            "ring_quanta",
            "total_quanta",
        ])?;
        for (i, state) in self.trace.iter().enumerate() {
            let action = if i == 0 {
                "start".to_string()
            } else {
                self.steps[i - 1].to_string()
            };
            let rings = state.rings();
            let join = |f: &dyn Fn(&super::Ring) -> String| {
                rings.iter().map(f).collect::<Vec<_>>().join(";")
            };
            w.write_record([
                i.to_string(),
                action,
                state.phase_string(),
                join(&|r| format!("{}-{}", r.first + 1, r.last + 1)),
                join(&|r| num(r.current)),
                join(&|r| r.quanta.to_string()),
                state.trapped_flux_total().to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Run `schedule` from the all-normal state with input field `b_in`.
///
/// Errors carry the 0-based index of the offending step.
pub fn run_amplification_sequence(
    geom: &CylinderGeometry,
    b_in: f64,
    schedule: &Schedule,
    constants: &PhysicalConstants,
) -> Result<AmplifierRun, FluxTrapError> {
    let input_quanta = super::trap_flux(geom, b_in, constants)?.trapped_flux_total();
    let mut trace = Vec::with_capacity(schedule.steps.len() + 1);
    trace.push(FluxTrapState::all_normal(geom));
    for (index, step) in schedule.steps.iter().enumerate() {
        let state = trace.last().unwrap();
        let next = match *step {
            Step::ResetAll => state.reset_all(),
            Step::Input(on) => state.set_input(on, b_in, constants),
            Step::Coil { segment, energized } => state.set_ecoil(segment, energized),
        }
        .map_err(|e| e.at_step(index))?;
        trace.push(next);
    }
    let gain = trace.last().unwrap().rings().len();
    Ok(AmplifierRun {
        trace,
        steps: schedule.steps.clone(),
        gain,
        input_quanta,
    })
}
