use super::{CylinderGeometry, FluxTrapError, LossReason};
use crate::constants::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Superconducting,
    Normal,
}

impl Phase {
    pub fn symbol(self) -> char {
        match self {
            Phase::Superconducting => 'S',
            Phase::Normal => 'N',
        }
    }
}

/// A circulating supercurrent confined to the contiguous superconducting
/// segments `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    pub first: usize,
    pub last: usize,
    /// Total circulating supercurrent (A).
    pub current: f64,
    /// Trapped flux in quanta.
    pub quanta: i64,
}

impl Ring {
    pub fn contains(&self, segment: usize) -> bool {
        (self.first..=self.last).contains(&segment)
    }

    pub fn span_len(&self) -> usize {
        self.last - self.first + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct InputCapture {
    quanta: i64,
    current: f64,
}

/// Phases of every segment, the rings they carry and the input solenoid.
///
/// Operations return new states.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxTrapState {
    geometry: CylinderGeometry,
    phases: Vec<Phase>,
    rings: Vec<Ring>,
    input: Option<InputCapture>,
}

fn quantize(
    field: f64,
    geom: &CylinderGeometry,
    constants: &PhysicalConstants,
) -> Result<InputCapture, FluxTrapError> {
    if !(field.abs() < geom.critical_b()) {
        return Err(FluxTrapError::PhaseViolation {
            field,
            limit: geom.critical_b(),
        });
    }
    let quanta = quanta_from_ratio(field * geom.area() / constants.phi0());
    let trapped_b = quanta as f64 * constants.phi0() / geom.area();
    let current = trapped_b / (constants.mu0() * geom.n_eff());
    Ok(InputCapture { quanta, current })
}

/// Nearest integer to `B A / phi0`, ties to even.
fn quanta_from_ratio(ratio: f64) -> i64 {
    ratio.round_ties_even() as i64
}

/// Freeze `b_ext` into a fully superconducting cylinder: one ring over every
/// segment holding `round_half_even(B A / phi0)` quanta. The external field
/// is considered removed afterwards.
pub fn trap_flux(
    geom: &CylinderGeometry,
    b_ext: f64,
    constants: &PhysicalConstants,
) -> Result<FluxTrapState, FluxTrapError> {
    let capture = quantize(b_ext, geom, constants)?;
    Ok(FluxTrapState {
        geometry: *geom,
        phases: vec![Phase::Superconducting; geom.n_segments()],
        rings: vec![Ring {
            first: 0,
            last: geom.n_segments() - 1,
            current: capture.current,
            quanta: capture.quanta,
        }],
        input: None,
    })
}

impl FluxTrapState {
    /// Every E-coil energized, so every segment normal; no rings, input off.
    pub fn all_normal(geom: &CylinderGeometry) -> Self {
        Self {
            geometry: *geom,
            phases: vec![Phase::Normal; geom.n_segments()],
            rings: Vec::new(),
            input: None,
        }
    }

    pub fn geometry(&self) -> &CylinderGeometry {
        &self.geometry
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Rings ordered by position.
    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn external_field_on(&self) -> bool {
        self.input.is_some()
    }

    pub fn trapped_flux_total(&self) -> i64 {
        self.rings.iter().map(|r| r.quanta).sum()
    }

    pub fn ring_at(&self, segment: usize) -> Option<&Ring> {
        self.rings.iter().find(|r| r.contains(segment))
    }

    fn check_segment(&self, segment: usize) -> Result<(), FluxTrapError> {
        if segment >= self.phases.len() {
            return Err(FluxTrapError::SegmentOutOfRange {
                segment,
                n_segments: self.phases.len(),
            });
        }
        Ok(())
    }

    /// Maximal superconducting run containing `segment`.
    fn run_around(&self, segment: usize) -> (usize, usize) {
        let sc = |i: usize| self.phases[i] == Phase::Superconducting;
        let mut first = segment;
        while first > 0 && sc(first - 1) {
            first -= 1;
        }
        let mut last = segment;
        while last + 1 < self.phases.len() && sc(last + 1) {
            last += 1;
        }
        (first, last)
    }

    /// Energize (`true`, segment goes normal) or de-energize (`false`,
    /// segment goes superconducting) one E-coil.
    ///
    /// Rings contract out of a segment that turns normal and spread over a
    /// neighbouring segment that turns superconducting, keeping their current.
    /// A segment that turns superconducting in isolation while the input is on
    /// traps a new ring.
    pub fn set_ecoil(&self, segment: usize, energized: bool) -> Result<Self, FluxTrapError> {
        self.check_segment(segment)?;
        let target = if energized {
            Phase::Normal
        } else {
            Phase::Superconducting
        };
        if self.phases[segment] == target {
            return Ok(self.clone());
        }
        let mut next = self.clone();
        next.phases[segment] = target;
        let loss = |reason| FluxTrapError::FluxLoss { step: None, reason };

        if energized {
            if let Some(idx) = self.rings.iter().position(|r| r.contains(segment)) {
                let ring = &mut next.rings[idx];
                let keeps_left = segment > ring.first;
                let keeps_right = segment < ring.last;
                match (keeps_left, keeps_right) {
                    (true, true) => return Err(loss(LossReason::Split { segment })),
                    (false, false) => return Err(loss(LossReason::EmptySpan { segment })),
                    (true, false) => ring.last = segment - 1,
                    (false, true) => ring.first = segment + 1,
                }
            }
            return Ok(next);
        }

        let left = self
            .rings
            .iter()
            .position(|r| segment > 0 && r.last == segment - 1);
        let right = self.rings.iter().position(|r| r.first == segment + 1);
        let (first, last) = next.run_around(segment);
        match (left, right) {
            (Some(_), Some(_)) => return Err(loss(LossReason::Merge { segment })),
            (Some(idx), None) | (None, Some(idx)) => {
                next.rings[idx].first = first;
                next.rings[idx].last = last;
            }
            (None, None) => {
                if let Some(capture) = self.input {
                    next.rings.push(Ring {
                        first,
                        last,
                        current: capture.current,
                        quanta: capture.quanta,
                    });
                    next.rings.sort_by_key(|r| r.first);
                }
            }
        }
        Ok(next)
    }

    /// Switch the input solenoid. Turning it on requires every segment to be
    /// normal so that the field threads the cylinder freely.
    pub fn set_input(
        &self,
        on: bool,
        b_in: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self, FluxTrapError> {
        let mut next = self.clone();
        if !on {
            next.input = None;
            return Ok(next);
        }
        if let Some(segment) = self
            .phases
            .iter()
            .position(|&p| p == Phase::Superconducting)
        {
            return Err(FluxTrapError::FluxLoss {
                step: None,
                reason: LossReason::InputWhileSuperconducting { segment },
            });
        }
        next.input = Some(quantize(b_in, &self.geometry, constants)?);
        Ok(next)
    }

    /// Energize every E-coil. Fails if any ring would be destroyed.
    pub fn reset_all(&self) -> Result<Self, FluxTrapError> {
        if let Some(ring) = self.rings.first() {
            return Err(FluxTrapError::FluxLoss {
                step: None,
                reason: LossReason::EmptySpan {
                    segment: ring.first,
                },
            });
        }
        let mut next = self.clone();
        next.phases.fill(Phase::Normal);
        Ok(next)
    }

    /// Phases as one character per segment, e.g. `SNNS`.
    pub fn phase_string(&self) -> String {
        self.phases.iter().map(|p| p.symbol()).collect()
    }

    /// Structural invariants: every ring spans exactly one maximal
    /// superconducting run, rings do not overlap.
    pub fn is_consistent(&self) -> bool {
        self.rings.iter().all(|r| {
            r.first <= r.last
                && r.last < self.phases.len()
                && self.phases[r.first] == Phase::Superconducting
                && self.run_around(r.first) == (r.first, r.last)
        }) && self.rings.windows(2).all(|w| w[0].last < w[1].first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(n: usize) -> CylinderGeometry {
        CylinderGeometry::new(1e-3, n, 1e4, 0.05).unwrap()
    }

    fn field_for(quanta: f64, g: &CylinderGeometry) -> f64 {
        quanta * PhysicalConstants::codata().phi0() / g.area()
    }

    #[test]
    fn ties_round_to_even() {
        let table = [
            (0.5, 0),
            (1.5, 2),
            (2.5, 2),
            (3.5, 4),
            (-2.5, -2),
            (-0.5, 0),
        ];
        for (ratio, expect) in table {
            assert_eq!(quanta_from_ratio(ratio), expect, "{ratio}");
        }
    }

    #[test]
    fn trap_quantizes_flux() {
        let c = PhysicalConstants::codata();
        let g = geom(4);
        let table = [
            (0.0, 0),
            (1.0, 1),
            (2.4, 2),
            (2.6, 3),
            (-3.2, -3),
            (2.49, 2),
            (2.51, 3),
        ];
        for (q, expect) in table {
            let s = trap_flux(&g, field_for(q, &g), &c).unwrap();
            assert_eq!(s.trapped_flux_total(), expect, "{q} quanta");
            assert_eq!(s.rings().len(), 1);
            assert_eq!((s.rings()[0].first, s.rings()[0].last), (0, 3));
        }
        let zero = trap_flux(&g, 0.0, &c).unwrap();
        assert_eq!(zero.rings()[0].current, 0.0);
    }

    #[test]
    fn ring_current_supports_trapped_field() {
        let c = PhysicalConstants::codata();
        let g = geom(2);
        let s = trap_flux(&g, field_for(7.0, &g), &c).unwrap();
        let b = c.mu0() * g.n_eff() * s.rings()[0].current;
        assert!((b - field_for(7.0, &g)).abs() < 1e-12 * b);
    }

    #[test]
    fn trap_above_critical_field_fails() {
        let g = geom(2);
        let c = PhysicalConstants::codata();
        assert!(matches!(
            trap_flux(&g, 0.05, &c),
            Err(FluxTrapError::PhaseViolation { .. })
        ));
    }

    #[test]
    fn energizing_normal_segment_is_idempotent() {
        let s = FluxTrapState::all_normal(&geom(4));
        assert_eq!(s.set_ecoil(2, true).unwrap(), s);
    }

    #[test]
    fn ring_spreads_with_same_current() {
        let c = PhysicalConstants::codata();
        let g = geom(4);
        let b = field_for(3.0, &g);
        let s = FluxTrapState::all_normal(&g)
            .set_input(true, b, &c)
            .unwrap()
            .set_ecoil(0, false)
            .unwrap()
            .set_ecoil(3, false)
            .unwrap()
            .set_input(false, 0.0, &c)
            .unwrap();
        assert_eq!(s.rings().len(), 2);
        let before = s.rings()[0].current;
        let spread = s.set_ecoil(1, false).unwrap();
        assert_eq!(spread.phase_string(), "SSNS");
        assert_eq!((spread.rings()[0].first, spread.rings()[0].last), (0, 1));
        assert_eq!((spread.rings()[1].first, spread.rings()[1].last), (3, 3));
        assert_eq!(spread.rings()[0].current, before);
        assert_eq!(spread.trapped_flux_total(), 6);
        assert!(spread.is_consistent());
    }

    #[test]
    fn illegal_transitions_are_flux_loss() {
        let c = PhysicalConstants::codata();
        let g = geom(3);
        let captured = FluxTrapState::all_normal(&g)
            .set_input(true, field_for(1.0, &g), &c)
            .unwrap()
            .set_ecoil(0, false)
            .unwrap()
            .set_ecoil(2, false)
            .unwrap();
        let merge = captured.set_ecoil(1, false).unwrap_err();
        assert!(matches!(
            merge,
            FluxTrapError::FluxLoss {
                reason: LossReason::Merge { segment: 1 },
                ..
            }
        ));
        let empty = captured.set_ecoil(0, true).unwrap_err();
        assert!(matches!(
            empty,
            FluxTrapError::FluxLoss {
                reason: LossReason::EmptySpan { .. },
                ..
            }
        ));

        let full = trap_flux(&g, field_for(1.0, &g), &c).unwrap();
        let split = full.set_ecoil(1, true).unwrap_err();
        assert!(matches!(
            split,
            FluxTrapError::FluxLoss {
                reason: LossReason::Split { segment: 1 },
                ..
            }
        ));
        assert!(full.set_input(true, 0.0, &c).is_err());
        assert!(full.reset_all().is_err());
    }

    #[test]
    fn segment_formed_without_input_holds_no_ring() {
        let g = geom(2);
        let s = FluxTrapState::all_normal(&g).set_ecoil(0, false).unwrap();
        assert!(s.rings().is_empty());
        assert!(s.is_consistent());
    }

    #[test]
    fn out_of_range_segment() {
        let s = FluxTrapState::all_normal(&geom(2));
        assert!(matches!(
            s.set_ecoil(2, false),
            Err(FluxTrapError::SegmentOutOfRange { .. })
        ));
    }
}
