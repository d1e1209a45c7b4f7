use std::fmt;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::{coherence_factors, JunctionError};

/// Probabilities below this are reported as absent channels.
const CHANNEL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Normal,
    Superconductor,
}

/// Outgoing or incoming excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Electron,
    Hole,
    ElectronLike,
    HoleLike,
    CooperPair,
}

/// Incident excitation. On the superconducting side `hole == false` means an
/// electron-like quasiparticle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub side: Side,
    pub hole: bool,
}

impl Incidence {
    pub const NORMAL_ELECTRON: Self = Self {
        side: Side::Normal,
        hole: false,
    };
    pub const NORMAL_HOLE: Self = Self {
        side: Side::Normal,
        hole: true,
    };
    pub const SUPER_ELECTRON: Self = Self {
        side: Side::Superconductor,
        hole: false,
    };
    pub const SUPER_HOLE: Self = Self {
        side: Side::Superconductor,
        hole: true,
    };

    pub fn species(&self) -> Species {
        match (self.side, self.hole) {
            (Side::Normal, false) => Species::Electron,
            (Side::Normal, true) => Species::Hole,
            (Side::Superconductor, false) => Species::ElectronLike,
            (Side::Superconductor, true) => Species::HoleLike,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// Reflection into the opposite branch.
    Andreev,
    /// Reflection into the same branch.
    Specular,
    Transmitted,
    /// Charge 2e carried into the condensate by a sub-gap Andreev process.
    CooperPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub kind: ChannelKind,
    pub species: Species,
    pub amplitude: Complex64,
    /// Fraction of the incident probability current. For
    /// [`ChannelKind::CooperPair`] this is the pair-transfer rate.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterOutcome {
    pub incident: Incidence,
    pub above_gap: bool,
    pub reflected: Vec<Channel>,
    pub transmitted: Vec<Channel>,
}

impl ScatterOutcome {
    pub fn probability(&self, kind: ChannelKind) -> f64 {
        self.reflected
            .iter()
            .chain(&self.transmitted)
            .filter(|c| c.kind == kind)
            .map(|c| c.probability)
            .sum()
    }

    /// Current conservation: reflected plus quasiparticle-transmitted
    /// probability.
    pub fn total_probability(&self) -> f64 {
        self.reflected
            .iter()
            .chain(&self.transmitted)
            .filter(|c| c.kind != ChannelKind::CooperPair)
            .map(|c| c.probability)
            .sum()
    }
}

impl fmt::Display for ScatterOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "incident {:?} from {:?} side, {}",
            self.incident.species(),
            self.incident.side,
            if self.above_gap {
                "above gap"
            } else {
                "sub-gap"
            }
        )?;
        for (label, list) in [
            ("reflected", &self.reflected),
            ("transmitted", &self.transmitted),
        ] {
            for c in list {
                writeln!(
                    f,
                    "  {label:<11} {:<12} {:<13} {:.6}",
                    format!("{:?}", c.kind),
                    format!("{:?}", c.species),
                    c.probability
                )?;
            }
        }
        Ok(())
    }
}

/// Closed-form reflection probabilities for an electron incident from the
/// normal side on a delta barrier of strength `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtkProbabilities {
    /// Andreev reflection.
    pub a: f64,
    /// Specular reflection.
    pub b: f64,
    /// Electron-like transmission.
    pub c: f64,
    /// Hole-like transmission.
    pub d: f64,
}

impl BtkProbabilities {
    /// Charge transmission `1 + A - B` entering the tunnelling current.
    pub fn transmission(&self) -> f64 {
        1.0 + self.a - self.b
    }
}

/// Reflection and transmission probabilities at energy `eps` (sign ignored).
pub fn btk_probabilities(eps: f64, delta: f64, z: f64) -> BtkProbabilities {
    let e = eps.abs();
    let delta = delta.abs();
    let z2 = z * z;
    if e < delta {
        let a = delta * delta / (e * e + (delta * delta - e * e) * (1.0 + 2.0 * z2).powi(2));
        return BtkProbabilities {
            a,
            b: 1.0 - a,
            c: 0.0,
            d: 0.0,
        };
    }
    let s = if e == 0.0 {
        1.0
    } else {
        (e * e - delta * delta).sqrt() / e
    };
    let u2 = (1.0 + s) / 2.0;
    let v2 = (1.0 - s) / 2.0;
    let gamma = u2 + s * z2;
    let g2 = gamma * gamma;
    BtkProbabilities {
        a: u2 * v2 / g2,
        b: s * s * z2 * (1.0 + z2) / g2,
        c: u2 * s * (1.0 + z2) / g2,
        d: v2 * s * z2 / g2,
    }
}

/// Outgoing amplitudes from the interface matching problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    /// Outgoing normal-side electron.
    pub normal_electron: Complex64,
    /// Outgoing normal-side hole.
    pub normal_hole: Complex64,
    /// Outgoing electron-like quasiparticle.
    pub super_electron: Complex64,
    /// Outgoing hole-like quasiparticle.
    pub super_hole: Complex64,
    /// `|U|^2 - |V|^2`, the quasiparticle current weight above the gap.
    pub quasiparticle_weight: f64,
}

/// Solve the wave-matching conditions at a delta barrier in the Andreev
/// approximation (all wavevectors equal to `k_F`).
///
/// Wavefunctions are continuous at the barrier and the derivative jumps by
/// `2 Z k_F` times the wavefunction.
pub fn match_interface(
    incident: Incidence,
    eps: f64,
    delta: f64,
    z: f64,
) -> Result<Amplitudes, JunctionError> {
    let (u, v) = coherence_factors(eps, delta)?;
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let two_z = Complex64::new(2.0 * z, 0.0);

    // Each wave: spinor, propagation sign, and whether it lives on the normal side.
    let column = |spinor: [Complex64; 2], sign: f64, normal: bool| -> Vector4<Complex64> {
        let ds = i * sign;
        if normal {
            Vector4::new(
                -spinor[0],
                -spinor[1],
                -(ds + two_z) * spinor[0],
                -(ds + two_z) * spinor[1],
            )
        } else {
            Vector4::new(spinor[0], spinor[1], ds * spinor[0], ds * spinor[1])
        }
    };
    let out_n_e = column([one, zero], -1.0, true);
    let out_n_h = column([zero, one], 1.0, true);
    let out_s_e = column([u, v], 1.0, false);
    let out_s_h = column([v, u], -1.0, false);
    let source = match (incident.side, incident.hole) {
        (Side::Normal, false) => column([one, zero], 1.0, true),
        (Side::Normal, true) => column([zero, one], -1.0, true),
        (Side::Superconductor, false) => column([u, v], -1.0, false),
        (Side::Superconductor, true) => column([v, u], 1.0, false),
    };
    let m = Matrix4::from_columns(&[out_n_e, out_n_h, out_s_e, out_s_h]);
    let x = m.lu().solve(&(-source)).ok_or_else(|| {
        JunctionError::Domain(format!("singular matching system at eps = {eps:e}"))
    })?;
    Ok(Amplitudes {
        normal_electron: x[0],
        normal_hole: x[1],
        super_electron: x[2],
        super_hole: x[3],
        quasiparticle_weight: u.norm_sqr() - v.norm_sqr(),
    })
}

/// Scattering channels for one incident excitation at energy `eps`.
///
/// Sub-gap incidence is only possible from the normal side; an electron-like
/// or hole-like quasiparticle below the gap does not propagate.
pub fn andreev_outcome(
    incident: Incidence,
    eps: f64,
    delta: f64,
    z: f64,
) -> Result<ScatterOutcome, JunctionError> {
    if !(z >= 0.0) {
        return Err(JunctionError::Domain(format!(
            "barrier Z must be non-negative, got {z}"
        )));
    }
    let above_gap = eps >= delta.abs();
    if incident.side == Side::Superconductor && eps <= delta.abs() {
        return Err(JunctionError::Domain(format!(
            "no propagating quasiparticle at eps = {eps:e} J on the superconducting side (gap {delta:e} J)"
        )));
    }
    let amp = match_interface(incident, eps, delta, z)?;
    let w = if above_gap {
        amp.quasiparticle_weight
    } else {
        0.0
    };
    let norm = match incident.side {
        Side::Normal => 1.0,
        Side::Superconductor => w,
    };
    let channel = |kind, species, amplitude: Complex64, weight: f64| Channel {
        kind,
        species,
        amplitude,
        probability: amplitude.norm_sqr() * weight / norm,
    };
    let keep = |c: &Channel| c.probability > CHANNEL_FLOOR;

    let (reflected, transmitted) = match incident.side {
        Side::Normal => {
            let (same, other) = if incident.hole {
                (Species::Hole, Species::Electron)
            } else {
                (Species::Electron, Species::Hole)
            };
            let (same_amp, other_amp) = if incident.hole {
                (amp.normal_hole, amp.normal_electron)
            } else {
                (amp.normal_electron, amp.normal_hole)
            };
            let andreev = channel(ChannelKind::Andreev, other, other_amp, 1.0);
            let reflected = vec![andreev, channel(ChannelKind::Specular, same, same_amp, 1.0)];
            let transmitted = if above_gap {
                vec![
                    channel(
                        ChannelKind::Transmitted,
                        Species::ElectronLike,
                        amp.super_electron,
                        w,
                    ),
                    channel(
                        ChannelKind::Transmitted,
                        Species::HoleLike,
                        amp.super_hole,
                        w,
                    ),
                ]
            } else {
                vec![Channel {
                    kind: ChannelKind::CooperPair,
                    species: Species::CooperPair,
                    amplitude: other_amp,
                    probability: andreev.probability,
                }]
            };
            (reflected, transmitted)
        }
        Side::Superconductor => {
            let (same, other, same_amp, other_amp) = if incident.hole {
                (
                    Species::HoleLike,
                    Species::ElectronLike,
                    amp.super_hole,
                    amp.super_electron,
                )
            } else {
                (
                    Species::ElectronLike,
                    Species::HoleLike,
                    amp.super_electron,
                    amp.super_hole,
                )
            };
            let reflected = vec![
                channel(ChannelKind::Andreev, other, other_amp, w),
                channel(ChannelKind::Specular, same, same_amp, w),
            ];
            let transmitted = vec![
                channel(
                    ChannelKind::Transmitted,
                    Species::Electron,
                    amp.normal_electron,
                    1.0,
                ),
                channel(
                    ChannelKind::Transmitted,
                    Species::Hole,
                    amp.normal_hole,
                    1.0,
                ),
            ];
            (reflected, transmitted)
        }
    };
    Ok(ScatterOutcome {
        incident,
        above_gap,
        reflected: reflected.into_iter().filter(keep).collect(),
        transmitted: transmitted.into_iter().filter(keep).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(list: &[Channel]) -> Vec<(ChannelKind, Species)> {
        list.iter().map(|c| (c.kind, c.species)).collect()
    }

    #[test]
    fn clean_interface_above_gap() {
        let o = andreev_outcome(Incidence::NORMAL_ELECTRON, 1.5, 1.0, 0.0).unwrap();
        assert!(o.above_gap);
        assert_eq!(
            kinds(&o.reflected),
            vec![(ChannelKind::Andreev, Species::Hole)]
        );
        assert_eq!(
            kinds(&o.transmitted),
            vec![(ChannelKind::Transmitted, Species::ElectronLike)]
        );
        assert!((o.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clean_interface_sub_gap() {
        for eps in [0.05, 0.5, 0.99] {
            let o = andreev_outcome(Incidence::NORMAL_ELECTRON, eps, 1.0, 0.0).unwrap();
            assert_eq!(
                kinds(&o.reflected),
                vec![(ChannelKind::Andreev, Species::Hole)]
            );
            assert_eq!(
                kinds(&o.transmitted),
                vec![(ChannelKind::CooperPair, Species::CooperPair)]
            );
            assert!((o.probability(ChannelKind::Andreev) - 1.0).abs() < 1e-12);
            assert_eq!(o.probability(ChannelKind::Specular), 0.0);
        }
    }

    #[test]
    fn hole_incidence_mirrors_electron() {
        let o = andreev_outcome(Incidence::NORMAL_HOLE, 1.5, 1.0, 0.0).unwrap();
        assert_eq!(
            kinds(&o.reflected),
            vec![(ChannelKind::Andreev, Species::Electron)]
        );
        assert_eq!(
            kinds(&o.transmitted),
            vec![(ChannelKind::Transmitted, Species::HoleLike)]
        );
        for eps in [0.3, 1.2, 4.0] {
            let e = andreev_outcome(Incidence::NORMAL_ELECTRON, eps, 1.0, 0.7).unwrap();
            let h = andreev_outcome(Incidence::NORMAL_HOLE, eps, 1.0, 0.7).unwrap();
            assert!(
                (e.probability(ChannelKind::Andreev) - h.probability(ChannelKind::Andreev)).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn barrier_adds_specular_reflection() {
        let o = andreev_outcome(Incidence::NORMAL_ELECTRON, 0.5, 1.0, 1.0).unwrap();
        assert!(o.probability(ChannelKind::Specular) > 0.1);
        assert!((o.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matching_reproduces_closed_form() {
        for &z in &[0.0, 0.3, 1.0, 3.0] {
            for &eps in &[0.01, 0.4, 0.9, 1.0, 1.01, 1.3, 2.0, 10.0] {
                let o = andreev_outcome(Incidence::NORMAL_ELECTRON, eps, 1.0, z).unwrap();
                let btk = btk_probabilities(eps, 1.0, z);
                let a = o.probability(ChannelKind::Andreev);
                let b = o.probability(ChannelKind::Specular);
                assert!(
                    (a - btk.a).abs() < 1e-10,
                    "A at z={z} eps={eps}: {a} vs {}",
                    btk.a
                );
                assert!(
                    (b - btk.b).abs() < 1e-10,
                    "B at z={z} eps={eps}: {b} vs {}",
                    btk.b
                );
                if eps > 1.0 {
                    let amp = match_interface(Incidence::NORMAL_ELECTRON, eps, 1.0, z).unwrap();
                    let w = amp.quasiparticle_weight;
                    assert!((amp.super_electron.norm_sqr() * w - btk.c).abs() < 1e-10);
                    assert!((amp.super_hole.norm_sqr() * w - btk.d).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn closed_form_conserves_probability() {
        for &z in &[0.0, 0.5, 2.0, 10.0] {
            for &eps in &[0.0, 0.5, 1.0, 1.5, 5.0] {
                let p = btk_probabilities(eps, 1.0, z);
                assert!(
                    (p.a + p.b + p.c + p.d - 1.0).abs() < 1e-12,
                    "z={z} eps={eps}"
                );
            }
        }
        let normal = btk_probabilities(2.0, 0.0, 1.0);
        assert!((normal.b - 0.5).abs() < 1e-15 && normal.a == 0.0);
    }

    #[test]
    fn superconducting_side_incidence() {
        for inc in [Incidence::SUPER_ELECTRON, Incidence::SUPER_HOLE] {
            let o = andreev_outcome(inc, 1.7, 1.0, 0.5).unwrap();
            assert!((o.total_probability() - 1.0).abs() < 1e-10);
            assert_eq!(o.transmitted.len(), 2);
            assert!(andreev_outcome(inc, 0.5, 1.0, 0.5).is_err());
        }
        let clean = andreev_outcome(Incidence::SUPER_ELECTRON, 1.7, 1.0, 0.0).unwrap();
        assert_eq!(
            kinds(&clean.transmitted),
            vec![(ChannelKind::Transmitted, Species::Electron)]
        );
    }

    #[test]
    fn table_text() {
        let o = andreev_outcome(Incidence::NORMAL_ELECTRON, 0.5, 1.0, 0.0).unwrap();
        let text = o.to_string();
        assert!(text.starts_with("incident Electron from Normal side, sub-gap\n"));
        assert!(text.contains("reflected   Andreev      Hole          1.000000"));
        assert!(text.contains("transmitted CooperPair   CooperPair    1.000000"));
    }
}
