use std::f64::consts::PI;

use super::{JunctionConfig, JunctionError};
use crate::constants::PhysicalConstants;

/// Prefactor form of the long-junction supercurrent. The alternates use
/// different normalization conventions and are not equivalent to the
/// ballistic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnsPrefactor {
    /// `2 e S v_F k_F^2 / (pi^2 d)`.
    Ballistic,
    /// `4 hbar N(0) v_F^2 e S / d`.
    DensityOfStates,
    /// `16 hbar v_F / (2 e d R_SH)` with contact resistance `R_SH` (ohm).
    ContactResistance { r_sh: f64 },
}

/// Decay length of the pair amplitude in the normal metal,
/// `xi_N = hbar v_F / (2 pi k_B T)`.
pub fn normal_coherence_length(
    fermi_velocity: f64,
    temperature: f64,
    constants: &PhysicalConstants,
) -> Result<f64, JunctionError> {
    if !(temperature > 0.0) {
        return Err(JunctionError::Domain(format!(
            "temperature must be positive for the normal coherence length, got {temperature} K"
        )));
    }
    Ok(constants.hbar() * fermi_velocity / (2.0 * PI * constants.kb() * temperature))
}

/// Critical-current prefactor of the selected form (A).
pub fn sns_prefactor(
    cfg: &JunctionConfig,
    constants: &PhysicalConstants,
) -> Result<f64, JunctionError> {
    let d = cfg.length;
    if !(d > 0.0) {
        return Err(JunctionError::Domain(format!(
            "junction length must be positive, got {d}"
        )));
    }
    let m = &cfg.material;
    let (e, hbar, vf) = (constants.e(), constants.hbar(), m.fermi_velocity);
    Ok(match cfg.sns_form {
        SnsPrefactor::Ballistic => {
            2.0 * e * cfg.area * vf * m.fermi_wavenumber.powi(2) / (PI * PI * d)
        }
        SnsPrefactor::DensityOfStates => 4.0 * hbar * m.dos_fermi * vf * vf * e * cfg.area / d,
        SnsPrefactor::ContactResistance { r_sh } => {
            if !(r_sh > 0.0) {
                return Err(JunctionError::Domain(format!(
                    "contact resistance must be positive, got {r_sh}"
                )));
            }
            16.0 * hbar * vf / (2.0 * e * d * r_sh)
        }
    })
}

/// Supercurrent of a long SNS junction at phase difference `phi`,
/// `P e^{-d / xi_N} sin(phi)`.
pub fn sns_current(
    cfg: &JunctionConfig,
    phi: f64,
    constants: &PhysicalConstants,
) -> Result<f64, JunctionError> {
    let xi = normal_coherence_length(cfg.material.fermi_velocity, cfg.temperature, constants)?;
    let p = sns_prefactor(cfg, constants)?;
    Ok(p * (-cfg.length / xi).exp() * phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::builtin;

    fn cfg() -> (JunctionConfig, PhysicalConstants) {
        let c = PhysicalConstants::codata();
        let mut j = JunctionConfig::for_material(builtin("nb").unwrap(), &c);
        j.temperature = 4.2;
        j.length = 200e-9;
        (j, c)
    }

    #[test]
    fn zero_phase_and_oddness() {
        let (j, c) = cfg();
        assert_eq!(sns_current(&j, 0.0, &c).unwrap(), 0.0);
        let amplitude = sns_current(&j, PI / 2.0, &c).unwrap();
        for k in 0..40 {
            let phi = -3.0 + 0.15 * k as f64;
            let plus = sns_current(&j, phi, &c).unwrap();
            let minus = sns_current(&j, -phi, &c).unwrap();
            assert!((plus + minus).abs() <= 1e-15 * plus.abs());
            let wrapped = sns_current(&j, phi + 2.0 * PI, &c).unwrap();
            assert!((plus - wrapped).abs() <= 1e-14 * amplitude);
        }
    }

    #[test]
    fn coherence_length_value() {
        let c = PhysicalConstants::codata();
        let xi = normal_coherence_length(1e6, 1.0, &c).unwrap();
        let oracle = 1.054_571_817e-34 * 1e6 / (2.0 * PI * 1.380_649e-23);
        assert!((xi - oracle).abs() < 1e-9 * oracle);
        assert!(normal_coherence_length(1e6, 0.0, &c).is_err());
    }

    #[test]
    fn prefactor_forms() {
        let (mut j, c) = cfg();
        let ballistic = sns_prefactor(&j, &c).unwrap();
        assert!(ballistic > 0.0);
        j.sns_form = SnsPrefactor::DensityOfStates;
        assert!(sns_prefactor(&j, &c).unwrap() > 0.0);
        j.sns_form = SnsPrefactor::ContactResistance { r_sh: 0.0 };
        assert!(sns_prefactor(&j, &c).is_err());
        j.sns_form = SnsPrefactor::ContactResistance { r_sh: 2.0 };
        let r = sns_prefactor(&j, &c).unwrap();
        assert!(
            (r - 16.0 * c.hbar() * j.material.fermi_velocity / (4.0 * c.e() * j.length)).abs()
                < 1e-12 * r
        );
        j.length = 0.0;
        assert!(sns_prefactor(&j, &c).is_err());
    }
}
