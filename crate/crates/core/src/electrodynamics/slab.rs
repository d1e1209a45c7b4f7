use num_complex::Complex64;

use super::{FieldError, FieldProfile, SlabConfig};
use crate::constants::VACUUM_PERMEABILITY;
use crate::materials::Material;

const IDENTITY_TOL: f64 = 1e-12;

/// `cosh(kx) / cosh(kd)` for `Re k >= 0`, `|x| <= d`, without overflow.
fn cosh_ratio(k: Complex64, x: f64, d: f64) -> Complex64 {
    let ax = x.abs();
    let num = 1.0 + (-2.0 * k * ax).exp();
    let den = 1.0 + (-2.0 * k * d).exp();
    (k * (ax - d)).exp() * num / den
}

/// `sinh(kx) / sinh(kd)` for `Re k >= 0`, `|x| <= d`. Tends to `x/d` as `k -> 0`.
fn sinh_ratio(k: Complex64, x: f64, d: f64) -> Complex64 {
    if (k * d).norm() < 1e-4 {
        let k2 = k * k;
        return (x / d) * (1.0 + k2 * (x * x - d * d) / 6.0);
    }
    let ax = x.abs();
    let num = 1.0 - (-2.0 * k * ax).exp();
    let den = 1.0 - (-2.0 * k * d).exp();
    x.signum() * (k * (ax - d)).exp() * num / den
}

fn check_positions(xs: &[f64], d: f64) -> Result<(), FieldError> {
    match xs.iter().find(|x| !(x.abs() <= d * (1.0 + IDENTITY_TOL))) {
        Some(&x) => Err(FieldError::OutsideSlab { x, d }),
        None => Ok(()),
    }
}

/// Symmetric slab solution for a decay constant `k`: `B = B0 cosh(kx)/cosh(kd)`
/// and the circulating current `J = (k/mu0) B0 sinh(kx)/sinh(kd)`.
fn profile_for(k: Complex64, cfg: &SlabConfig, xs: &[f64]) -> FieldProfile {
    let d = cfg.half_thickness;
    let j_scale = k * cfg.b0 / VACUUM_PERMEABILITY;
    let b = xs
        .iter()
        .map(|&x| cfg.b0 * cosh_ratio(k, x.clamp(-d, d), d))
        .collect();
    let j = xs
        .iter()
        .map(|&x| j_scale * sinh_ratio(k, x.clamp(-d, d), d))
        .collect();
    FieldProfile {
        x: xs.to_vec(),
        b,
        j,
    }
}

/// Magnetic diffusion into a normal conducting slab.
///
/// `B = B0 cosh((1+j) x / delta) / cosh((1+j) d / delta)` with the skin depth
/// `delta = sqrt(2 / (w mu0 sigma))`.
pub fn normal_slab_profile(cfg: &SlabConfig, xs: &[f64]) -> Result<FieldProfile, FieldError> {
    cfg.validate()?;
    let sigma = cfg.material.sigma_n;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(FieldError::Config(format!(
            "normal-state conductivity must be positive, got {sigma} S/m"
        )));
    }
    check_positions(xs, cfg.half_thickness)?;
    let q = (cfg.omega * VACUUM_PERMEABILITY * sigma / 2.0).sqrt();
    Ok(profile_for(Complex64::new(q, q), cfg, xs))
}

/// London screening in a superconducting slab.
///
/// The decay constant is `sqrt(mu0 / Lambda) = 1 / lambda_L`; magnitudes do
/// not depend on frequency.
pub fn super_slab_profile(cfg: &SlabConfig, xs: &[f64]) -> Result<FieldProfile, FieldError> {
    cfg.validate()?;
    let limit = cfg.material.normal_transition_b(cfg.temperature)?;
    if cfg.b0.abs() >= limit {
        return Err(FieldError::PhaseViolation {
            b0: cfg.b0,
            limit,
            temperature: cfg.temperature,
        });
    }
    check_positions(xs, cfg.half_thickness)?;
    let k = (VACUUM_PERMEABILITY / cfg.material.london_coefficient()).sqrt();
    Ok(profile_for(Complex64::new(k, 0.0), cfg, xs))
}

/// Plane-wave decay constant of the two-fluid model,
/// `kappa^2 = (1 + jw(mu0 sigma lambda^2 + tau_s)) / (lambda^2 (1 + jw tau_s))`,
/// on the branch with `Re kappa > 0`.
pub fn two_fluid_wavenumber(material: &Material, omega: f64) -> Complex64 {
    let lambda2 = material.lambda_l * material.lambda_l;
    let jw = Complex64::new(0.0, omega);
    let num = 1.0 + jw * (VACUUM_PERMEABILITY * material.sigma_n * lambda2 + material.tau_s);
    let den = lambda2 * (1.0 + jw * material.tau_s);
    (num / den).sqrt()
}

/// Slab profile with the two-fluid decay constant. Reduces to the London
/// profile at `w = 0` and to normal diffusion as `lambda_L` grows.
pub fn two_fluid_slab_profile(cfg: &SlabConfig, xs: &[f64]) -> Result<FieldProfile, FieldError> {
    cfg.validate()?;
    check_positions(xs, cfg.half_thickness)?;
    let kappa = two_fluid_wavenumber(&cfg.material, cfg.omega);
    Ok(profile_for(kappa, cfg, xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrodynamics::{skin_depth, slab_grid};
    use crate::materials::builtin;

    fn lead() -> Material {
        builtin("pb").unwrap()
    }

    fn cfg(material: Material, d: f64, omega: f64) -> SlabConfig {
        SlabConfig {
            half_thickness: d,
            material,
            b0: 1e-3,
            omega,
            temperature: 2.0,
        }
    }

    #[test]
    fn ratios_match_direct_evaluation() {
        let k = Complex64::new(0.7, 0.3);
        for &(x, d) in &[(0.3, 1.0), (-0.9, 1.0), (0.0, 2.0), (1.5, 1.5)] {
            let direct = (k * x).cosh() / (k * d).cosh();
            assert!((cosh_ratio(k, x, d) - direct).norm() < 1e-14);
            let direct = (k * x).sinh() / (k * d).sinh();
            assert!((sinh_ratio(k, x, d) - direct).norm() < 1e-14);
        }
        let tiny = Complex64::new(1e-9, 1e-9);
        assert!((sinh_ratio(tiny, 0.25, 1.0) - 0.25).norm() < 1e-15);
    }

    #[test]
    fn static_field_penetrates_normal_slab() {
        let c = cfg(lead(), 1e-3, 0.0);
        let p = normal_slab_profile(&c, &slab_grid(1e-3, 11)).unwrap();
        for (b, j) in p.b.iter().zip(&p.j) {
            assert_eq!(*b, Complex64::new(c.b0, 0.0));
            assert_eq!(j.norm(), 0.0);
        }
    }

    #[test]
    fn low_frequency_converges_to_b0() {
        let c = cfg(lead(), 1e-3, 1e-6);
        let p = normal_slab_profile(&c, &slab_grid(1e-3, 21)).unwrap();
        for b in &p.b {
            assert!((b / c.b0 - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn boundary_is_pinned_and_symmetry_holds() {
        let m = lead();
        let delta = skin_depth(1e4, m.sigma_n);
        let c = cfg(m, 3.0 * delta, 1e4);
        let xs = slab_grid(c.half_thickness, 41);
        let p = normal_slab_profile(&c, &xs).unwrap();
        assert!((p.b[0].norm() - c.b0).abs() < 1e-15);
        assert!((p.b[40].norm() - c.b0).abs() < 1e-15);
        for i in 0..20 {
            assert!((p.b[i] - p.b[40 - i]).norm() < 1e-15);
            assert!((p.j[i] + p.j[40 - i]).norm() < 1e-12 * p.j[40].norm());
        }
    }

    #[test]
    fn positions_outside_slab_are_rejected() {
        let c = cfg(lead(), 1e-3, 10.0);
        assert!(matches!(
            normal_slab_profile(&c, &[0.0, 2e-3]),
            Err(FieldError::OutsideSlab { .. })
        ));
        let mut insulating = c.clone();
        insulating.material.sigma_n = 0.0;
        assert!(matches!(
            normal_slab_profile(&insulating, &[0.0]),
            Err(FieldError::Config(_))
        ));
    }

    #[test]
    fn london_screening_closed_form() {
        let m = lead();
        let lambda = m.lambda_l;
        let c = cfg(m, 10.0 * lambda, 1e3);
        let p =
            super_slab_profile(&c, &[0.0, c.half_thickness - lambda, c.half_thickness]).unwrap();
        let centre = p.b[0].norm() / c.b0;
        assert!((centre - 1.0 / 10f64.cosh()).abs() / centre < 1e-12);
        assert!((centre - 9.08e-5).abs() < 0.01e-5);
        // cosh(9)/cosh(10) differs from e^-1 by ~(1 - e^-18) / (1 + e^-20)
        assert!((p.b[1].norm() / c.b0 - (-1f64).exp()).abs() < 1e-7);
        assert!((p.b[2].norm() - c.b0).abs() < 1e-15);
    }

    #[test]
    fn london_profile_is_frequency_independent() {
        let m = lead();
        let xs = slab_grid(5.0 * m.lambda_l, 17);
        let a = super_slab_profile(&cfg(m.clone(), 5.0 * m.lambda_l, 1.0), &xs).unwrap();
        let b = super_slab_profile(&cfg(m.clone(), 5.0 * m.lambda_l, 1e9), &xs).unwrap();
        for (p, q) in a.b.iter().zip(&b.b) {
            assert!((p - q).norm() <= 1e-12 * p.norm());
        }
    }

    #[test]
    fn field_above_critical_is_a_phase_violation() {
        let m = lead();
        let mut c = cfg(m.clone(), 10.0 * m.lambda_l, 0.0);
        c.b0 = 0.2;
        assert!(matches!(
            super_slab_profile(&c, &[0.0]),
            Err(FieldError::PhaseViolation { .. })
        ));
        c.b0 = 1e-3;
        c.temperature = 8.0;
        assert!(matches!(
            super_slab_profile(&c, &[0.0]),
            Err(FieldError::PhaseViolation { .. })
        ));
    }

    #[test]
    fn two_fluid_limits() {
        let m = lead();
        let k0 = two_fluid_wavenumber(&m, 0.0);
        assert!((k0 - 1.0 / m.lambda_l).norm() * m.lambda_l < 1e-12);

        let mut superfluid = m.clone();
        superfluid.sigma_n = 0.0;
        superfluid.tau_s = 0.0;
        for w in [1.0, 1e6, 1e12] {
            let k = two_fluid_wavenumber(&superfluid, w);
            assert!((k * m.lambda_l - 1.0).norm() < 1e-12);
        }

        let omega = 1e4;
        let mut weak = m.clone();
        weak.tau_s = 0.0;
        weak.lambda_l = 1e6 * skin_depth(omega, m.sigma_n);
        let k = two_fluid_wavenumber(&weak, omega);
        let diffusion = Complex64::new(0.0, omega * VACUUM_PERMEABILITY * m.sigma_n);
        assert!((k * k - diffusion).norm() / diffusion.norm() < 1e-6);
    }

    #[test]
    fn two_fluid_profile_reduces_to_london_at_dc() {
        let m = lead();
        let c = cfg(m.clone(), 8.0 * m.lambda_l, 0.0);
        let xs = slab_grid(c.half_thickness, 9);
        let a = two_fluid_slab_profile(&c, &xs).unwrap();
        let b = super_slab_profile(&c, &xs).unwrap();
        for (p, q) in a.b.iter().zip(&b.b) {
            assert!((p - q).norm() < 1e-12 * c.b0);
        }
    }
}
