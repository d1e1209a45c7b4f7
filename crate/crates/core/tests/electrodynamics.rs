use fluxquant::constants::VACUUM_PERMEABILITY;
use fluxquant::electrodynamics::diffusion::DrivenSlab;
use fluxquant::electrodynamics::{
    normal_slab_profile, skin_depth, super_slab_profile, two_fluid_wavenumber, SlabConfig,
};
use fluxquant::materials::builtin;
use num_complex::Complex64;
use proptest::prelude::*;

fn normal_config(sigma: f64, omega: f64, thickness_in_skin_depths: f64) -> SlabConfig {
    let mut material = builtin("al").unwrap();
    material.sigma_n = sigma;
    let d = thickness_in_skin_depths * skin_depth(omega, sigma);
    SlabConfig {
        half_thickness: d,
        material,
        b0: 1e-3,
        omega,
        temperature: 4.2,
    }
}

fn max_interior_error(cfg: &SlabConfig, periods: usize) -> f64 {
    let run = DrivenSlab {
        half_thickness: cfg.half_thickness,
        mu_sigma: VACUUM_PERMEABILITY * cfg.material.sigma_n,
        omega: cfg.omega,
        b0: cfg.b0,
        grid_points: 401,
        periods,
        steps_per_period: 1000,
    };
    let (xs, numeric) = run.steady_state_phasor();
    let closed = normal_slab_profile(cfg, &xs).unwrap();
    numeric[1..xs.len() - 1]
        .iter()
        .zip(&closed.b[1..xs.len() - 1])
        .map(|(n, c)| (n - c).norm() / c.norm())
        .fold(0.0, f64::max)
}

#[test]
fn crank_nicolson_matches_closed_form() {
    for (sigma, omega, ratio) in [
        (3.7e7, 2.0 * std::f64::consts::PI * 50.0, 1.0),
        (1e6, 1e4, 2.0),
        (5e7, 1e3, 3.0),
    ] {
        let cfg = normal_config(sigma, omega, ratio);
        let err = max_interior_error(&cfg, 15);
        assert!(err < 1e-3, "d = {ratio} delta: {err}");
    }
}

#[test]
fn thick_slab_needs_long_settling() {
    let cfg = normal_config(1e7, 1e3, 5.0);
    assert!(max_interior_error(&cfg, 60) < 1e-3);
}

#[test]
fn london_centre_field() {
    let material = builtin("pb").unwrap();
    let lambda = material.lambda_l;
    for ratio in [0.5, 1.0, 3.0, 10.0] {
        let cfg = SlabConfig {
            half_thickness: ratio * lambda,
            material: material.clone(),
            b0: 1e-3,
            omega: 1e6,
            temperature: 1.0,
        };
        let p = super_slab_profile(&cfg, &[0.0]).unwrap();
        let got = p.b[0].norm() / cfg.b0;
        assert!((got * ratio.cosh() - 1.0).abs() < 1e-12, "{ratio}");
    }
}

#[test]
fn two_fluid_limits() {
    let mut m = builtin("nb").unwrap();
    let dc = two_fluid_wavenumber(&m, 1e-9);
    assert!((dc.re * m.lambda_l - 1.0).abs() < 1e-6 && dc.im.abs() * m.lambda_l < 1e-6);
    m.tau_s = 0.0;
    m.lambda_l = 1e3;
    let omega = 1e4;
    let kappa = two_fluid_wavenumber(&m, omega);
    let normal = (Complex64::new(0.0, omega * VACUUM_PERMEABILITY * m.sigma_n)).sqrt();
    assert!((kappa - normal).norm() / normal.norm() < 1e-6);
}

proptest! {
    #[test]
    fn normal_profile_is_even_and_screened(ratio in 0.1f64..6.0, x in 0.0f64..1.0) {
        let cfg = normal_config(1e7, 1e3, ratio);
        let d = cfg.half_thickness;
        let p = normal_slab_profile(&cfg, &[x * d, -x * d]).unwrap();
        prop_assert!((p.b[0] - p.b[1]).norm() <= 1e-12 * cfg.b0);
        prop_assert!(p.b[0].norm() <= cfg.b0 * (1.0 + 1e-12));
    }
}
