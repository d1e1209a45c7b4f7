use fluxquant::constants::PhysicalConstants;
use fluxquant::junctions::{
    btk_probabilities, coherence_factors, nis_current, nis_current_low_t, normal_coherence_length,
    sns_current, JunctionConfig,
};
use fluxquant::materials::builtin;
use proptest::prelude::*;

fn aluminium(z: f64, kt_over_delta: f64) -> (JunctionConfig, PhysicalConstants) {
    let c = PhysicalConstants::codata();
    let mut j = JunctionConfig::for_material(builtin("al").unwrap(), &c);
    j.barrier = z;
    j.temperature = kt_over_delta * j.delta / c.kb();
    (j, c)
}

#[test]
fn coherence_identities_in_both_regimes() {
    let delta = 1.0;
    for k in 1..200 {
        let eps = 0.02 * k as f64;
        let (u, v) = coherence_factors(eps, delta).unwrap();
        assert!((u * u + v * v - 1.0).norm() < 1e-12, "eps = {eps}");
        if eps < delta {
            let sum = u.norm_sqr() + v.norm_sqr();
            assert!(
                (sum - delta / eps).abs() < 1e-12 * (delta / eps),
                "eps = {eps}"
            );
        }
    }
}

#[test]
fn sns_decay_slope() {
    let c = PhysicalConstants::codata();
    let mut j = JunctionConfig::for_material(builtin("nb").unwrap(), &c);
    j.temperature = 4.2;
    let xi = normal_coherence_length(j.material.fermi_velocity, j.temperature, &c).unwrap();
    j.length = xi;
    assert_eq!(sns_current(&j, 0.0, &c).unwrap(), 0.0);
    // The prefactor carries 1/d, so ln(I d) is the linear function of d.
    let points: Vec<(f64, f64)> = (1..=8)
        .map(|k| {
            j.length = k as f64 * 0.5 * xi;
            let i = sns_current(&j, std::f64::consts::FRAC_PI_2, &c).unwrap();
            (j.length, (i * j.length).ln())
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope * xi + 1.0).abs() < 1e-6, "{}", slope * xi);

    j.length = 2.0 * xi;
    let i1 = sns_current(&j, std::f64::consts::FRAC_PI_2, &c).unwrap() * j.length;
    j.length = 3.0 * xi;
    let i2 = sns_current(&j, std::f64::consts::FRAC_PI_2, &c).unwrap() * j.length;
    assert!((i2 / i1 - (-1f64).exp()).abs() < 1e-12);
}

#[test]
fn nis_blocked_below_gap_at_low_temperature() {
    // Only two-particle Andreev transport survives below the gap; it falls
    // as 1/Z^4 against 1/Z^2 for the single-particle current above it.
    let ratio = |z: f64, frac: f64| {
        let (j, c) = aluminium(z, 1.0 / 200.0);
        let v = frac * j.delta / c.e();
        assert_eq!(nis_current_low_t(v, &j, &c), 0.0);
        let above = nis_current(2.0 * j.delta / c.e(), &j, &c).unwrap();
        nis_current(v, &j, &c).unwrap() / above
    };
    for frac in [0.1, 0.5, 0.9] {
        let r50 = ratio(50.0, frac);
        assert!(r50.abs() < 1e-3, "{frac}: {r50}");
        let r100 = ratio(100.0, frac);
        assert!((r100 / r50 - 0.25).abs() < 0.05, "{frac}: {}", r100 / r50);
    }
}

#[test]
fn quadrature_matches_tunnel_limit() {
    let (j, c) = aluminium(10.0, 1.0 / 50.0);
    for k in 0..=38 {
        let m = 1.1 + 0.05 * k as f64;
        let v = m * j.delta / c.e();
        let full = nis_current(v, &j, &c).unwrap();
        let approx = nis_current_low_t(v, &j, &c);
        assert!((full / approx - 1.0).abs() < 0.01, "eV = {m} Delta");
    }
}

#[test]
fn nis_current_is_odd_in_bias() {
    let (j, c) = aluminium(1.0, 0.1);
    for m in [0.3, 1.2, 2.5] {
        let v = m * j.delta / c.e();
        let plus = nis_current(v, &j, &c).unwrap();
        let minus = nis_current(-v, &j, &c).unwrap();
        assert!((plus + minus).abs() < 1e-8 * plus.abs(), "{m}");
    }
}

proptest! {
    #[test]
    fn btk_probability_conservation(eps in 0.0f64..5.0, z in 0.0f64..20.0) {
        let p = btk_probabilities(eps, 1.0, z);
        prop_assert!((p.a + p.b + p.c + p.d - 1.0).abs() < 1e-12);
        prop_assert!(p.a >= 0.0 && p.b >= 0.0 && p.c >= 0.0 && p.d >= 0.0);
    }

    #[test]
    fn unit_sum_of_coherence_squares(eps in 1e-3f64..10.0) {
        let (u, v) = coherence_factors(eps, 1.0).unwrap();
        prop_assert!((u * u + v * v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn sns_phase_symmetry(phi in -10.0f64..10.0) {
        let c = PhysicalConstants::codata();
        let mut j = JunctionConfig::for_material(builtin("nb").unwrap(), &c);
        j.temperature = 4.2;
        j.length = 100e-9;
        let a = sns_current(&j, phi, &c).unwrap();
        let b = sns_current(&j, -phi, &c).unwrap();
        prop_assert!((a + b).abs() <= 1e-15 * a.abs().max(1e-300));
    }
}
