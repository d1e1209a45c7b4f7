use std::f64::consts::{PI, SQRT_2};

use crate::constants::VACUUM_PERMEABILITY;

/// Long-solenoid field `B = mu n I`, with `n` turns per metre.
///
/// Fringing at the solenoid ends is ignored.
pub fn solenoid_field(turns_per_meter: f64, current: f64, mu: f64) -> f64 {
    mu * turns_per_meter * current
}

/// Field at the centre of a square loop of side `side` whose two arms carry
/// a differential current `|I1 - I2| / 2 = half_difference`:
/// `B = 2 sqrt(2) mu0 i / (pi L)`.
pub fn square_loop_center_field(side: f64, half_difference: f64) -> f64 {
    2.0 * SQRT_2 * VACUUM_PERMEABILITY * half_difference / (PI * side)
}

/// Inverse of [`square_loop_center_field`]: `i = pi L B / (2 sqrt(2) mu0)`.
pub fn square_loop_current(side: f64, field: f64) -> f64 {
    PI * side * field / (2.0 * SQRT_2 * VACUUM_PERMEABILITY)
}

/// Centre field of a circular loop, `B = mu0 I / (2R)`.
pub fn circular_loop_center_field(radius: f64, current: f64) -> f64 {
    VACUUM_PERMEABILITY * current / (2.0 * radius)
}

/// Inverse of [`circular_loop_center_field`].
pub fn circular_loop_current(radius: f64, field: f64) -> f64 {
    2.0 * radius * field / VACUUM_PERMEABILITY
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;

    #[test]
    fn solenoid_is_linear() {
        assert_eq!(solenoid_field(1e9, 0.0, VACUUM_PERMEABILITY), 0.0);
        let b = solenoid_field(1e9, 1e-12, VACUUM_PERMEABILITY);
        assert!((b - 1.2566e-9).abs() < 1e-13);
        assert!((solenoid_field(1e9, 2e-12, VACUUM_PERMEABILITY) - 2.0 * b).abs() < 1e-24);
    }

    #[test]
    fn square_loop_inverse_of_lsb_field() {
        assert_eq!(square_loop_center_field(200e-6, 0.0), 0.0);
        let side = 200e-6;
        let b_lsb = PhysicalConstants::codata().phi0() / (side * side);
        assert!((b_lsb - 5.170e-8).abs() < 0.001e-8);
        let i = square_loop_current(side, b_lsb);
        // pi * 200e-6 * 5.1696e-8 / (2 sqrt(2) * 1.25664e-6)
        assert!((i - 9.1386e-6).abs() < 0.0005e-6, "i = {i}");
    }

    #[test]
    fn square_loop_round_trip() {
        for &(side, b) in &[(1e-6, 1e-12), (200e-6, 5.17e-8), (1e-2, 3.0)] {
            let back = square_loop_center_field(side, square_loop_current(side, b));
            assert!((back - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn circular_loop_lsb_current() {
        let i = circular_loop_current(100e-6, 2.07e-15);
        assert!((i - 3.3e-13).abs() < 0.05e-13, "i = {i}");
        assert!(i < 5e-12);
        assert!((circular_loop_center_field(100e-6, i) - 2.07e-15).abs() < 1e-27);
    }
}
