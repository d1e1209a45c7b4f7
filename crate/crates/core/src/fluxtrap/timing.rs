use std::f64::consts::LN_2;

/// Settling time of a classical N-bit converter to half an LSB,
/// `tau (N + 1) ln 2`.
pub fn settle_time_classical(n_bits: u32, tau: f64) -> f64 {
    tau * (n_bits as f64 + 1.0) * LN_2
}

/// Settling of the flux-trap integrator, `16 tau_cooper ln 2 + (2 N + 1) tau_ecoil`,
/// one Cooper-pair settling followed by `2N + 1` sequential E-coil transitions.
pub fn settle_time_device(tau_cooper: f64, n_segments: u32, tau_ecoil: f64) -> f64 {
    16.0 * tau_cooper * LN_2 + (2.0 * n_segments as f64 + 1.0) * tau_ecoil
}
