use super::FluxTrapError;

/// Flux change of the amplifying coil, split into the signal part and the
/// fixed part that can be calibrated out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledCoilTransfer {
    /// `N (1 - eps) lambda0`.
    pub signal: f64,
    /// `(N - 1)(1 - eps) L i`.
    pub calibration: f64,
    pub total: f64,
}

/// Flux moved into the amplifying coil of `n_loops` series superconducting
/// loops when their input flux drops from `lambda0` to `eps * lambda0`.
pub fn coupled_coil_delta_lambda(
    n_loops: usize,
    lambda0: f64,
    inductance: f64,
    current: f64,
    epsilon: f64,
) -> Result<CoupledCoilTransfer, FluxTrapError> {
    if n_loops == 0 {
        return Err(FluxTrapError::Domain(
            "at least one loop is required".into(),
        ));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(FluxTrapError::Domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    let n = n_loops as f64;
    let keep = 1.0 - epsilon;
    let signal = n * keep * lambda0;
    let calibration = (n - 1.0) * keep * inductance * current;
    Ok(CoupledCoilTransfer {
        signal,
        calibration,
        total: signal + calibration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Conserved total linkage before and after the input change, solved for
    /// the amplifier flux in each state.
    fn conservation_oracle(n: usize, lambda0: f64, l: f64, i: f64, eps: f64) -> f64 {
        let n = n as f64;
        let k = 2.0 * (n * lambda0 + (n - 1.0) * l * i);
        let initial = k - (n * lambda0 + (n - 1.0) * l * i);
        let final_ = k - (n * eps * lambda0 + (n - 1.0) * eps * l * i);
        final_ - initial
    }

    #[test]
    fn worked_example() {
        let t = coupled_coil_delta_lambda(4, 1.0, 1.0, 0.25, 0.0).unwrap();
        assert_eq!(t.signal, 4.0);
        assert_eq!(t.calibration, 0.75);
        assert_eq!(t.total, 4.75);
    }

    #[test]
    fn trivial_limits() {
        assert_eq!(
            coupled_coil_delta_lambda(5, 2.0, 1.0, 0.3, 1.0)
                .unwrap()
                .total,
            0.0
        );
        let one = coupled_coil_delta_lambda(1, 2.5, 3.0, 7.0, 0.0).unwrap();
        assert_eq!(one.total, 2.5);
        assert_eq!(one.calibration, 0.0);
    }

    #[test]
    fn bad_inputs() {
        assert!(coupled_coil_delta_lambda(0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(coupled_coil_delta_lambda(2, 1.0, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn magnitude_matches_conservation() {
        for &(n, lam, l, i, eps) in &[
            (4, 1.0, 1.0, 0.25, 0.0),
            (7, 3e-15, 2e-9, 1e-6, 0.3),
            (2, -1.0, 0.5, 2.0, 0.9),
        ] {
            let t = coupled_coil_delta_lambda(n, lam, l, i, eps).unwrap().total;
            let oracle = conservation_oracle(n, lam, l, i, eps);
            assert!(
                (t - oracle).abs() <= 1e-12 * t.abs().max(1e-30),
                "{t} vs {oracle}"
            );
        }
    }
}
