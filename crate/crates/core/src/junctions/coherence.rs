use num_complex::Complex64;

use super::JunctionError;

/// Coherence factors `(U, V)` of a uniform superconductor at excitation
/// energy `eps > 0`.
///
/// Above the gap `U^2 = (1 + sqrt(eps^2 - Delta^2)/eps)/2` and both are real.
/// Below the gap the square root turns imaginary and the principal complex
/// root is taken, so `U^2 + V^2 = 1` holds in both regimes.
pub fn coherence_factors(eps: f64, delta: f64) -> Result<(Complex64, Complex64), JunctionError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(JunctionError::Domain(format!(
            "excitation energy must be positive, got {eps}"
        )));
    }
    let delta = delta.abs();
    let half = |z: Complex64| (z / 2.0).sqrt();
    if eps >= delta {
        let s = (eps * eps - delta * delta).sqrt() / eps;
        Ok((
            Complex64::new(((1.0 + s) / 2.0).sqrt(), 0.0),
            Complex64::new(((1.0 - s) / 2.0).sqrt(), 0.0),
        ))
    } else {
        let s = Complex64::new(0.0, (delta * delta - eps * eps).sqrt() / eps);
        Ok((half(1.0 + s), half(1.0 - s)))
    }
}

/// Excitation energy and coherence weights of a disordered superconductor
/// with constant gap for a single-particle level `xi`.
///
/// No impurity parameter enters: with a uniform gap, non-magnetic
/// disorder leaves the spectrum unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirtySpectrum {
    pub energy: f64,
    pub u2: f64,
    pub v2: f64,
}

pub fn dirty_spectrum(xi: f64, delta: f64) -> DirtySpectrum {
    let energy = xi.hypot(delta);
    if energy == 0.0 {
        return DirtySpectrum {
            energy,
            u2: 0.5,
            v2: 0.5,
        };
    }
    let r = xi / energy;
    DirtySpectrum {
        energy,
        u2: (1.0 + r) / 2.0,
        v2: (1.0 - r) / 2.0,
    }
}
