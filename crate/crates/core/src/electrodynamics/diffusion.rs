//! Time-domain Crank–Nicolson solve of `(mu sigma d/dt - d^2/dx^2) B = 0` on a
//! slab driven with `B(±d, t) = B0 cos(wt)`.
//!
//! This is a verification tool for the closed-form normal-slab profile. It
//! shares no code with [`super::normal_slab_profile`].

use std::f64::consts::PI;

use num_complex::Complex64;

/// Parameters of one driven diffusion run.
#[derive(Debug, Clone)]
pub struct DrivenSlab {
    pub half_thickness: f64,
    /// Product `mu sigma` (s/m^2).
    pub mu_sigma: f64,
    pub omega: f64,
    pub b0: f64,
    /// Grid points including both boundaries.
    pub grid_points: usize,
    /// Drive periods simulated; the phasor is taken from the last one.
    pub periods: usize,
    pub steps_per_period: usize,
}

impl DrivenSlab {
    /// Grid positions and the complex phasor `B_hat(x)` such that
    /// `B(x, t) ~ Re{B_hat(x) e^{jwt}}` over the final period.
    pub fn steady_state_phasor(&self) -> (Vec<f64>, Vec<Complex64>) {
        assert!(self.grid_points >= 3 && self.periods >= 1 && self.steps_per_period >= 3);
        let n = self.grid_points;
        let d = self.half_thickness;
        let h = 2.0 * d / (n - 1) as f64;
        let dt = 2.0 * PI / self.omega / self.steps_per_period as f64;
        let r = dt / (self.mu_sigma * h * h);

        let m = n - 2;
        let lower = -r / 2.0;
        let diag = 1.0 + r;
        // Forward-elimination factors of the constant tridiagonal matrix.
        let mut c_prime = vec![0.0; m];
        let mut denom = vec![0.0; m];
        denom[0] = diag;
        c_prime[0] = lower / diag;
        for i in 1..m {
            denom[i] = diag - lower * c_prime[i - 1];
            c_prime[i] = lower / denom[i];
        }

        let drive = |step: usize| self.b0 * (self.omega * step as f64 * dt).cos();
        let mut b = vec![self.b0; m];
        let mut rhs = vec![0.0; m];
        let mut phasor = vec![Complex64::new(0.0, 0.0); m];
        let total = self.periods * self.steps_per_period;
        let sample_from = total - self.steps_per_period;

        for step in 0..total {
            let g_now = drive(step);
            let g_next = drive(step + 1);
            for i in 0..m {
                let left = if i == 0 { g_now } else { b[i - 1] };
                let right = if i == m - 1 { g_now } else { b[i + 1] };
                rhs[i] = (1.0 - r) * b[i] + (r / 2.0) * (left + right);
            }
            rhs[0] += (r / 2.0) * g_next;
            rhs[m - 1] += (r / 2.0) * g_next;

            rhs[0] /= denom[0];
            for i in 1..m {
                rhs[i] = (rhs[i] - lower * rhs[i - 1]) / denom[i];
            }
            b[m - 1] = rhs[m - 1];
            for i in (0..m - 1).rev() {
                b[i] = rhs[i] - c_prime[i] * b[i + 1];
            }

            let sample = step + 1;
            if sample > sample_from {
                let rot = Complex64::from_polar(1.0, -self.omega * sample as f64 * dt);
                for (p, &v) in phasor.iter_mut().zip(&b) {
                    *p += v * rot;
                }
            }
        }

        let scale = 2.0 / self.steps_per_period as f64;
        let mut out = Vec::with_capacity(n);
        out.push(Complex64::new(self.b0, 0.0));
        out.extend(phasor.into_iter().map(|p| p * scale));
        out.push(Complex64::new(self.b0, 0.0));
        let xs = (0..n).map(|i| -d + i as f64 * h).collect();
        (xs, out)
    }
}
