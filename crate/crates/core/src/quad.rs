//! Adaptive integration on a finite range with user breakpoints.
//!
//! Each panel is integrated with double-exponential quadrature; the panel
//! with the largest error estimate is bisected until the summed estimate
//! meets the tolerance.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub absolute: f64,
    pub relative: f64,
    /// Maximum bisection depth below each breakpoint panel.
    pub max_depth: u32,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self {
            absolute: 0.0,
            relative: 1e-10,
            max_depth: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub panels: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error(
        "quadrature did not converge on [{lo:e}, {hi:e}]: estimate {value:e} with error {error_estimate:e} \
         exceeds tolerance {tolerance:e} after {evaluations} evaluations"
    )]
    NotConverged {
        lo: f64,
        hi: f64,
        value: f64,
        error_estimate: f64,
        tolerance: f64,
        evaluations: u64,
    },
    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },
    #[error("integration range must be finite and ordered, got [{lo}, {hi}]")]
    Range { lo: f64, hi: f64 },
}

struct Panel {
    lo: f64,
    hi: f64,
    depth: u32,
    value: f64,
    error: f64,
}

/// Integrate `f` over `[lo, hi]`, splitting first at every breakpoint that
/// lies strictly inside the range.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: QuadTolerance,
) -> Result<QuadResult, QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(QuadError::Range { lo, hi });
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);

    let rough: f64 = edges
        .windows(2)
        .map(|w| {
            quadrature::double_exponential::integrate(&f, w[0], w[1], 1e-6)
                .integral
                .abs()
        })
        .sum();
    let target = tol
        .absolute
        .max(tol.relative * rough)
        .max(f64::MIN_POSITIVE);

    let mut panels = Vec::with_capacity(edges.len() + 16);
    let mut evaluations = 0u64;
    let mut eval = |lo: f64, hi: f64, depth: u32| -> Result<Panel, QuadError> {
        let r = quadrature::double_exponential::integrate(&f, lo, hi, 0.1 * target);
        evaluations += u64::from(r.num_function_evaluations);
        if !r.integral.is_finite() {
            return Err(QuadError::NonFinite { x: 0.5 * (lo + hi) });
        }
        Ok(Panel {
            lo,
            hi,
            depth,
            value: r.integral,
            error: r.error_estimate,
        })
    };
    for w in edges.windows(2) {
        if w[1] > w[0] {
            panels.push(eval(w[0], w[1], 0)?);
        }
    }
    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i);
        let Some(worst) = worst.filter(|_| total_error > target) else {
            return Ok(QuadResult {
                value: panels.iter().map(|p| p.value).sum(),
                error_estimate: total_error,
                evaluations,
                panels: panels.len(),
            });
        };
        let p = panels.swap_remove(worst);
        if p.depth >= tol.max_depth {
            return Err(QuadError::NotConverged {
                lo: p.lo,
                hi: p.hi,
                value: panels.iter().map(|q| q.value).sum::<f64>() + p.value,
                error_estimate: total_error,
                tolerance: target,
                evaluations,
            });
        }
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(eval(p.lo, mid, p.depth + 1)?);
        panels.push(eval(mid, p.hi, p.depth + 1)?);
    }
}

/// Integrate `f` over `[lo, inf)` through the map `x = lo + t / (1 - t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    tol: QuadTolerance,
) -> Result<QuadResult, QuadError> {
    let mapped = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        f(lo + t / s) / (s * s)
    };
    integrate(mapped, 0.0, 1.0, &[], tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_kink() {
        let r = integrate(|x| x * x, 0.0, 3.0, &[], QuadTolerance::default()).unwrap();
        assert!((r.value - 9.0).abs() < 1e-12);
        let r = integrate(
            |x: f64| x.abs(),
            -1.0,
            2.0,
            &[0.0],
            QuadTolerance::default(),
        )
        .unwrap();
        assert!((r.value - 2.5).abs() < 1e-12);
        assert_eq!(r.panels, 2);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(
            |x: f64| 1.0 / x.sqrt(),
            0.0,
            4.0,
            &[],
            QuadTolerance::default(),
        )
        .unwrap();
        assert!((r.value - 4.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn semi_infinite_range() {
        let r = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, QuadTolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 0.0, QuadTolerance::default())
            .unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn fermi_step() {
        let kt = 1e-3;
        let f = |x: f64| 1.0 / ((x / kt).exp() + 1.0);
        let r = integrate(f, -1.0, 1.0, &[0.0], QuadTolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bad_range_and_depth() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, &[], QuadTolerance::default()),
            Err(QuadError::Range { .. })
        ));
        let tight = QuadTolerance {
            absolute: 0.0,
            relative: 1e-300,
            max_depth: 1,
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &[], tight).unwrap_err();
        assert!(matches!(err, QuadError::NotConverged { .. }));
        assert!(err.to_string().contains("did not converge"));
    }
}
