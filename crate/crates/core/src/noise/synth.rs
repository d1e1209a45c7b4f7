use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};
use rustfft::FftPlanner;

use super::{angular, flicker_psd, NoiseError, NoiseModel};

/// Relaxation times per decade in the telegraph bank.
const PROCESSES_PER_DECADE: f64 = 20.0;
const MIN_SAMPLES: usize = 1 << 12;

const TELEGRAPH_STREAM: u64 = 0;
const WHITE_STREAM: u64 = 1;
const SPECTRAL_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynthesisMethod {
    /// Superposed random telegraph signals.
    #[default]
    Telegraph,
    /// Gaussian noise shaped in the frequency domain.
    Spectral,
}

/// Symmetric two-state process `±amplitude` with autocorrelation
/// `amplitude^2 e^{-|t| / tau}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphProcess {
    pub tau: f64,
    pub amplitude: f64,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Telegraph processes with log-uniform relaxation times over
/// `[tau1, tau2]`, one per equal cell in `ln tau`. Each carries variance
/// `k' d(ln tau) / 4` so that the bank's spectrum approximates the flicker PSD.
pub fn telegraph_bank(model: &NoiseModel) -> Result<Vec<TelegraphProcess>, NoiseError> {
    model.validate()?;
    let span = (model.tau2 / model.tau1).ln();
    let decades = span / std::f64::consts::LN_10;
    if decades < 1.0 {
        return Err(NoiseError::Config(format!(
            "relaxation band spans {decades:.3} decades; at least one is required"
        )));
    }
    let count = (PROCESSES_PER_DECADE * decades).ceil() as usize;
    let cell = span / count as f64;
    let amplitude = (model.kprime * cell / 4.0).sqrt();
    Ok((0..count)
        .map(|j| TelegraphProcess {
            tau: model.tau1 * ((j as f64 + 0.5) * cell).exp(),
            amplitude,
        })
        .collect())
}

fn check_request(model: &NoiseModel, n: usize, fs: f64) -> Result<(), NoiseError> {
    model.validate()?;
    if n < MIN_SAMPLES {
        return Err(NoiseError::Config(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    if !(fs > 0.0 && fs * model.tau2 > 10.0) {
        return Err(NoiseError::Config(format!(
            "sample rate {fs} Hz too low for tau2 = {} s (need fs * tau2 > 10)",
            model.tau2
        )));
    }
    Ok(())
}

/// Flicker-noise time series of `n` samples at `fs`, deterministic in
/// `model.seed`. A non-zero `white_psd` adds an independent white floor.
pub fn synth_flicker_series(
    model: &NoiseModel,
    n: usize,
    fs: f64,
    method: SynthesisMethod,
) -> Result<Vec<f64>, NoiseError> {
    check_request(model, n, fs)?;
    let mut x = match method {
        SynthesisMethod::Telegraph => telegraph_series(model, n, fs)?,
        SynthesisMethod::Spectral => spectral_series(model, n, fs)?,
    };
    if model.white_psd > 0.0 {
        for (v, w) in x
            .iter_mut()
            .zip(synth_white_series(model.white_psd, n, fs, model.seed))
        {
            *v += w;
        }
    }
    Ok(x)
}

fn telegraph_series(model: &NoiseModel, n: usize, fs: f64) -> Result<Vec<f64>, NoiseError> {
    let bank = telegraph_bank(model)?;
    let mut rng = rng(model.seed, TELEGRAPH_STREAM);
    let dt = 1.0 / fs;
    let mut start = 0.0;
    let mut jumps = vec![0.0; n];
    for p in &bank {
        let mut level = if rng.random_bool(0.5) {
            p.amplitude
        } else {
            -p.amplitude
        };
        start += level;
        // Per-sample flip probability that gives exactly e^{-dt/tau} correlation.
        let flip = 0.5 * -(-dt / p.tau).exp_m1();
        if flip <= 0.0 || level == 0.0 {
            continue;
        }
        let gap = Geometric::new(flip).map_err(|e| NoiseError::Config(e.to_string()))?;
        let mut idx: u64 = 0;
        loop {
            idx = idx.saturating_add(1).saturating_add(gap.sample(&mut rng));
            if idx >= n as u64 {
                break;
            }
            jumps[idx as usize] -= 2.0 * level;
            level = -level;
        }
    }
    let mut acc = start;
    Ok(jumps
        .into_iter()
        .map(|j| {
            acc += j;
            acc
        })
        .collect())
}

fn spectral_series(model: &NoiseModel, n: usize, fs: f64) -> Result<Vec<f64>, NoiseError> {
    let mut rng = rng(model.seed, SPECTRAL_STREAM);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    let scale = fs * n as f64 / 2.0;
    for k in 1..=n / 2 {
        let f = k as f64 * fs / n as f64;
        let s = flicker_psd(model, angular(f))?;
        let g1: f64 = StandardNormal.sample(&mut rng);
        let g2: f64 = StandardNormal.sample(&mut rng);
        let bin = if 2 * k == n {
            Complex64::new((s * scale).sqrt() * g1, 0.0)
        } else {
            (s * scale / 2.0).sqrt() * Complex64::new(g1, g2)
        };
        spectrum[k] = bin;
        if 2 * k != n {
            spectrum[n - k] = bin.conj();
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    Ok(spectrum.into_iter().map(|c| c.re / n as f64).collect())
}

/// Gaussian white noise with one-sided density `psd` (units²/Hz).
pub fn synth_white_series(psd: f64, n: usize, fs: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed, WHITE_STREAM);
    let sigma = (psd * fs / 2.0).sqrt();
    (0..n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            sigma * g
        })
        .collect()
}
