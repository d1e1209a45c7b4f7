use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::DsmError;
use crate::export::{csv_writer, num};
use crate::noise::Psd;

/// Bins on either side of the signal bin counted as signal.
const SIGNAL_HALF_WIDTH: usize = 3;
/// Bins `0..=DC_BINS` are excluded from the noise sum.
const DC_BINS: usize = 2;

/// Sine of `amplitude` (input units) at the odd FFT bin nearest `f_target`,
/// so that `n` samples hold a whole number of periods. Returns the samples
/// and the frequency actually used.
pub fn coherent_sine(n: usize, fs: f64, f_target: f64, amplitude: f64) -> (Vec<f64>, f64) {
    let mut bin = ((f_target * n as f64 / fs).round() as usize).max(1);
    if bin.is_multiple_of(2) {
        bin += 1;
    }
    let x = (0..n)
        .map(|k| amplitude * (2.0 * PI * (bin * k % n) as f64 / n as f64).sin())
        .collect();
    (x, bin as f64 * fs / n as f64)
}

/// One-sided Hann-windowed periodogram on bins `0 .. n/2` (units²/Hz).
pub fn periodogram(x: &[f64], fs: f64) -> Psd {
    let n = x.len();
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect();
    let power: f64 = window.iter().map(|w| w * w).sum();
    let mut buf: Vec<Complex64> = x
        .iter()
        .zip(&window)
        .map(|(v, w)| Complex64::new(v * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (fs * power);
    let density = buf[..n / 2]
        .iter()
        .enumerate()
        .map(|(k, b)| b.norm_sqr() * scale * if k == 0 { 1.0 } else { 2.0 })
        .collect();
    let frequency = (0..n / 2).map(|k| k as f64 * fs / n as f64).collect();
    Psd { frequency, density }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMetrics {
    pub signal_frequency: f64,
    pub signal_bin: usize,
    /// Last bin inside `fs / (2 osr)`.
    pub band_bin: usize,
    /// Summed density over the signal bins (relative units).
    pub signal_power: f64,
    /// Summed density over the remaining in-band bins above DC.
    pub noise_power: f64,
    pub sndr_db: f64,
}

/// Signal power within ±3 bins of `f_signal` against all other in-band
/// power, excluding the lowest three bins.
pub fn analyze_spectrum(
    x: &[f64],
    fs: f64,
    f_signal: f64,
    osr: u32,
) -> Result<SpectralMetrics, DsmError> {
    let n = x.len();
    if n < 16 {
        return Err(DsmError::Config(format!(
            "spectrum needs at least 16 samples, got {n}"
        )));
    }
    let band = fs / (2.0 * f64::from(osr.max(1)));
    if !(f_signal > 0.0 && f_signal <= band) {
        return Err(DsmError::Config(format!(
            "signal frequency {f_signal} Hz lies outside the band (0, {band}] Hz"
        )));
    }
    let psd = periodogram(x, fs);
    let band_bin = ((band * n as f64 / fs).floor() as usize).min(n / 2 - 1);
    let signal_bin = (f_signal * n as f64 / fs).round() as usize;
    let sig_lo = signal_bin.saturating_sub(SIGNAL_HALF_WIDTH);
    let sig_hi = signal_bin + SIGNAL_HALF_WIDTH;
    let mut signal_power = 0.0;
    let mut noise_power = 0.0;
    for (k, s) in psd.density.iter().enumerate().take(band_bin + 1) {
        if (sig_lo..=sig_hi).contains(&k) {
            signal_power += s;
        } else if k > DC_BINS {
            noise_power += s;
        }
    }
    Ok(SpectralMetrics {
        signal_frequency: f_signal,
        signal_bin,
        band_bin,
        signal_power,
        noise_power,
        sndr_db: 10.0 * (signal_power / noise_power).log10(),
    })
}

pub fn sndr(x: &[f64], fs: f64, f_signal: f64, osr: u32) -> Result<f64, DsmError> {
    Ok(analyze_spectrum(x, fs, f_signal, osr)?.sndr_db)
}

/// Peak SQNR of an ideal order-`order` modulator with a `bits`-bit quantizer
/// and a full-scale sine:
/// `6.02 B + 1.76 - 10 log10(pi^(2L) / (2L + 1)) + (2L + 1) 10 log10(R)`.
pub fn theoretical_sqnr(order: u32, osr: u32, bits: u32) -> Result<f64, DsmError> {
    if !(1..=4).contains(&order) {
        return Err(DsmError::Config(format!(
            "loop order must be 1 to 4 for the SQNR estimate, got {order}"
        )));
    }
    let l = f64::from(order);
    Ok(
        6.02 * f64::from(bits) + 1.76 - 10.0 * (PI.powf(2.0 * l) / (2.0 * l + 1.0)).log10()
            + (2.0 * l + 1.0) * 10.0 * f64::from(osr).log10(),
    )
}

/// Columns `f, psd`.
pub fn write_spectrum_csv<W: Write>(psd: &Psd, out: W) -> Result<(), DsmError> {
    let mut w = csv_writer(out);
    w.write_record(["f", "psd"])?;
    for (f, s) in psd.frequency.iter().zip(&psd.density) {
        w.write_record([num(*f), num(*s)])?;
    }
    w.flush()?;
    Ok(())
}
