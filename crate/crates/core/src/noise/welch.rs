use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::NoiseError;

/// One-sided power spectral density on bins `k fs / nperseg`.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub frequency: Vec<f64>,
    pub density: Vec<f64>,
}

/// Welch estimate with a periodic Hann window, 50 % overlap and per-segment
/// mean removal.
pub fn welch_psd(series: &[f64], fs: f64, nperseg: usize) -> Result<Psd, NoiseError> {
    if nperseg < 2 || nperseg > series.len() {
        return Err(NoiseError::Domain(format!(
            "segment length {nperseg} must be in 2..={}",
            series.len()
        )));
    }
    if !(fs > 0.0) {
        return Err(NoiseError::Domain(format!(
            "sample rate must be positive, got {fs}"
        )));
    }
    let window: Vec<f64> = (0..nperseg)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / nperseg as f64).cos())
        .collect();
    let power: f64 = window.iter().map(|w| w * w).sum();
    let step = nperseg / 2;
    let bins = nperseg / 2 + 1;
    let fft = FftPlanner::new().plan_fft_forward(nperseg);
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); nperseg];
    let mut segments = 0usize;
    let mut start = 0;
    while start + nperseg <= series.len() {
        let seg = &series[start..start + nperseg];
        let mean = seg.iter().sum::<f64>() / nperseg as f64;
        for ((b, x), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex64::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        segments += 1;
        start += step;
    }
    let scale = 1.0 / (fs * power * segments as f64);
    let density = acc
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let one_sided = k != 0 && !(nperseg.is_multiple_of(2) && k == nperseg / 2);
            a * scale * if one_sided { 2.0 } else { 1.0 }
        })
        .collect();
    let frequency = (0..bins).map(|k| k as f64 * fs / nperseg as f64).collect();
    Ok(Psd { frequency, density })
}

/// Least-squares slope of `log10 S` against `log10 f` over `[f_lo, f_hi]`.
pub fn loglog_slope(psd: &Psd, f_lo: f64, f_hi: f64) -> Result<f64, NoiseError> {
    let points: Vec<(f64, f64)> = psd
        .frequency
        .iter()
        .zip(&psd.density)
        .filter(|(f, s)| **f >= f_lo && **f <= f_hi && **f > 0.0 && **s > 0.0)
        .map(|(f, s)| (f.log10(), s.log10()))
        .collect();
    if points.len() < 2 {
        return Err(NoiseError::Domain(format!(
            "fewer than two positive bins in [{f_lo}, {f_hi}] Hz"
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::synth_white_series;

    #[test]
    fn white_noise_is_flat_at_its_level() {
        let x = synth_white_series(3.0, 1 << 16, 100.0, 11);
        let p = welch_psd(&x, 100.0, 1024).unwrap();
        assert_eq!(p.frequency.len(), 513);
        assert_eq!(p.frequency[512], 50.0);
        let interior = &p.density[5..500];
        let mean = interior.iter().sum::<f64>() / interior.len() as f64;
        assert!((mean / 3.0 - 1.0).abs() < 0.03, "{mean}");
        assert!(loglog_slope(&p, 1.0, 45.0).unwrap().abs() < 0.05);
    }

    #[test]
    fn parseval_for_a_sinusoid() {
        // A bin-centred sinusoid of amplitude 2 carries variance 2.
        let fs = 64.0;
        let n = 4096;
        let x: Vec<f64> = (0..n)
            .map(|k| 2.0 * (2.0 * PI * 8.0 * k as f64 / fs).sin())
            .collect();
        let p = welch_psd(&x, fs, 256).unwrap();
        let df = fs / 256.0;
        let total: f64 = p.density.iter().sum::<f64>() * df;
        assert!((total - 2.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn exact_power_law_slope() {
        let frequency: Vec<f64> = (1..100).map(|k| k as f64).collect();
        let density = frequency.iter().map(|f| 5.0 * f.powf(-1.3)).collect();
        let p = Psd { frequency, density };
        assert!((loglog_slope(&p, 2.0, 50.0).unwrap() + 1.3).abs() < 1e-12);
        assert!(loglog_slope(&p, 200.0, 300.0).is_err());
    }

    #[test]
    fn rejects_bad_segments() {
        let x = vec![0.0; 100];
        assert!(welch_psd(&x, 1.0, 101).is_err());
        assert!(welch_psd(&x, 0.0, 10).is_err());
    }
}
