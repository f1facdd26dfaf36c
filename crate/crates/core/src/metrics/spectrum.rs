use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{domain, Result};
use crate::types::Waveform;

pub const DEFAULT_FRACTIONS: [f64; 4] = [0.99, 0.999, 0.9999, 1.0];

/// Bins more than this far below the peak do not count towards `B_1.0`.
pub const PEAK_FLOOR_DB: f64 = -50.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEstimate {
    /// Cycles per symbol period, ascending.
    pub freqs: Vec<f64>,
    /// Normalised so that `sum(psd) * df == 1`.
    pub psd: Vec<f64>,
    /// `(x, B_x)` pairs in ascending `x`.
    pub b_x: Vec<(f64, f64)>,
}

impl SpectrumEstimate {
    pub fn df(&self) -> f64 {
        if self.freqs.len() < 2 {
            0.0
        } else {
            self.freqs[1] - self.freqs[0]
        }
    }

    pub fn bandwidth(&self, x: f64) -> Option<f64> {
        self.b_x.iter().find(|(f, _)| (f - x).abs() < 1e-12).map(|&(_, b)| b)
    }

    pub fn centroid(&self) -> f64 {
        self.freqs.iter().zip(&self.psd).map(|(f, p)| f * p).sum::<f64>() * self.df()
    }
}

/// Welch PSD of `w`: Hann window, 50% overlap, segments of `segment_symbols`
/// symbol periods, per-antenna periodograms summed.
pub fn psd_estimate(w: &Waveform, segment_symbols: usize) -> Result<SpectrumEstimate> {
    let q = w.q();
    let len = segment_symbols * q;
    if len < 2 || !len.is_multiple_of(2) {
        return domain("segment must hold an even number of samples");
    }
    if w.len() < 8 * len {
        return domain("waveform shorter than 8 segments");
    }
    let hop = len / 2;
    let count = (w.len() - len) / hop + 1;
    let win: Vec<f64> = (0..len).map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / len as f64).cos()).collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let mut acc = vec![0.0; len];
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for a in 0..w.n() {
        let x = w.antenna(a);
        for s in 0..count {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = x[s * hop + i] * win[i];
            }
            fft.process(&mut buf);
            acc.iter_mut().zip(&buf).for_each(|(p, b)| *p += b.norm_sqr());
        }
    }
    let df = q as f64 / len as f64;
    let total: f64 = acc.iter().sum::<f64>() * df;
    if !(total > 0.0) {
        return domain("zero-energy waveform");
    }
    let half = len / 2;
    let mut freqs = Vec::with_capacity(len);
    let mut psd = Vec::with_capacity(len);
    for i in 0..len {
        let k = (i + half) % len;
        freqs.push((i as f64 - half as f64) * df);
        psd.push(acc[k] / total);
    }
    let mut est = SpectrumEstimate { freqs, psd, b_x: Vec::new() };
    est.b_x = DEFAULT_FRACTIONS.iter().map(|&x| (x, 0.0)).collect();
    fill_bandwidths(&mut est);
    Ok(est)
}

fn fill_bandwidths(est: &mut SpectrumEstimate) {
    let fc = est.centroid();
    let df = est.df();
    let mut order: Vec<usize> = (0..est.freqs.len()).collect();
    order.sort_by(|&i, &j| {
        let (di, dj) = ((est.freqs[i] - fc).abs(), (est.freqs[j] - fc).abs());
        di.total_cmp(&dj).then(i.cmp(&j))
    });
    let peak = est.psd.iter().copied().fold(0.0, f64::max);
    let floor = peak * 10f64.powf(PEAK_FLOOR_DB / 10.0);
    let full = est.freqs.iter().zip(&est.psd).filter(|(_, &p)| p >= floor).map(|(f, _)| 2.0 * (f - fc).abs()).fold(0.0, f64::max);
    let mut widest = 0.0f64;
    for (x, b) in est.b_x.iter_mut() {
        if *x >= 1.0 {
            continue;
        }
        let mut cum = 0.0;
        for &i in &order {
            cum += est.psd[i] * df;
            if cum >= *x {
                *b = 2.0 * (est.freqs[i] - fc).abs();
                break;
            }
        }
        widest = widest.max(*b);
    }
    for (x, b) in est.b_x.iter_mut() {
        if *x >= 1.0 {
            *b = full.max(widest);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellations::gen_pm_default;
    use crate::link::{random_symbols, TxScheme};
    use crate::modulation::PulseKind;
    use crate::rng::RngSeed;

    #[test]
    fn normalised_and_monotone() {
        let a = gen_pm_default(2, 16, 1.0, RngSeed(1)).unwrap();
        let (_, x) = random_symbols(&a, 4000, RngSeed(2));
        let w = TxScheme::Pam { pulse: PulseKind::Rrc, beta: 0.25 }.waveform(&x, 2, 16, 64).unwrap();
        let s = psd_estimate(&w, 256).unwrap();
        assert!((s.psd.iter().sum::<f64>() * s.df() - 1.0).abs() < 1e-9);
        assert!(s.psd.iter().all(|&p| p >= 0.0));
        let b: Vec<f64> = s.b_x.iter().map(|&(_, b)| b).collect();
        assert!(b.windows(2).all(|w| w[0] <= w[1]));
        assert!((s.bandwidth(1.0).unwrap() - 1.25).abs() < 0.0625, "{:?}", s.b_x);
    }

    #[test]
    fn too_short_rejected() {
        let w = Waveform::new(1, 4, 10, vec![num_complex::Complex::new(1.0, 0.0); 40]).unwrap();
        assert!(psd_estimate(&w, 8).is_err());
    }
}
