//! Transmit waveforms: conventional PAM, T/2 signaling and SI signaling.

use std::f64::consts::FRAC_1_SQRT_2;

use super::pulse::PulseShape;
use super::slerp::SlerpPath;
use crate::error::{domain, Result};
use crate::types::{Waveform, C64};

fn check_symbols(symbols: &[C64], n: usize) -> Result<usize> {
    if n == 0 || symbols.is_empty() || !symbols.len().is_multiple_of(n) {
        return domain(format!("need a non-empty sequence of {n}-vectors, got {} values", symbols.len()));
    }
    Ok(symbols.len() / n)
}

/// Superposition of `pulse` copies weighted by `points`, one point every
/// `spacing` samples.
///
/// The output holds whole symbol intervals and includes the full pulse tails;
/// the first point is centred at sample `span * Q / 2`.
pub fn synthesize_points(points: &[C64], n: usize, pulse: &PulseShape, spacing: usize, symbols: usize) -> Result<Waveform> {
    let count = check_symbols(points, n)?;
    if spacing == 0 {
        return domain("point spacing must be at least one sample");
    }
    let q = pulse.samples_per_symbol();
    let raw = (count - 1) * spacing + pulse.taps.len();
    let len = raw.div_ceil(q) * q;
    let mut samples = vec![C64::new(0.0, 0.0); n * len];
    for a in 0..n {
        let out = &mut samples[a * len..(a + 1) * len];
        for p in 0..count {
            let x = points[p * n + a];
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            let start = p * spacing;
            for (o, &h) in out[start..start + pulse.taps.len()].iter_mut().zip(&pulse.taps) {
                o.re += h * x.re;
                o.im += h * x.im;
            }
        }
    }
    Waveform::new(n, q, symbols, samples)
}

/// Conventional PAM, `s(t) = sum_k x[k] h(t - k)`.
pub fn synthesize_pam(symbols: &[C64], n: usize, pulse: &PulseShape) -> Result<Waveform> {
    let k = check_symbols(symbols, n)?;
    if pulse.periods_per_symbol != 1 {
        return domain("PAM needs a symbol-rate pulse");
    }
    synthesize_points(symbols, n, pulse, pulse.q, k)
}

/// Transmit points of T/2 signaling: `x[k] / sqrt 2` and the arc midpoint
/// towards `x[k+1]`, also scaled by `1 / sqrt 2`. The last symbol is its own
/// successor.
pub fn t2_points(symbols: &[C64], n: usize) -> Result<Vec<C64>> {
    let k = check_symbols(symbols, n)?;
    let mut out = Vec::with_capacity(2 * k * n);
    let mut mid = vec![C64::new(0.0, 0.0); n];
    for i in 0..k {
        let x = &symbols[i * n..(i + 1) * n];
        let next = &symbols[(i + 1).min(k - 1) * n..((i + 1).min(k - 1) + 1) * n];
        SlerpPath::new(x, next)?.at_into(0.5, &mut mid);
        out.extend(x.iter().map(|z| z * FRAC_1_SQRT_2));
        out.extend(mid.iter().map(|z| z * FRAC_1_SQRT_2));
    }
    Ok(out)
}

/// T/2 signaling with a pulse that is root-Nyquist with respect to `T/2`.
pub fn synthesize_t2(symbols: &[C64], n: usize, pulse: &PulseShape) -> Result<Waveform> {
    let k = check_symbols(symbols, n)?;
    if pulse.periods_per_symbol != 2 {
        return domain("T/2 signaling needs a pulse built for period T/2");
    }
    let pts = t2_points(symbols, n)?;
    synthesize_points(&pts, n, pulse, pulse.q, k)
}

/// Transmit points of SI signaling: per symbol interval the data point and
/// `f_ip - 1` points along the arc to the next symbol.
pub fn si_points(symbols: &[C64], n: usize, f_ip: usize) -> Result<Vec<C64>> {
    let k = check_symbols(symbols, n)?;
    if f_ip == 0 {
        return domain("f_IP must be at least 1");
    }
    let mut out = vec![C64::new(0.0, 0.0); f_ip * k * n];
    for i in 0..k {
        let x = &symbols[i * n..(i + 1) * n];
        out[i * f_ip * n..(i * f_ip + 1) * n].copy_from_slice(x);
        if f_ip > 1 {
            let j = (i + 1).min(k - 1);
            let path = SlerpPath::new(x, &symbols[j * n..(j + 1) * n])?;
            for l in 1..f_ip {
                let o = (i * f_ip + l) * n;
                path.at_into(l as f64 / f_ip as f64, &mut out[o..o + n]);
            }
        }
    }
    Ok(out)
}

/// SI signaling: data and interpolation points every `T / f_ip`, all shaped
/// by the symbol-rate pulse. `f_ip = 1` is exactly [`synthesize_pam`].
pub fn synthesize_si(symbols: &[C64], n: usize, pulse: &PulseShape, f_ip: usize) -> Result<Waveform> {
    let k = check_symbols(symbols, n)?;
    if f_ip == 0 || !pulse.q.is_multiple_of(f_ip) {
        return domain(format!("Q = {} must be a multiple of f_IP = {f_ip}", pulse.q));
    }
    if pulse.periods_per_symbol != 1 {
        return domain("SI signaling needs a symbol-rate pulse");
    }
    if f_ip == 1 {
        return synthesize_points(symbols, n, pulse, pulse.q, k);
    }
    let pts = si_points(symbols, n, f_ip)?;
    synthesize_points(&pts, n, pulse, pulse.q / f_ip, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::{make_pulse, PulseKind};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rect_single_symbol_is_flat() {
        let p = make_pulse(PulseKind::Rect, 0.0, 1, 8).unwrap();
        let x = [c(0.6, 0.0), c(0.0, -0.8)];
        let w = synthesize_pam(&x, 2, &p).unwrap();
        assert_eq!(w.len(), 16);
        let pw = w.sum_power();
        assert!(pw[..8].iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(pw[8..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn output_length() {
        let p = make_pulse(PulseKind::Rrc, 0.25, 8, 4).unwrap();
        let x = vec![c(1.0, 0.0); 5];
        assert_eq!(synthesize_pam(&x, 1, &p).unwrap().len(), (5 + 8) * 4);
        assert_eq!(synthesize_si(&x, 1, &p, 4).unwrap().len(), (5 + 8) * 4);
    }

    #[test]
    fn t2_points_for_constant_sequence() {
        let x = vec![c(1.0, 0.0); 3];
        let pts = t2_points(&x, 1).unwrap();
        assert!(pts.iter().all(|z| (z - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn si_points_follow_the_arc() {
        let x = [c(1.0, 0.0), c(0.0, 1.0)];
        let pts = si_points(&x, 1, 2).unwrap();
        assert!((pts[1] - c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(pts[3], c(0.0, 1.0));
    }

    #[test]
    fn rejects_mismatched_rates() {
        let p = make_pulse(PulseKind::Rrc, 0.25, 8, 4).unwrap();
        let x = vec![c(1.0, 0.0); 2];
        assert!(synthesize_si(&x, 1, &p, 3).is_err());
        assert!(synthesize_t2(&x, 1, &p).is_err());
        assert!(synthesize_pam(&[], 1, &p).is_err());
    }
}
