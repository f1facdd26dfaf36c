//! Whitened matched filter for sinc^2 pulse shaping.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::modulation::{autocorr_table, make_pulse, PulseKind};
use crate::types::C64;

/// Causal minimum-phase symbol-spaced impulse `h_W[0..=L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhitenedImpulse {
    pub taps: Vec<f64>,
    /// Zeros of `sum_i h_W[i] z^{L-i}`, all inside the unit circle.
    pub zeros: Vec<C64>,
    /// `phi[k]`, `k = 0..=L`, of the symbol-spaced pulse autocorrelation.
    pub phi: Vec<f64>,
}

impl WhitenedImpulse {
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|h| h * h).sum()
    }

    /// Share of the energy in the first tap.
    pub fn first_tap_fraction(&self) -> f64 {
        self.taps[0] * self.taps[0] / self.energy()
    }
}

/// Spectral factorisation of the symbol-spaced autocorrelation of the
/// sinc^2 pulse at `(q, span)`.
pub fn build_wmf_sinc2(q: usize, span: usize) -> Result<WhitenedImpulse> {
    let pulse = make_pulse(PulseKind::Sinc2, 0.0, span, q)?;
    let table = autocorr_table(&pulse, 1)?;
    let mut phi: Vec<f64> = (0..=table.max_ip_offset() as isize).map(|k| table.at_ip(k)).collect();
    let tol = 1e-14 * phi[0];
    while phi.len() > 1 && phi.last().is_some_and(|v| v.abs() < tol) {
        phi.pop();
    }
    spectral_factor(&phi)
}

/// Minimum-phase `h` with `sum_i h[i] h[i + k] = phi[k]`.
pub fn spectral_factor(phi: &[f64]) -> Result<WhitenedImpulse> {
    let l = phi.len() - 1;
    if !(phi[0] > 0.0) {
        return Err(Error::Factorization("phi[0] must be positive".into()));
    }
    if l == 0 {
        return Ok(WhitenedImpulse { taps: vec![phi[0].sqrt()], zeros: Vec::new(), phi: phi.to_vec() });
    }
    // z^L sum_k phi[|k|] z^k, coefficients in ascending powers.
    let deg = 2 * l;
    let coef: Vec<f64> = (0..=deg).map(|i| phi[(i as isize - l as isize).unsigned_abs()]).collect();
    let lead = coef[deg];
    let companion = DMatrix::from_fn(deg, deg, |r, c| {
        if r == 0 {
            -coef[deg - 1 - c] / lead
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let roots: Vec<C64> = companion.complex_eigenvalues().iter().map(|&z| polish(&coef, z)).collect();
    let mut inside: Vec<C64> = roots.into_iter().filter(|z| z.norm() < 1.0).collect();
    if inside.len() != l || inside.iter().any(|z| z.norm() > 1.0 - 1e-9) {
        return Err(Error::Factorization(format!("expected {l} zeros strictly inside the unit circle, found {}", inside.len())));
    }
    inside.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    let mut poly = vec![C64::new(1.0, 0.0)];
    for r in &inside {
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        poly = next;
    }
    let mut taps: Vec<f64> = poly.iter().map(|c| c.re).collect();
    let scale = (phi[0] / taps.iter().map(|h| h * h).sum::<f64>()).sqrt();
    taps.iter_mut().for_each(|h| *h *= scale);
    Ok(WhitenedImpulse { taps, zeros: inside, phi: phi.to_vec() })
}

/// A few Newton steps on the polynomial with ascending coefficients `coef`.
fn polish(coef: &[f64], mut z: C64) -> C64 {
    for _ in 0..8 {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in coef.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() < 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_a_two_tap_channel() {
        // h = [1, 0.5]: phi = [1.25, 0.5].
        let w = spectral_factor(&[1.25, 0.5]).unwrap();
        assert!((w.taps[0] - 1.0).abs() < 1e-12 && (w.taps[1] - 0.5).abs() < 1e-12);
        assert!((w.zeros[0] + 0.5).norm() < 1e-12);
    }

    #[test]
    fn reproduces_sinc2_autocorrelation() {
        let w = build_wmf_sinc2(16, 16).unwrap();
        let l = w.taps.len() - 1;
        for k in 0..=l {
            let r: f64 = (0..=l - k).map(|i| w.taps[i] * w.taps[i + k]).sum();
            assert!((r - w.phi[k]).abs() < 1e-9, "lag {k}");
        }
        assert!(w.first_tap_fraction() > 0.9);
    }

    #[test]
    fn rejects_zeros_on_the_unit_circle() {
        // h = [1, 1] has its zero on the unit circle.
        assert!(spectral_factor(&[2.0, 1.0]).is_err());
    }
}
