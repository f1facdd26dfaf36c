//! Deterministic pulse autocorrelation.

use super::pulse::PulseShape;
use crate::error::{domain, Result};

/// `phi(tau) = int h(t + tau) h(t) dt` on the sample grid of the pulse.
#[derive(Clone, Debug, PartialEq)]
pub struct AutocorrelationTable {
    /// `phi` at non-negative offsets `0, 1/Q, 2/Q, ...` symbol intervals.
    pub phi: Vec<f64>,
    /// Samples per symbol interval.
    pub q: usize,
    pub fip: usize,
}

impl AutocorrelationTable {
    /// `phi(m / Q)`; even in `m` and zero beyond the pulse support.
    pub fn at_samples(&self, m: isize) -> f64 {
        self.phi.get(m.unsigned_abs()).copied().unwrap_or(0.0)
    }

    /// `phi(j / f_ip)`.
    pub fn at_ip(&self, j: isize) -> f64 {
        self.at_samples(j * (self.q / self.fip) as isize)
    }

    /// Largest `j` with possibly non-zero `phi(j / f_ip)`.
    pub fn max_ip_offset(&self) -> usize {
        (self.phi.len() - 1) / (self.q / self.fip)
    }
}

/// Exact discrete autocorrelation of the taps at resolution `T / Q`, scaled
/// by the sample period so that a unit-energy pulse has `phi(0) = 1`.
pub fn autocorr_table(pulse: &PulseShape, fip: usize) -> Result<AutocorrelationTable> {
    let q = pulse.samples_per_symbol();
    if fip == 0 || !q.is_multiple_of(fip) {
        return domain(format!("Q = {q} must be a multiple of f_IP = {fip}"));
    }
    let h = &pulse.taps;
    let dt = 1.0 / q as f64;
    let phi = (0..h.len()).map(|m| h.iter().zip(&h[m..]).map(|(a, b)| a * b).sum::<f64>() * dt).collect();
    Ok(AutocorrelationTable { phi, q, fip })
}
