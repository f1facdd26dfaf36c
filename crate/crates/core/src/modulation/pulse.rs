//! Sampled pulse shapes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulseKind {
    /// Root raised cosine.
    Rrc,
    /// `sinc^2(t)`.
    Sinc2,
    /// Rectangle of one period, sampled on `[-1/2, 1/2)`.
    Rect,
}

impl fmt::Display for PulseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseKind::Rrc => "rrc",
            PulseKind::Sinc2 => "sinc2",
            PulseKind::Rect => "rect",
        })
    }
}

impl FromStr for PulseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rrc" => Ok(PulseKind::Rrc),
            "sinc2" | "sinc^2" => Ok(PulseKind::Sinc2),
            "rect" => Ok(PulseKind::Rect),
            _ => domain(format!("unknown pulse kind `{s}`")),
        }
    }
}

/// Pulse sampled at `q` samples per pulse period.
///
/// `periods_per_symbol` is 1 for symbol-rate pulses and 2 for pulses that are
/// Nyquist with respect to `T/2`. Taps are normalised to unit energy in the
/// pulse's own period, `sum(taps^2) / q = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseShape {
    pub kind: PulseKind,
    pub beta: f64,
    /// Length in pulse periods.
    pub span: usize,
    pub q: usize,
    pub periods_per_symbol: usize,
    pub taps: Vec<f64>,
}

impl PulseShape {
    /// Samples per symbol interval `T`.
    pub fn samples_per_symbol(&self) -> usize {
        self.q * self.periods_per_symbol
    }

    /// Length in symbol intervals.
    pub fn span_symbols(&self) -> usize {
        self.span / self.periods_per_symbol
    }

    pub fn center(&self) -> usize {
        self.taps.len() / 2
    }
}

/// Symbol-rate pulse with `q` samples per symbol over `span` symbols.
pub fn make_pulse(kind: PulseKind, beta: f64, span: usize, q: usize) -> Result<PulseShape> {
    build(kind, beta, span, q, 1)
}

/// RRC pulse that is root-Nyquist with respect to `T/2`, sampled at `q`
/// samples per symbol and lasting `span` symbols.
pub fn make_t2_pulse(beta: f64, span: usize, q: usize) -> Result<PulseShape> {
    if !q.is_multiple_of(2) {
        return domain(format!("T/2 pulses need an even Q, got {q}"));
    }
    build(PulseKind::Rrc, beta, 2 * span, q / 2, 2)
}

fn build(kind: PulseKind, beta: f64, span: usize, q: usize, periods_per_symbol: usize) -> Result<PulseShape> {
    if !(0.0..=1.0).contains(&beta) {
        return domain(format!("roll-off must lie in [0, 1], got {beta}"));
    }
    if q * periods_per_symbol < 4 {
        return domain(format!("need at least 4 samples per symbol, got {}", q * periods_per_symbol));
    }
    let min_span = match kind {
        PulseKind::Rect => 1,
        _ => 8 * periods_per_symbol,
    };
    if span < min_span {
        return domain(format!("{kind} pulse needs a span of at least {min_span}, got {span}"));
    }
    if !(span * q).is_multiple_of(2) {
        return domain("span * Q must be even so the pulse centre falls on a sample");
    }
    let half = (span * q / 2) as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| {
            let t = i as f64 / q as f64;
            match kind {
                PulseKind::Rrc => rrc(beta, t),
                PulseKind::Sinc2 => sinc(t).powi(2),
                PulseKind::Rect => {
                    if -(q as isize) <= 2 * i && 2 * i < q as isize {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        })
        .collect();
    let energy = taps.iter().map(|h| h * h).sum::<f64>() / q as f64;
    let scale = energy.sqrt().recip();
    taps.iter_mut().for_each(|h| *h *= scale);
    Ok(PulseShape { kind, beta, span, q, periods_per_symbol, taps })
}

pub(crate) fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

fn rrc(beta: f64, t: f64) -> f64 {
    if t.abs() < 1e-12 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    if beta > 0.0 && (t.abs() - 1.0 / (4.0 * beta)).abs() < 1e-12 {
        let a = PI / (4.0 * beta);
        return beta * FRAC_1_SQRT_2 * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let x = 4.0 * beta * t;
    ((PI * t * (1.0 - beta)).sin() + x * (PI * t * (1.0 + beta)).cos()) / (PI * t * (1.0 - x * x))
}
