//! Matched filtering and sampling of oversampled waveforms.

use crate::channel::ReceivedFrame;
use crate::error::{domain, Result};
use crate::modulation::PulseShape;
use crate::types::{ChannelRealization, Waveform, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleRate {
    /// One sample per symbol interval at the data instants.
    T,
    /// Two samples per symbol interval; the data instants go to stream 0 and
    /// the midpoints to stream 1.
    THalf,
}

/// Correlates every antenna with `pulse` and samples at the transmit point
/// instants of the chosen rate.
///
/// The output is scaled by the pulse sample period, so a unit-energy pulse
/// returns transmitted point values on an ISI-free chain.
pub fn matched_filter_downsample(w: &Waveform, pulse: &PulseShape, rate: SampleRate) -> Result<ReceivedFrame> {
    let q = pulse.samples_per_symbol();
    if w.q() != q {
        return domain(format!("waveform has Q = {}, pulse expects {q}", w.q()));
    }
    let per_symbol = match rate {
        SampleRate::T => 1,
        SampleRate::THalf => 2,
    };
    if !q.is_multiple_of(per_symbol) {
        return domain(format!("Q = {q} is not divisible by {per_symbol}"));
    }
    let spacing = q / per_symbol;
    let n = w.n();
    let count = w.symbols() * per_symbol;
    let taps = &pulse.taps;
    let scale = 1.0 / pulse.q as f64;
    let mut streams = vec![vec![C64::new(0.0, 0.0); w.symbols() * n]; per_symbol];
    for a in 0..n {
        let s = w.antenna(a);
        for p in 0..count {
            let start = p * spacing;
            if start + taps.len() > s.len() {
                return domain("waveform is too short for the requested samples");
            }
            let v: C64 = s[start..start + taps.len()].iter().zip(taps).map(|(x, h)| x * *h).sum::<C64>() * scale;
            streams[p % per_symbol][(p / per_symbol) * n + a] = v;
        }
    }
    Ok(ReceivedFrame { n, symbols: w.symbols(), streams, channel: ChannelRealization::identity(n, 0.0)? })
}
