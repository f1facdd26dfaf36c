//! Discrete-time observation models shared by the link simulator and the
//! trellis receivers.
//!
//! A model is a set of observation streams. Stream `s` with delay `d` yields
//! observation `j = t - d` at trellis step `t`. Each term refers to the symbol
//! `x[t - lag]` (the newest symbol the term touches):
//!
//! * `Single(w)`: `w x[t - lag]`.
//! * `Interp(taus)`: `sum_l w_l slerp(x[t - lag - 1], x[t - lag], tau_l)`.
//!
//! A term is present when its anchor (the symbol for `Single`, the older
//! symbol for `Interp`) lies inside the frame; an interpolation target past
//! the last symbol is the last symbol itself.

use std::f64::consts::FRAC_1_SQRT_2;

use super::wmf::WhitenedImpulse;
use crate::error::{domain, Result};
use crate::modulation::{AutocorrelationTable, SlerpPath};
use crate::types::{mat_vec_into, ConstellationSet, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Single(f64),
    /// `(tau, weight)` pairs along the arc from the older to the newer symbol.
    Interp(Vec<(f64, f64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub lag: isize,
    pub kind: TermKind,
}

impl Term {
    pub fn is_interp(&self) -> bool {
        matches!(self.kind, TermKind::Interp(_))
    }

    /// Energy of the term's weights.
    pub fn energy(&self) -> f64 {
        match &self.kind {
            TermKind::Single(w) => w * w,
            TermKind::Interp(ws) => ws.iter().map(|(_, w)| w * w).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stream {
    pub delay: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrellisModel {
    pub streams: Vec<Stream>,
}

impl TrellisModel {
    /// How many symbols back from step `t` the terms reach.
    pub fn depth(&self) -> usize {
        self.streams.iter().flat_map(|s| &s.terms).map(|t| (t.lag + isize::from(t.is_interp())).max(0) as usize).max().unwrap_or(0)
    }

    pub fn min_lag(&self) -> isize {
        self.streams.iter().flat_map(|s| &s.terms).map(|t| t.lag).min().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    IsiFree,
    /// Whitened matched filter output of sinc^2 PAM.
    Sinc2Wmf(WhitenedImpulse),
    /// T/2 signaling sampled at `T/2`: a data stream and a midpoint stream.
    T2Slerp,
    /// SI signaling with matched filtering and `T`-spaced sampling. Every
    /// transmit point carries amplitude `amplitude`.
    SiPhi {
        phi: AutocorrelationTable,
        amplitude: f64,
    },
}

/// Observation model of one signaling scheme, plus how many trailing ISI
/// intervals the decision-feedback part cancels.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchMetricModel {
    pub kind: ModelKind,
    pub f_ip: usize,
    pub dfe_tail_taps: usize,
}

impl BranchMetricModel {
    pub fn isi_free() -> Self {
        Self { kind: ModelKind::IsiFree, f_ip: 1, dfe_tail_taps: 0 }
    }

    pub fn sinc2_wmf(h_w: WhitenedImpulse, dfe_tail_taps: usize) -> Self {
        Self { kind: ModelKind::Sinc2Wmf(h_w), f_ip: 1, dfe_tail_taps }
    }

    pub fn t2_slerp() -> Self {
        Self { kind: ModelKind::T2Slerp, f_ip: 2, dfe_tail_taps: 0 }
    }

    pub fn si_phi(phi: AutocorrelationTable, amplitude: f64, dfe_tail_taps: usize) -> Self {
        let f_ip = phi.fip;
        Self { kind: ModelKind::SiPhi { phi, amplitude }, f_ip, dfe_tail_taps }
    }

    /// Number of symbol-interval taps of the underlying ISI, excluding the
    /// newest (`L` in `h_W[0..=L]`).
    pub fn isi_length(&self) -> usize {
        match &self.kind {
            ModelKind::IsiFree => 0,
            ModelKind::Sinc2Wmf(h) => h.taps.len() - 1,
            ModelKind::T2Slerp => 1,
            ModelKind::SiPhi { phi, .. } => phi.max_ip_offset().div_ceil(phi.fip),
        }
    }

    /// Receiver view with `nu` trellis memory elements and `tail` further
    /// intervals handed to per-survivor decision feedback.
    pub fn receiver_model(&self, nu: usize, tail: usize) -> TrellisModel {
        match &self.kind {
            ModelKind::IsiFree => single_stream(0, vec![Term { lag: 0, kind: TermKind::Single(1.0) }]),
            ModelKind::Sinc2Wmf(h) => {
                let l = h.taps.len() - 1;
                let last = (nu + tail).min(l);
                single_stream(0, (0..=last).map(|i| Term { lag: i as isize, kind: TermKind::Single(h.taps[i]) }).collect())
            }
            ModelKind::T2Slerp => t2_streams(1, 0),
            ModelKind::SiPhi { phi, amplitude } => {
                let primary = nu.max(1);
                let delay = si_delay(phi, primary);
                let terms =
                    (0..primary + tail).map(|lag| si_block(phi, *amplitude, lag as isize, delay)).filter(|t| t.energy() > 0.0).collect();
                single_stream(delay, terms)
            }
        }
    }

    /// Exact observation model, including precursors and every tail interval.
    /// All streams use delay 0, so observation `j` is produced at step `j`.
    pub fn channel_model(&self) -> TrellisModel {
        match &self.kind {
            ModelKind::IsiFree => self.receiver_model(0, 0),
            ModelKind::Sinc2Wmf(h) => self.receiver_model(0, h.taps.len()),
            ModelKind::T2Slerp => t2_streams(0, -1),
            ModelKind::SiPhi { phi, amplitude } => {
                let reach = phi.max_ip_offset().div_ceil(phi.fip) as isize + 1;
                let terms = (-reach..=reach).map(|lag| si_block(phi, *amplitude, lag, 0)).filter(|t| t.energy() > 0.0).collect();
                single_stream(0, terms)
            }
        }
    }
}

fn single_stream(delay: usize, terms: Vec<Term>) -> TrellisModel {
    TrellisModel { streams: vec![Stream { delay, terms }] }
}

fn t2_streams(interp_delay: usize, interp_lag: isize) -> TrellisModel {
    TrellisModel {
        streams: vec![
            Stream { delay: 0, terms: vec![Term { lag: 0, kind: TermKind::Single(FRAC_1_SQRT_2) }] },
            Stream { delay: interp_delay, terms: vec![Term { lag: interp_lag, kind: TermKind::Interp(vec![(0.5, FRAC_1_SQRT_2)]) }] },
        ],
    }
}

/// Interpolation block whose newest symbol has lag `lag`: weights
/// `phi(lag + 1 - delay - l / f_ip)` for `l = 0..f_ip`.
fn si_block(phi: &AutocorrelationTable, amplitude: f64, lag: isize, delay: usize) -> Term {
    let f = phi.fip as isize;
    let base = (lag + 1 - delay as isize) * f;
    let taus = (0..f).map(|l| (l as f64 / f as f64, amplitude * phi.at_ip(base - l))).collect();
    Term { lag, kind: TermKind::Interp(taus) }
}

/// Observation delay that puts the most energy into `primary` blocks.
fn si_delay(phi: &AutocorrelationTable, primary: usize) -> usize {
    let reach = phi.max_ip_offset().div_ceil(phi.fip) + 1;
    let mut best = (0, f64::NEG_INFINITY);
    for delay in 0..=reach {
        let e: f64 = (0..primary).map(|lag| si_block(phi, 1.0, lag as isize, delay).energy()).sum();
        if e > best.1 + 1e-15 {
            best = (delay, e);
        }
    }
    best.0
}

/// Noise-free term values for every symbol (`Single`) or symbol pair
/// (`Interp`, indexed `older * M + newer`), before the channel matrix.
#[derive(Clone, Debug)]
pub(crate) struct PreparedTerm {
    pub lag: isize,
    pub interp: bool,
    pub values: Vec<C64>,
}

#[derive(Clone, Debug)]
pub(crate) struct PreparedStream {
    pub delay: usize,
    pub terms: Vec<PreparedTerm>,
}

#[derive(Clone, Debug)]
pub(crate) struct PreparedModel {
    pub m: usize,
    pub n: usize,
    pub depth: usize,
    pub streams: Vec<PreparedStream>,
}

impl PreparedModel {
    pub fn new(model: &TrellisModel, a: &ConstellationSet) -> Result<Self> {
        let (m, n) = (a.m(), a.n());
        let mut streams = Vec::with_capacity(model.streams.len());
        for s in &model.streams {
            let mut terms = Vec::with_capacity(s.terms.len());
            for t in &s.terms {
                let values = match &t.kind {
                    TermKind::Single(w) => a.points().iter().map(|z| z * *w).collect(),
                    TermKind::Interp(taus) => interp_values(a, taus)?,
                };
                terms.push(PreparedTerm { lag: t.lag, interp: t.is_interp(), values });
            }
            streams.push(PreparedStream { delay: s.delay, terms });
        }
        Ok(Self { m, n, depth: model.depth(), streams })
    }

    /// The same tables seen through channel matrix `h`.
    pub fn through(&self, h: &nalgebra::DMatrix<C64>) -> Self {
        let n = self.n;
        let streams = self
            .streams
            .iter()
            .map(|s| PreparedStream {
                delay: s.delay,
                terms: s
                    .terms
                    .iter()
                    .map(|t| {
                        let mut values = vec![C64::new(0.0, 0.0); t.values.len()];
                        for (v, o) in t.values.chunks_exact(n).zip(values.chunks_exact_mut(n)) {
                            mat_vec_into(h, v, o);
                        }
                        PreparedTerm { lag: t.lag, interp: t.interp, values }
                    })
                    .collect(),
            })
            .collect();
        Self { m: self.m, n, depth: self.depth, streams }
    }
}

fn interp_values(a: &ConstellationSet, taus: &[(f64, f64)]) -> Result<Vec<C64>> {
    let (m, n) = (a.m(), a.n());
    let mut out = vec![C64::new(0.0, 0.0); m * m * n];
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for o in 0..m {
        for nw in 0..m {
            let cell = &mut out[(o * m + nw) * n..(o * m + nw + 1) * n];
            if o == nw {
                let w: f64 = taus.iter().map(|(_, w)| w).sum();
                cell.iter_mut().zip(a.point(o)).for_each(|(c, z)| *c = z * w);
                continue;
            }
            let path = SlerpPath::new(a.point(o), a.point(nw))?;
            for &(tau, w) in taus {
                path.at_into(tau, &mut buf);
                cell.iter_mut().zip(&buf).for_each(|(c, z)| *c += z * w);
            }
        }
    }
    Ok(out)
}

/// Noise-free observation `j` of stream `s` for the symbol index sequence
/// `x`, accumulated into `out` (before the channel matrix).
pub(crate) fn expected_observation(model: &PreparedModel, s: usize, x: &[usize], j: isize, out: &mut [C64]) {
    let k = x.len() as isize;
    let (m, n) = (model.m, model.n);
    let stream = &model.streams[s];
    let t = j + stream.delay as isize;
    out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
    for term in &stream.terms {
        let newest = t - term.lag;
        let idx = if term.interp {
            let older = newest - 1;
            if older < 0 || older >= k {
                continue;
            }
            x[older as usize] * m + x[newest.min(k - 1) as usize]
        } else {
            if newest < 0 || newest >= k {
                continue;
            }
            x[newest as usize]
        };
        out.iter_mut().zip(&term.values[idx * n..(idx + 1) * n]).for_each(|(o, v)| *o += v);
    }
}

pub(crate) fn check_model_constellation(model: &BranchMetricModel, a: &ConstellationSet) -> Result<()> {
    if let ModelKind::Sinc2Wmf(h) = &model.kind {
        if h.taps.is_empty() {
            return domain("whitened impulse has no taps");
        }
    }
    if a.m() > u16::MAX as usize + 1 {
        return domain("constellation too large for the trellis");
    }
    Ok(())
}
