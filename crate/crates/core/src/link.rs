//! End-to-end symbol-rate link simulation.
//!
//! Frames are simulated at the matched-filter (or whitened matched filter)
//! output: every observation is the exact noise-free value of the signaling
//! scheme's discrete model seen through the frame's channel, plus white
//! `CN(0, sigma2)` noise.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;

use crate::channel::{draw_rayleigh_with, ReceivedFrame};
use crate::error::{domain, Error, Result};
use crate::modulation::{
    autocorr_table, make_pulse, make_t2_pulse, synthesize_pam, synthesize_si, synthesize_t2, AutocorrelationTable, PulseKind,
};
use crate::receivers::{build_wmf_sinc2, expected_observation, BranchMetricModel, PreparedModel, Receiver, TrellisDecodeConfig};
use crate::rng::{complex_normal, RngSeed};
use crate::types::{mat_vec_into, real_dot, ChannelKind, ChannelRealization, ConstellationSet, Waveform, C64};

/// Transmit scheme at the waveform level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TxScheme {
    /// Conventional PAM with the given pulse.
    Pam { pulse: PulseKind, beta: f64 },
    /// Data and midpoint interpolants, RRC pulse at `T/2`.
    T2 { beta: f64 },
    /// Spherical interpolation with `f_ip` points per interval, RRC pulse.
    Si { beta: f64, f_ip: usize },
}

impl fmt::Display for TxScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TxScheme::Pam { pulse, beta } if *pulse == PulseKind::Rrc => write!(f, "rrc(beta={beta})"),
            TxScheme::Pam { pulse, .. } => write!(f, "{pulse}"),
            TxScheme::T2 { beta } => write!(f, "t2-rrc(beta={beta})"),
            TxScheme::Si { beta, f_ip } => write!(f, "si-rrc(beta={beta},fip={f_ip})"),
        }
    }
}

impl TxScheme {
    /// Synthesises the waveform for a point-major symbol sequence.
    pub fn waveform(&self, symbols: &[C64], n: usize, q: usize, span: usize) -> Result<Waveform> {
        match *self {
            TxScheme::Pam { pulse, beta } => {
                let span = if pulse == PulseKind::Rect { 1 } else { span };
                synthesize_pam(symbols, n, &make_pulse(pulse, beta, span, q)?)
            }
            TxScheme::T2 { beta } => synthesize_t2(symbols, n, &make_t2_pulse(beta, span, q)?),
            TxScheme::Si { beta, f_ip } => synthesize_si(symbols, n, &make_pulse(PulseKind::Rrc, beta, span, q)?, f_ip),
        }
    }
}

/// Uniform random symbols: indices and the point-major sequence.
pub fn random_symbols(a: &ConstellationSet, k: usize, seed: RngSeed) -> (Vec<usize>, Vec<C64>) {
    let mut rng = seed.rng();
    let idx: Vec<usize> = (0..k).map(|_| rng.random_range(0..a.m())).collect();
    let pts = idx.iter().flat_map(|&i| a.point(i).iter().copied()).collect();
    (idx, pts)
}

/// Signaling scheme as seen by the symbol-rate simulator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Signaling {
    IsiFree,
    /// sinc^2 PAM with a whitened matched filter.
    Sinc2Wmf {
        q: usize,
        span: usize,
    },
    /// T/2 signaling sampled at `T/2`.
    T2,
    /// SI signaling with RRC pulse, matched filter and `T`-spaced sampling.
    Si {
        beta: f64,
        f_ip: usize,
        q: usize,
        span: usize,
    },
}

impl FromStr for Signaling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "isi-free" | "isifree" | "none" => Ok(Signaling::IsiFree),
            "sinc2" | "wmf" => Ok(Signaling::Sinc2Wmf { q: 16, span: 16 }),
            "t2" => Ok(Signaling::T2),
            "si" => Ok(Signaling::Si { beta: 0.25, f_ip: 4, q: 16, span: 16 }),
            _ => domain(format!("unknown signaling `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinkConfig {
    pub constellation: ConstellationSet,
    pub signaling: Signaling,
    pub channel: ChannelKind,
    /// Channel matrix for [`ChannelKind::Explicit`].
    pub explicit_h: Option<DMatrix<C64>>,
    pub decoder: TrellisDecodeConfig,
    /// Intervals of trailing ISI cancelled by survivor feedback.
    pub dfe_tail_taps: usize,
    /// Symbols per frame; a fresh channel is drawn for every frame.
    pub frame_len: usize,
}

impl LinkConfig {
    pub fn new(constellation: ConstellationSet, signaling: Signaling, channel: ChannelKind, decoder: TrellisDecodeConfig) -> Self {
        Self { constellation, signaling, channel, explicit_h: None, decoder, dfe_tail_taps: 2, frame_len: 1000 }
    }
}

/// Errors and symbols of one simulated frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub errors: u64,
    pub symbols: u64,
}

/// A link ready to simulate frames.
pub struct Link {
    a: ConstellationSet,
    model: BranchMetricModel,
    truth: PreparedModel,
    receiver: Receiver,
    channel: ChannelKind,
    explicit_h: Option<DMatrix<C64>>,
    frame_len: usize,
    extra_obs: usize,
}

impl Link {
    pub fn new(cfg: &LinkConfig) -> Result<Self> {
        let a = &cfg.constellation;
        if cfg.frame_len == 0 {
            return domain("frame length must be at least 1");
        }
        let explicit_h = match (cfg.channel, &cfg.explicit_h) {
            (ChannelKind::Explicit, Some(h)) => {
                ChannelRealization::explicit(h.clone(), 0.0)?;
                if h.nrows() != a.n() {
                    return domain("explicit channel does not match the antenna count");
                }
                Some(h.clone())
            }
            (ChannelKind::Explicit, None) => return domain("explicit channel kind needs a matrix"),
            _ => None,
        };
        let model = link_model(a, cfg.signaling, cfg.dfe_tail_taps)?;
        let truth = PreparedModel::new(&model.channel_model(), a)?;
        let receiver = Receiver::new(a, &model, &cfg.decoder)?;
        let nu = cfg.decoder.nu_max.unwrap_or(cfg.decoder.nu);
        Ok(Self { a: a.clone(), model, truth, receiver, channel: cfg.channel, explicit_h, frame_len: cfg.frame_len, extra_obs: nu + 2 })
    }

    pub fn constellation(&self) -> &ConstellationSet {
        &self.a
    }

    pub fn model(&self) -> &BranchMetricModel {
        &self.model
    }

    pub fn channel_kind(&self) -> ChannelKind {
        self.channel
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    /// Transmits one random frame and returns what the receiver observes,
    /// together with the transmitted symbol indices.
    pub fn transmit(&self, sigma2: f64, seed: RngSeed) -> Result<(Vec<usize>, ReceivedFrame)> {
        let (n, k) = (self.a.n(), self.frame_len);
        let mut rng = seed.rng();
        let x: Vec<usize> = (0..k).map(|_| rng.random_range(0..self.a.m())).collect();
        let h = match self.channel {
            ChannelKind::IdentityAwgn => ChannelRealization::identity(n, sigma2)?,
            ChannelKind::RayleighIid => draw_rayleigh_with(n, &mut rng).with_sigma2(sigma2)?,
            ChannelKind::Explicit => ChannelRealization::explicit(self.explicit_h.clone().expect("checked"), sigma2)?,
        };
        let frame = self.observe(&x, &h, &mut rng);
        Ok((x, frame))
    }

    /// Observations of a given symbol sequence through a given channel.
    pub fn observe<R: Rng + ?Sized>(&self, x: &[usize], ch: &ChannelRealization, rng: &mut R) -> ReceivedFrame {
        let n = self.a.n();
        let len = x.len() + self.extra_obs;
        let mut clean = vec![C64::new(0.0, 0.0); n];
        let mut streams = Vec::with_capacity(self.truth.streams.len());
        for s in 0..self.truth.streams.len() {
            let mut y = vec![C64::new(0.0, 0.0); len * n];
            for (j, yj) in y.chunks_exact_mut(n).enumerate() {
                expected_observation(&self.truth, s, x, j as isize, &mut clean);
                mat_vec_into(&ch.h, &clean, yj);
                if ch.sigma2 > 0.0 {
                    yj.iter_mut().for_each(|v| *v += complex_normal(rng, ch.sigma2));
                }
            }
            streams.push(y);
        }
        ReceivedFrame { n, symbols: x.len(), streams, channel: ch.clone() }
    }

    pub fn simulate_frame(&self, sigma2: f64, seed: RngSeed) -> Result<FrameOutcome> {
        let (x, frame) = self.transmit(sigma2, seed)?;
        let d = self.receiver.decode(&frame)?;
        let errors = x.iter().zip(&d.symbols).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome { errors, symbols: x.len() as u64 })
    }
}

/// Observation model for a signaling scheme over constellation `a`.
pub fn link_model(a: &ConstellationSet, signaling: Signaling, dfe_tail_taps: usize) -> Result<BranchMetricModel> {
    Ok(match signaling {
        Signaling::IsiFree => BranchMetricModel::isi_free(),
        Signaling::Sinc2Wmf { q, span } => BranchMetricModel::sinc2_wmf(build_wmf_sinc2(q, span)?, dfe_tail_taps),
        Signaling::T2 => BranchMetricModel::t2_slerp(),
        Signaling::Si { beta, f_ip, q, span } => {
            let phi = autocorr_table(&make_pulse(PulseKind::Rrc, beta, span, q)?, f_ip)?;
            let amp = si_amplitude(a, &phi)?;
            BranchMetricModel::si_phi(phi, amp, dfe_tail_taps)
        }
    })
}

/// Point amplitude that makes the SI transmit signal carry `Es` per symbol
/// interval on average over uniform i.i.d. symbols.
pub fn si_amplitude(a: &ConstellationSet, phi: &AutocorrelationTable) -> Result<f64> {
    let e = si_energy_per_symbol(a, phi)?;
    if !(e > 0.0) {
        return domain("SI signal has no energy");
    }
    Ok((a.es() / e).sqrt())
}

/// Expected energy per symbol interval of unit-amplitude SI signaling.
///
/// Points of one interval depend on `(x[k], x[k+1])`. Intervals one apart
/// share a symbol and are averaged through their conditional means; intervals
/// further apart are independent.
pub fn si_energy_per_symbol(a: &ConstellationSet, phi: &AutocorrelationTable) -> Result<f64> {
    let (m, n, f) = (a.m(), a.n(), phi.fip);
    let mut pts = vec![C64::new(0.0, 0.0); m * m * f * n];
    for o in 0..m {
        for nw in 0..m {
            let base = (o * m + nw) * f * n;
            if o == nw {
                for l in 0..f {
                    pts[base + l * n..base + (l + 1) * n].copy_from_slice(a.point(o));
                }
                continue;
            }
            let path = crate::modulation::SlerpPath::new(a.point(o), a.point(nw))?;
            for l in 0..f {
                path.at_into(l as f64 / f as f64, &mut pts[base + l * n..base + (l + 1) * n]);
            }
        }
    }
    let p = |o: usize, nw: usize, l: usize| &pts[((o * m + nw) * f + l) * n..((o * m + nw) * f + l + 1) * n];
    let inv = 1.0 / m as f64;

    // Conditional means given the newer (fwd) or older (back) symbol.
    let mut given_newer = vec![C64::new(0.0, 0.0); m * f * n];
    let mut given_older = vec![C64::new(0.0, 0.0); m * f * n];
    let mut mean = vec![C64::new(0.0, 0.0); f * n];
    for o in 0..m {
        for nw in 0..m {
            for l in 0..f {
                for (d, v) in p(o, nw, l).iter().enumerate() {
                    given_newer[(nw * f + l) * n + d] += v * inv;
                    given_older[(o * f + l) * n + d] += v * inv;
                    mean[l * n + d] += v * inv * inv;
                }
            }
        }
    }

    let mut same = vec![0.0; f * f];
    for o in 0..m {
        for nw in 0..m {
            for l in 0..f {
                for l2 in 0..f {
                    same[l * f + l2] += real_dot(p(o, nw, l), p(o, nw, l2)) * inv * inv;
                }
            }
        }
    }
    // next[l][l2] = E Re <p_{0,l}, p_{1,l2}>.
    let mut next = vec![0.0; f * f];
    for x1 in 0..m {
        for l in 0..f {
            for l2 in 0..f {
                next[l * f + l2] +=
                    real_dot(&given_newer[(x1 * f + l) * n..(x1 * f + l + 1) * n], &given_older[(x1 * f + l2) * n..(x1 * f + l2 + 1) * n])
                        * inv;
            }
        }
    }
    let far: Vec<f64> = (0..f * f).map(|i| real_dot(&mean[(i / f) * n..(i / f + 1) * n], &mean[(i % f) * n..(i % f + 1) * n])).collect();

    let reach = (phi.max_ip_offset() / f) as isize + 2;
    let fi = f as isize;
    let mut e = 0.0;
    for delta in -reach..=reach {
        for l in 0..f {
            for l2 in 0..f {
                // Point (0, l) against point (delta, l2).
                let corr = match delta {
                    0 => same[l * f + l2],
                    1 => next[l * f + l2],
                    -1 => next[l2 * f + l],
                    _ => far[l * f + l2],
                };
                e += corr * phi.at_ip(delta * fi + l2 as isize - l as isize);
            }
        }
    }
    Ok(e)
}
