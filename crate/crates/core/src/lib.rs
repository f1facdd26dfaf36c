//! Phase shift keying on the hypersphere (PSKH).
//!
//! Multi-antenna constellations whose points all share one energy, the pulse
//! shaping schemes that keep the continuous-time sum power close to constant,
//! and the receivers needed to undo the intersymbol interference those
//! schemes introduce. The crate is organised bottom-up:
//!
//! * [`types`], [`energy`], [`rng`]: shared value types, Eb/N0 bookkeeping and
//!   deterministic randomness.
//! * [`constellations`]: the four generators (EQPA, k-means, potential
//!   minimisation, per-antenna PSK), distance profiles and hypersymbol
//!   partitions.
//! * [`modulation`]: pulses, SLERP and waveform synthesis for conventional
//!   PAM, T/2 signaling and spherical interpolation (SI) signaling.
//! * [`channel`]: flat MIMO channel draws and noise.
//! * [`receivers`]: symbolwise ML, whitened matched filter, and the trellis
//!   family (VA, DFE, DDFSE, RSSE, iterative VA).
//! * [`link`] and [`metrics`]: end-to-end link simulation, SER curves, PASPR,
//!   spectra and constellation-constrained mutual information.
//!
//! Monte Carlo workloads fan out over rayon when the `parallel` feature is
//! enabled (the default). Results never depend on the number of workers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod channel;
pub mod constellations;
pub mod energy;
pub mod error;
pub mod link;
pub mod metrics;
pub mod modulation;
pub mod par;
pub mod receivers;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use rng::RngSeed;
pub use types::{ChannelKind, ChannelRealization, ConstellationSet, GeneratorTag, Waveform, C64};
