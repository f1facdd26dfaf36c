//! Pulses, spherical interpolation and transmit waveform synthesis.

mod autocorr;
pub mod dump;
mod pulse;
mod slerp;
mod synth;

pub use autocorr::{autocorr_table, AutocorrelationTable};
pub use pulse::{make_pulse, make_t2_pulse, PulseKind, PulseShape};
pub use slerp::{slerp, SlerpPath, ANTIPODAL_TOL, LINEAR_TOL};
pub use synth::{si_points, synthesize_pam, synthesize_points, synthesize_si, synthesize_t2, t2_points};
