//! PASPR, spectrum, SER and mutual-information measurements.

mod capacity;
pub mod csv;
mod paspr;
mod ser;
mod spectrum;

pub use capacity::{mi_constellation, MiEstimate};
pub use paspr::paspr_db;
pub use ser::{run_ser, SerConfig, SerCurve, SerPoint};
pub use spectrum::{psd_estimate, SpectrumEstimate, DEFAULT_FRACTIONS, PEAK_FLOOR_DB};

/// Peak-power referenced energy per bit, in dB.
pub fn ebmax_n0(ebn0_db: f64, paspr_db: f64) -> f64 {
    ebn0_db + paspr_db
}
