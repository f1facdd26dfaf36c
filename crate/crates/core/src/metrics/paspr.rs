use crate::error::{domain, Result};
use crate::types::Waveform;

/// Peak-to-average sum power ratio in dB over the interior of `w`,
/// discarding `discard_edge_symbols` symbol periods at each end.
pub fn paspr_db(w: &Waveform, discard_edge_symbols: usize) -> Result<f64> {
    let cut = discard_edge_symbols * w.q();
    if w.len() <= 2 * cut {
        return domain("waveform shorter than the discarded edges");
    }
    let p = w.sum_power();
    let interior = &p[cut..w.len() - cut];
    let mean = interior.iter().sum::<f64>() / interior.len() as f64;
    if !(mean > 0.0) {
        return domain("zero-energy waveform");
    }
    let peak = interior.iter().copied().fold(0.0, f64::max);
    Ok(10.0 * (peak / mean).log10())
}
