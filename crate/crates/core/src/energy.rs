//! Energy per bit bookkeeping.
//!
//! Symbol periods are normalised to T = 1, so the noise variance per complex
//! component equals N0. On a unitary channel the received Eb/N0 is
//! `Es / (Rm σ²)`; on i.i.d. Rayleigh fading each of the `n` receive antennas
//! collects `Es` on average, giving `n Es / (Rm σ²)`.

use crate::error::{domain, Result};
use crate::types::ChannelKind;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

fn check(es: f64, rm: u32, sigma2: f64) -> Result<()> {
    if !(es > 0.0 && es.is_finite()) {
        return domain(format!("symbol energy must be positive, got {es}"));
    }
    if rm < 1 {
        return domain("rate per modulation interval must be at least 1 bit");
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return domain(format!("noise variance must be positive, got {sigma2}"));
    }
    Ok(())
}

/// Eb/N0 (linear) on the vector AWGN channel.
pub fn ebn0_awgn(es: f64, rm: u32, sigma2: f64) -> Result<f64> {
    check(es, rm, sigma2)?;
    Ok(es / (rm as f64 * sigma2))
}

/// Average received Eb/N0 (linear) on the i.i.d. Rayleigh channel.
pub fn ebn0_fading(es: f64, rm: u32, sigma2: f64, n: usize) -> Result<f64> {
    check(es, rm, sigma2)?;
    if n < 1 {
        return domain("antenna count must be at least 1");
    }
    Ok(n as f64 * es / (rm as f64 * sigma2))
}

/// Noise variance that realises `target_ebn0_db` for the given channel kind.
///
/// Rayleigh channels use the fading convention; identity and explicit
/// channels use the transmit-side AWGN convention.
pub fn sigma2_for_ebn0(target_ebn0_db: f64, es: f64, rm: u32, n: usize, kind: ChannelKind) -> Result<f64> {
    if !target_ebn0_db.is_finite() {
        return domain("target Eb/N0 must be finite");
    }
    check(es, rm, 1.0)?;
    if n < 1 {
        return domain("antenna count must be at least 1");
    }
    let ebn0 = db_to_linear(target_ebn0_db);
    let gain = match kind {
        ChannelKind::RayleighIid => n as f64,
        ChannelKind::IdentityAwgn | ChannelKind::Explicit => 1.0,
    };
    Ok(gain * es / (rm as f64 * ebn0))
}
