//! Constellation generators and distance structure.
//!
//! All generators work on the real sphere `S^{2n-1}` of radius `sqrt(Es)` and
//! pair coordinates as `(re_1, im_1, ..., re_n, im_n)`.

mod distance;
mod eqpa;
pub mod io;
mod kmeans;
mod papsk;
mod partition;
mod potential;

pub use distance::{distance_profile, neighbor_table, DistanceProfile};
pub use eqpa::gen_eqpa;
pub use kmeans::{gen_kmc, gen_kmc_default, kmc_default_samples, KMC_MAX_ITERS, KMC_MIN_SAMPLES};
pub use papsk::{gen_papsk, papsk_orders};
pub use partition::{hypersymbol_partition, HypersymbolPartition};
pub use potential::{gen_pm, gen_pm_default, riesz_energy, PM_DECAY};

use crate::error::{domain, Result};

pub(crate) fn check_size(n: usize, m: usize) -> Result<()> {
    if n < 1 {
        return domain("antenna count must be at least 1");
    }
    if m < 2 || !m.is_power_of_two() {
        return domain(format!("M must be a power of two >= 2, got {m}"));
    }
    if m > u16::MAX as usize + 1 {
        return domain(format!("M = {m} exceeds the supported maximum of 65536"));
    }
    Ok(())
}

pub(crate) fn check_es(es: f64) -> Result<()> {
    if !(es > 0.0 && es.is_finite()) {
        return domain(format!("symbol energy must be positive, got {es}"));
    }
    Ok(())
}

/// Scales real unit vectors to radius `sqrt(es)`, renormalising away rounding.
pub(crate) fn to_radius(real: &mut [Vec<f64>], es: f64) {
    let r = es.sqrt();
    for p in real.iter_mut() {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        p.iter_mut().for_each(|x| *x *= r / norm);
    }
}
