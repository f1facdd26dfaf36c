//! Per-antenna PSK.

use std::f64::consts::PI;

use super::{check_es, check_size};
use crate::error::Result;
use crate::types::{ConstellationSet, GeneratorTag, C64};

/// PSK order per antenna: powers of two with product `m`, as equal as
/// possible, larger orders on lower antenna indices.
pub fn papsk_orders(n: usize, m: usize) -> Result<Vec<usize>> {
    check_size(n, m)?;
    let bits = m.trailing_zeros() as usize;
    Ok((0..n).map(|i| 1usize << (bits / n + usize::from(i < bits % n))).collect())
}

/// Independent PSK on every antenna with energy `es / n` each.
///
/// Labels are row-major with antenna 0 most significant, so every label bit
/// belongs to exactly one antenna.
pub fn gen_papsk(n: usize, m: usize, es: f64) -> Result<ConstellationSet> {
    check_es(es)?;
    let orders = papsk_orders(n, m)?;
    let amp = (es / n as f64).sqrt();
    let mut points = Vec::with_capacity(m * n);
    for label in 0..m {
        let mut rest = label;
        let mut digits = vec![0; n];
        for a in (0..n).rev() {
            digits[a] = rest % orders[a];
            rest /= orders[a];
        }
        for (a, &d) in digits.iter().enumerate() {
            points.push(C64::from_polar(amp, 2.0 * PI * d as f64 / orders[a] as f64));
        }
    }
    ConstellationSet::new(n, es, GeneratorTag::Papsk, points)
}
