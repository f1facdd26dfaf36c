//! Flat MIMO channel: Rayleigh draws, noise and the distortion diagnostic.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{domain, Result};
use crate::rng::{complex_normal, RngSeed};
use crate::types::{mat_vec_into, ChannelKind, ChannelRealization, C64};

/// Received T-spaced observations, one or more streams of `n`-vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedFrame {
    pub n: usize,
    /// Number of transmitted symbols the observations describe.
    pub symbols: usize,
    /// Each stream is point-major: `stream[j * n + r]` is antenna `r` at time `j`.
    pub streams: Vec<Vec<C64>>,
    pub channel: ChannelRealization,
}

impl ReceivedFrame {
    pub fn samples(&self) -> &[C64] {
        &self.streams[0]
    }

    /// Observations in the first stream.
    pub fn len(&self) -> usize {
        self.streams.first().map_or(0, |s| s.len() / self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Channel with i.i.d. `CN(0, 1)` entries and no noise.
pub fn draw_rayleigh(n: usize, seed: RngSeed) -> Result<ChannelRealization> {
    if n < 1 {
        return domain("antenna count must be at least 1");
    }
    Ok(draw_rayleigh_with(n, &mut seed.rng()))
}

pub(crate) fn draw_rayleigh_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ChannelRealization {
    let h = DMatrix::from_fn(n, n, |_, _| complex_normal(rng, 1.0));
    ChannelRealization { h, sigma2: 0.0, kind: ChannelKind::RayleighIid }
}

/// `y[k] = H x[k] + n[k]` with i.i.d. `CN(0, sigma2)` noise components.
pub fn apply_channel(x: &[C64], ch: &ChannelRealization, seed: RngSeed) -> Result<ReceivedFrame> {
    let n = ch.n();
    if !x.len().is_multiple_of(n) {
        return domain(format!("{} values do not form {n}-vectors", x.len()));
    }
    let y = apply_with(x, ch, &mut seed.rng());
    Ok(ReceivedFrame { n, symbols: x.len() / n, streams: vec![y], channel: ch.clone() })
}

pub(crate) fn apply_with<R: Rng + ?Sized>(x: &[C64], ch: &ChannelRealization, rng: &mut R) -> Vec<C64> {
    let n = ch.n();
    let mut y = vec![C64::new(0.0, 0.0); x.len()];
    for (xi, yi) in x.chunks_exact(n).zip(y.chunks_exact_mut(n)) {
        mat_vec_into(&ch.h, xi, yi);
        if ch.sigma2 > 0.0 {
            yi.iter_mut().for_each(|v| *v += complex_normal(rng, ch.sigma2));
        }
    }
    y
}

/// Real `2n x 2n` representation `[[Re H, -Im H], [Im H, Re H]]`.
pub fn real_representation(h: &DMatrix<C64>) -> DMatrix<f64> {
    let (r, c) = h.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = h[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Ratio of the largest to the smallest singular value of the real
/// representation of `H`; `+inf` when `H` is singular.
pub fn svd_distortion_ratio(ch: &ChannelRealization) -> f64 {
    let sv = real_representation(&ch.h).singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(max > 0.0) || min <= max * 1e-12 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_ratio_is_one() {
        let ch = ChannelRealization::identity(3, 0.0).unwrap();
        assert!((svd_distortion_ratio(&ch) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_ratio() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)]));
        let ch = ChannelRealization::explicit(h, 0.0).unwrap();
        assert!((svd_distortion_ratio(&ch) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_channel_is_infinite() {
        let h = DMatrix::from_element(2, 2, C64::new(1.0, 1.0));
        let ch = ChannelRealization::explicit(h, 0.0).unwrap();
        assert!(svd_distortion_ratio(&ch).is_infinite());
    }

    #[test]
    fn noiseless_identity_is_transparent() {
        let x: Vec<C64> = (0..12).map(|i| C64::new(i as f64, 1.0)).collect();
        let ch = ChannelRealization::identity(3, 0.0).unwrap();
        assert_eq!(apply_channel(&x, &ch, RngSeed(3)).unwrap().samples(), x.as_slice());
    }
}
