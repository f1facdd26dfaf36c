use crate::error::{domain, Result};
use crate::par::map_indexed;
use crate::rng::{complex_normal, RngSeed};
use crate::types::{norm_sqr, ConstellationSet, C64};

/// Monte Carlo mutual information with its standard error, in bits per use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MiEstimate {
    pub bits: f64,
    pub std_err: f64,
}

const CHUNK: usize = 64;

/// `I(X;Y)` of uniform signaling over `a` on the unitary vector AWGN channel
/// with per-component noise variance `sigma2`.
pub fn mi_constellation(a: &ConstellationSet, sigma2: f64, n_noise_draws: usize, seed: RngSeed) -> Result<MiEstimate> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return domain("noise variance must be positive and finite");
    }
    if n_noise_draws < 2 {
        return domain("need at least two noise draws");
    }
    let (m, n) = (a.m(), a.n());
    let chunks = n_noise_draws.div_ceil(CHUNK);
    let per_chunk = map_indexed(chunks, |c| {
        let mut rng = seed.derive(c as u64).rng();
        let draws = CHUNK.min(n_noise_draws - c * CHUNK);
        let mut noise = vec![C64::new(0.0, 0.0); n];
        let mut e = vec![0.0; m];
        let mut sums = (0.0, 0.0);
        for _ in 0..draws {
            let mut avg = 0.0;
            for i in 0..m {
                noise.iter_mut().for_each(|z| *z = complex_normal(&mut rng, sigma2));
                let nn = norm_sqr(&noise);
                let ai = a.point(i);
                for (j, ej) in e.iter_mut().enumerate() {
                    let d: f64 = ai.iter().zip(a.point(j)).zip(&noise).map(|((x, y), z)| (x - y + z).norm_sqr()).sum();
                    *ej = (nn - d) / sigma2;
                }
                let mx = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = mx + e.iter().map(|v| (v - mx).exp()).sum::<f64>().ln();
                avg += lse / std::f64::consts::LN_2;
            }
            let v = avg / m as f64;
            sums.0 += v;
            sums.1 += v * v;
        }
        sums
    });
    let (s1, s2) = per_chunk.iter().fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let k = n_noise_draws as f64;
    let mean = s1 / k;
    let var = ((s2 - k * mean * mean) / (k - 1.0)).max(0.0);
    let rm = (m as f64).log2();
    Ok(MiEstimate { bits: (rm - mean).clamp(0.0, rm), std_err: (var / k).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellations::gen_papsk;

    #[test]
    fn limits() {
        let a = gen_papsk(1, 8, 1.0).unwrap();
        let hi = mi_constellation(&a, 1e-4, 200, RngSeed(1)).unwrap();
        assert!((hi.bits - 3.0).abs() < 1e-6);
        let lo = mi_constellation(&a, 1e4, 2000, RngSeed(1)).unwrap();
        assert!(lo.bits < 0.01, "{lo:?}");
    }

    #[test]
    fn rejects_bad_noise() {
        let a = gen_papsk(1, 4, 1.0).unwrap();
        assert!(mi_constellation(&a, 0.0, 10, RngSeed(0)).is_err());
    }
}
