//! Spherical k-means over uniformly drawn sphere samples.

use rand::Rng;

use super::{check_es, check_size, to_radius};
use crate::error::{domain, Result};
use crate::par;
use crate::rng::{unit_sphere_point, RngSeed};
use crate::types::{ConstellationSet, GeneratorTag};

pub const KMC_SAMPLES_PER_POINT: usize = 200;
pub const KMC_MIN_SAMPLES: usize = 100_000;
pub const KMC_MAX_ITERS: usize = 300;

/// Default sample count for `m` points.
pub fn kmc_default_samples(m: usize) -> usize {
    (KMC_SAMPLES_PER_POINT * m).max(KMC_MIN_SAMPLES)
}

/// [`gen_kmc`] with [`kmc_default_samples`] and up to 300 Lloyd iterations.
pub fn gen_kmc_default(n: usize, m: usize, es: f64, seed: RngSeed) -> Result<ConstellationSet> {
    gen_kmc(n, m, es, kmc_default_samples(m), KMC_MAX_ITERS, seed)
}

/// Centroids of spherical k-means (cosine similarity) over `n_samples`
/// uniform points of `S^{2n-1}`.
///
/// Seeding is k-means++. A cluster that becomes empty is re-seeded with the
/// sample that is farthest from its own centroid.
pub fn gen_kmc(n: usize, m: usize, es: f64, n_samples: usize, max_iters: usize, seed: RngSeed) -> Result<ConstellationSet> {
    check_size(n, m)?;
    check_es(es)?;
    if n_samples < 100 * m {
        return domain(format!("k-means needs at least {} samples, got {n_samples}", 100 * m));
    }
    let dim = 2 * n;
    let mut rng = seed.rng();
    let samples: Vec<f64> = (0..n_samples).flat_map(|_| unit_sphere_point(&mut rng, dim)).collect();

    let mut centroids = plus_plus_init(&samples, dim, m, &mut rng);
    let mut assign = vec![usize::MAX; n_samples];
    for _ in 0..max_iters.max(1) {
        let (new_assign, sim) = assign_all(&samples, &centroids, dim);
        let changed = new_assign != assign;
        assign = new_assign;

        let mut sums = vec![0.0; m * dim];
        let mut counts = vec![0usize; m];
        for (s, &c) in samples.chunks_exact(dim).zip(&assign) {
            counts[c] += 1;
            sums[c * dim..(c + 1) * dim].iter_mut().zip(s).for_each(|(a, b)| *a += b);
        }
        let mut taken = vec![false; n_samples];
        for c in 0..m {
            let row = &mut sums[c * dim..(c + 1) * dim];
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if counts[c] == 0 || norm < 1e-12 {
                let far =
                    (0..n_samples).filter(|&i| !taken[i]).min_by(|&a, &b| sim[a].total_cmp(&sim[b])).expect("more samples than clusters");
                taken[far] = true;
                row.copy_from_slice(&samples[far * dim..(far + 1) * dim]);
            } else {
                row.iter_mut().for_each(|x| *x /= norm);
            }
        }
        centroids = sums;
        if !changed {
            break;
        }
    }

    let mut real: Vec<Vec<f64>> = centroids.chunks_exact(dim).map(|c| c.to_vec()).collect();
    to_radius(&mut real, es);
    ConstellationSet::from_real(n, es, GeneratorTag::Kmc, &real)
}

fn plus_plus_init<R: Rng>(samples: &[f64], dim: usize, m: usize, rng: &mut R) -> Vec<f64> {
    let count = samples.len() / dim;
    let mut centroids = Vec::with_capacity(m * dim);
    let first = rng.random_range(0..count);
    centroids.extend_from_slice(&samples[first * dim..(first + 1) * dim]);
    let mut d2: Vec<f64> = samples.chunks_exact(dim).map(|s| chord2(s, &centroids[..dim])).collect();
    for _ in 1..m {
        let total: f64 = d2.iter().sum();
        let mut target = rng.random::<f64>() * total;
        let mut pick = count - 1;
        for (i, &d) in d2.iter().enumerate() {
            if target < d {
                pick = i;
                break;
            }
            target -= d;
        }
        let c = samples[pick * dim..(pick + 1) * dim].to_vec();
        for (d, s) in d2.iter_mut().zip(samples.chunks_exact(dim)) {
            *d = d.min(chord2(s, &c));
        }
        centroids.extend_from_slice(&c);
    }
    centroids
}

fn chord2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Best centroid per sample and the achieved cosine similarity.
fn assign_all(samples: &[f64], centroids: &[f64], dim: usize) -> (Vec<usize>, Vec<f64>) {
    const CHUNK: usize = 4096;
    let count = samples.len() / dim;
    let parts = par::map_indexed(count.div_ceil(CHUNK), |p| {
        let lo = p * CHUNK;
        let hi = (lo + CHUNK).min(count);
        let mut a = Vec::with_capacity(hi - lo);
        let mut s = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let x = &samples[i * dim..(i + 1) * dim];
            let mut best = (0, f64::NEG_INFINITY);
            for (c, cen) in centroids.chunks_exact(dim).enumerate() {
                let v: f64 = x.iter().zip(cen).map(|(p, q)| p * q).sum();
                if v > best.1 {
                    best = (c, v);
                }
            }
            a.push(best.0);
            s.push(best.1);
        }
        (a, s)
    });
    let mut assign = Vec::with_capacity(count);
    let mut sim = Vec::with_capacity(count);
    for (a, s) in parts {
        assign.extend(a);
        sim.extend(s);
    }
    (assign, sim)
}
