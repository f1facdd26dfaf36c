//! Riesz energy minimisation by projected gradient descent.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_es, check_size, to_radius};
use crate::error::{domain, Result};
use crate::par;
use crate::rng::{unit_sphere_point, RngSeed};
use crate::types::{ConstellationSet, GeneratorTag};

/// Per-step multiplicative decay of the step size.
pub const PM_DECAY: f64 = 0.999;
pub const PM_EXPONENT: f64 = 2.0;
pub const PM_STEPS: usize = 5000;
pub const PM_STEP_SIZE: f64 = 0.1;

/// [`gen_pm`] with exponent 2, 5000 steps and initial step size 0.1.
pub fn gen_pm_default(n: usize, m: usize, es: f64, seed: RngSeed) -> Result<ConstellationSet> {
    gen_pm(n, m, es, PM_EXPONENT, PM_STEPS, PM_STEP_SIZE, seed)
}

/// Riesz energy `sum_{i<j} |a_i - a_j|^-s` of unit real vectors (point-major).
pub fn riesz_energy(x: &[f64], dim: usize, s: f64) -> f64 {
    let m = x.len() / dim;
    let mut e = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let r2: f64 = (0..dim).map(|d| (x[i * dim + d] - x[j * dim + d]).powi(2)).sum();
            e += r2.powf(-s / 2.0);
        }
    }
    e
}

/// Particles on `S^{2n-1}` pushed apart by the Riesz potential.
///
/// Each step moves every particle against the tangential part of its energy
/// gradient; the largest move is `step_size / sqrt(M)` and the step size
/// decays by [`PM_DECAY`]. Points are renormalised after every step and the
/// lowest-energy iterate is returned.
pub fn gen_pm(n: usize, m: usize, es: f64, riesz_exponent: f64, steps: usize, step_size: f64, seed: RngSeed) -> Result<ConstellationSet> {
    check_size(n, m)?;
    check_es(es)?;
    if !(riesz_exponent > 0.0 && riesz_exponent.is_finite()) {
        return domain(format!("Riesz exponent must be positive, got {riesz_exponent}"));
    }
    if steps < 1 {
        return domain("at least one descent step is required");
    }
    if !(step_size > 0.0 && step_size.is_finite()) {
        return domain(format!("step size must be positive, got {step_size}"));
    }
    let dim = 2 * n;
    let mut rng = seed.rng();
    let mut x: Vec<f64> = (0..m).flat_map(|_| unit_sphere_point(&mut rng, dim)).collect();
    let mut best = x.clone();
    let mut best_energy = f64::INFINITY;
    let mut eta = step_size;
    let s = riesz_exponent;

    for _ in 0..steps {
        let rows = par::map_indexed(m, |i| {
            let xi = &x[i * dim..(i + 1) * dim];
            let mut g = vec![0.0; dim];
            let mut e = 0.0;
            let mut overlap = false;
            for j in 0..m {
                if j == i {
                    continue;
                }
                let xj = &x[j * dim..(j + 1) * dim];
                let r2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
                if r2 < 1e-24 {
                    overlap = true;
                    continue;
                }
                e += r2.powf(-s / 2.0);
                let w = -s * r2.powf(-s / 2.0 - 1.0);
                for d in 0..dim {
                    g[d] += w * (xi[d] - xj[d]);
                }
            }
            let radial: f64 = g.iter().zip(xi).map(|(a, b)| a * b).sum();
            g.iter_mut().zip(xi).for_each(|(a, b)| *a -= radial * b);
            (g, e, overlap)
        });

        if rows.iter().any(|r| r.2) {
            for v in x.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *v += 1e-6 * z;
            }
            normalize_rows(&mut x, dim);
            continue;
        }
        let energy = rows.iter().map(|r| r.1).sum::<f64>() / 2.0;
        if energy < best_energy {
            best_energy = energy;
            best.copy_from_slice(&x);
        }
        let gmax = rows.iter().map(|r| r.0.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
        if gmax > 0.0 {
            let scale = eta / gmax / (m as f64).sqrt();
            for (i, r) in rows.iter().enumerate() {
                for d in 0..dim {
                    x[i * dim + d] -= scale * r.0[d];
                }
            }
            normalize_rows(&mut x, dim);
        }
        eta *= PM_DECAY;
    }
    if riesz_energy(&x, dim, s) < best_energy {
        best.copy_from_slice(&x);
    }

    let mut real: Vec<Vec<f64>> = best.chunks_exact(dim).map(|c| c.to_vec()).collect();
    to_radius(&mut real, es);
    ConstellationSet::from_real(n, es, GeneratorTag::Pm, &real)
}

fn normalize_rows(x: &mut [f64], dim: usize) {
    for row in x.chunks_exact_mut(dim) {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        row.iter_mut().for_each(|v| *v /= norm);
    }
}
