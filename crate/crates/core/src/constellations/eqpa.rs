//! Recursive zonal equal-area partition of the sphere.
//!
//! The sphere is cut into a north cap, a number of collars and a south cap,
//! every region having the same area. Each collar is split recursively as a
//! sphere of one dimension lower. Points are the region centres.

use std::f64::consts::PI;

use super::{check_es, check_size, to_radius};
use crate::error::Result;
use crate::types::{ConstellationSet, GeneratorTag};

/// Deterministic equal-area constellation of `m` points in `C^n`.
pub fn gen_eqpa(n: usize, m: usize, es: f64) -> Result<ConstellationSet> {
    check_size(n, m)?;
    check_es(es)?;
    let dim = 2 * n - 1;
    let polar = points_polar(dim, m);
    let mut real: Vec<Vec<f64>> = polar.iter().map(|s| polar_to_cart(s)).collect();
    to_radius(&mut real, es);
    ConstellationSet::from_real(n, es, GeneratorTag::Eqpa, &real)
}

/// `Gamma(k / 2)` for a positive integer `k`.
fn gamma_half(k: usize) -> f64 {
    let (mut g, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Area of the unit sphere `S^dim`.
fn area_of_sphere(dim: usize) -> f64 {
    2.0 * PI.powf((dim + 1) as f64 / 2.0) / gamma_half(dim + 1)
}

/// `int_0^s sin^k(t) dt`.
fn sin_power_integral(k: usize, s: f64) -> f64 {
    match k {
        0 => s,
        1 => 1.0 - s.cos(),
        _ => -s.sin().powi(k as i32 - 1) * s.cos() / k as f64 + (k - 1) as f64 / k as f64 * sin_power_integral(k - 2, s),
    }
}

/// Area of the spherical cap of geodesic radius `s` on `S^dim`.
fn area_of_cap(dim: usize, s: f64) -> f64 {
    if dim == 1 {
        2.0 * s
    } else {
        area_of_sphere(dim - 1) * sin_power_integral(dim - 1, s)
    }
}

/// Geodesic radius of the cap of the given area, by bisection.
fn sradius_of_cap(dim: usize, area: f64) -> f64 {
    if area >= area_of_sphere(dim) {
        return PI;
    }
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if area_of_cap(dim, mid) < area {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn ideal_region_area(dim: usize, m: usize) -> f64 {
    area_of_sphere(dim) / m as f64
}

fn polar_colat(dim: usize, m: usize) -> f64 {
    match m {
        1 => PI,
        2 => PI / 2.0,
        _ => sradius_of_cap(dim, ideal_region_area(dim, m)),
    }
}

fn num_collars(m: usize, c_polar: f64, a_ideal: f64) -> usize {
    if m > 2 && a_ideal > 0.0 {
        (((PI - 2.0 * c_polar) / a_ideal + 0.5).floor() as usize).max(1)
    } else {
        0
    }
}

/// Region centres in spherical coordinates `(s_0, ..., s_{dim-1})`.
fn points_polar(dim: usize, m: usize) -> Vec<Vec<f64>> {
    if m == 1 {
        return vec![vec![0.0; dim]];
    }
    if dim == 1 {
        return (1..=m).map(|k| vec![(k as f64 - 0.5) * 2.0 * PI / m as f64]).collect();
    }
    let area = ideal_region_area(dim, m);
    let c_polar = polar_colat(dim, m);
    let collars = num_collars(m, c_polar, area.powf(1.0 / dim as f64));

    let mut ideal = vec![1.0];
    if collars > 0 {
        let fitting = (PI - 2.0 * c_polar) / collars as f64;
        for k in 1..=collars {
            let top = area_of_cap(dim, c_polar + (k - 1) as f64 * fitting);
            let bot = area_of_cap(dim, c_polar + k as f64 * fitting);
            ideal.push((bot - top) / area);
        }
    }
    ideal.push(1.0);

    let mut counts = Vec::with_capacity(ideal.len());
    let mut carry = 0.0;
    for x in &ideal {
        let v = (x + carry + 0.5).floor();
        counts.push(v as usize);
        carry += x - v;
    }

    let mut caps = vec![c_polar];
    let mut subtotal = 1;
    for &c in counts.iter().take(collars + 1).skip(1) {
        subtotal += c;
        caps.push(sradius_of_cap(dim, subtotal as f64 * area));
    }
    caps.push(PI);

    let mut out = vec![vec![0.0; dim]];
    let mut offset = 0.0;
    for c in 0..collars {
        let (top, bot) = (caps[c], caps[c + 1]);
        let inner = counts[c + 1];
        let colat = 0.5 * (top + bot);
        for sub in points_polar(dim - 1, inner) {
            let mut p = vec![0.0; dim];
            if dim == 2 {
                p[0] = (sub[0] + 2.0 * PI * offset).rem_euclid(2.0 * PI);
            } else {
                p[..dim - 1].copy_from_slice(&sub);
            }
            p[dim - 1] = colat;
            out.push(p);
        }
        if dim == 2 {
            offset += (1.0 / inner as f64 - 1.0 / counts[c + 2] as f64) / 4.0;
            offset -= offset.floor();
        }
    }
    let mut south = vec![0.0; dim];
    south[dim - 1] = PI;
    out.push(south);
    out
}

fn polar_to_cart(s: &[f64]) -> Vec<f64> {
    let dim = s.len();
    let mut x = vec![0.0; dim + 1];
    let mut prod = 1.0;
    for k in (1..dim).rev() {
        x[k + 1] = prod * s[k].cos();
        prod *= s[k].sin();
    }
    x[1] = prod * s[0].sin();
    x[0] = prod * s[0].cos();
    x
}
