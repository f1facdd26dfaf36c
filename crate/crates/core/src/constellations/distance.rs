//! Minimum distance, average neighbour distance and neighbour tables.

use std::collections::BTreeMap;

use crate::error::{domain, Result};
use crate::par;
use crate::types::{dist_sqr, ConstellationSet, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceProfile {
    pub d_min: f64,
    /// Mean over points of the distance to the nearest other point.
    pub d_nb_avg: f64,
    pub nearest_neighbor_index: Vec<usize>,
    /// `n_NB -> table`, where `table[i]` lists the `n_NB` nearest points to `i`.
    pub neighbor_tables: BTreeMap<usize, Vec<Vec<usize>>>,
}

fn distance_matrix(points: &[C64], n: usize) -> Vec<f64> {
    let m = points.len() / n;
    par::map_indexed(m, |i| {
        let pi = &points[i * n..(i + 1) * n];
        (0..m).map(|j| dist_sqr(pi, &points[j * n..(j + 1) * n]).sqrt()).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

fn sorted_neighbors(dist: &[f64], m: usize, i: usize) -> Vec<usize> {
    let row = &dist[i * m..(i + 1) * m];
    let mut idx: Vec<usize> = (0..m).filter(|&j| j != i).collect();
    idx.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
    idx
}

/// Exact pairwise distance profile of `a`, with the neighbour table for
/// `n_nb` (`0` skips the table). Ties go to the lower index.
pub fn distance_profile(a: &ConstellationSet, n_nb: usize) -> Result<DistanceProfile> {
    let (n, m) = (a.n(), a.m());
    if n_nb >= m {
        return domain(format!("n_NB = {n_nb} must be below M = {m}"));
    }
    let dist = distance_matrix(a.points(), n);
    let mut d_min = f64::INFINITY;
    let mut sum = 0.0;
    let mut nearest = Vec::with_capacity(m);
    for i in 0..m {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in 0..m {
            if j != i && dist[i * m + j] < best.1 {
                best = (j, dist[i * m + j]);
            }
        }
        nearest.push(best.0);
        sum += best.1;
        d_min = d_min.min(best.1);
    }
    let mut neighbor_tables = BTreeMap::new();
    if n_nb > 0 {
        let table = (0..m).map(|i| sorted_neighbors(&dist, m, i)[..n_nb].to_vec()).collect();
        neighbor_tables.insert(n_nb, table);
    }
    Ok(DistanceProfile { d_min, d_nb_avg: sum / m as f64, nearest_neighbor_index: nearest, neighbor_tables })
}

/// The `n_nb` nearest points to every point of an arbitrary point-major set,
/// e.g. the effective constellation `H A`.
pub fn neighbor_table(points: &[C64], n: usize, n_nb: usize) -> Result<Vec<Vec<usize>>> {
    let m = points.len() / n;
    if n_nb >= m {
        return domain(format!("n_NB = {n_nb} must be below M = {m}"));
    }
    let dist = distance_matrix(points, n);
    Ok((0..m).map(|i| sorted_neighbors(&dist, m, i)[..n_nb].to_vec()).collect())
}
