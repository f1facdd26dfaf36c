//! Balanced hypersymbol partitions with large intra-subset distance.

use rand::seq::SliceRandom;

use crate::error::{domain, Result};
use crate::rng::RngSeed;
use crate::types::{dist_sqr, ConstellationSet};

/// Number of independently seeded greedy starts.
const RESTARTS: u64 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct HypersymbolPartition {
    pub subsets: Vec<Vec<usize>>,
    /// Minimum distance inside each subset; `+inf` for singletons.
    pub intra_subset_dmin: Vec<f64>,
}

impl HypersymbolPartition {
    /// Smallest intra-subset minimum distance.
    pub fn objective(&self) -> f64 {
        self.intra_subset_dmin.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Subset label of every point.
    pub fn labels(&self, m: usize) -> Vec<usize> {
        let mut l = vec![usize::MAX; m];
        for (k, s) in self.subsets.iter().enumerate() {
            for &i in s {
                l[i] = k;
            }
        }
        l
    }

    pub fn k(&self) -> usize {
        self.subsets.len()
    }

    /// Partition of `0..m` into singletons `{0}, {1}, ...`.
    pub fn singletons(m: usize) -> Self {
        Self { subsets: (0..m).map(|i| vec![i]).collect(), intra_subset_dmin: vec![f64::INFINITY; m] }
    }

    /// Checks that the subsets cover `0..m` exactly once.
    pub fn validate(&self, m: usize) -> Result<()> {
        let mut seen = vec![false; m];
        for s in &self.subsets {
            for &i in s {
                if i >= m || seen[i] {
                    return domain(format!("partition is not a partition of 0..{m}"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return domain(format!("partition does not cover 0..{m}"));
        }
        Ok(())
    }
}

struct Dist {
    m: usize,
    d: Vec<f64>,
}

impl Dist {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.m + j]
    }

    fn intra(&self, s: &[usize]) -> f64 {
        let mut best = f64::INFINITY;
        for (x, &i) in s.iter().enumerate() {
            for &j in &s[x + 1..] {
                best = best.min(self.get(i, j));
            }
        }
        best
    }
}

/// Sorted (ascending) intra distances; compared lexicographically.
fn score(dist: &Dist, subsets: &[Vec<usize>]) -> Vec<f64> {
    let mut v: Vec<f64> = subsets.iter().map(|s| dist.intra(s)).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn better(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return true;
        }
        if x < y {
            return false;
        }
    }
    false
}

/// Splits the points of `a` into `k` equal subsets, maximising the smallest
/// distance inside any subset.
///
/// Greedy max-min construction from several seeded starts, each refined by
/// pairwise swaps between subsets until no swap improves the sorted vector of
/// intra-subset distances. The minimum therefore never decreases during the
/// search.
pub fn hypersymbol_partition(a: &ConstellationSet, k: usize, seed: RngSeed) -> Result<HypersymbolPartition> {
    let m = a.m();
    if k == 0 || !m.is_multiple_of(k) {
        return domain(format!("K = {k} does not divide M = {m}"));
    }
    if k == m {
        return Ok(HypersymbolPartition::singletons(m));
    }
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            d[i * m + j] = dist_sqr(a.point(i), a.point(j)).sqrt();
        }
    }
    let dist = Dist { m, d };

    let mut best: Option<(Vec<f64>, Vec<Vec<usize>>)> = None;
    for r in 0..RESTARTS {
        let mut subsets = greedy(&dist, k, seed.derive(r));
        local_search(&dist, &mut subsets);
        let sc = score(&dist, &subsets);
        if best.as_ref().is_none_or(|(b, _)| better(&sc, b)) {
            best = Some((sc, subsets));
        }
    }
    let (_, mut subsets) = best.expect("at least one restart");
    for s in subsets.iter_mut() {
        s.sort_unstable();
    }
    subsets.sort_by_key(|s| s[0]);
    let intra_subset_dmin = subsets.iter().map(|s| dist.intra(s)).collect();
    Ok(HypersymbolPartition { subsets, intra_subset_dmin })
}

fn greedy(dist: &Dist, k: usize, seed: RngSeed) -> Vec<Vec<usize>> {
    let m = dist.m;
    let size = m / k;
    let mut rng = seed.rng();
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);

    // K mutually far seeds by farthest-point traversal.
    let mut seeds = vec![order[0]];
    while seeds.len() < k {
        let next = order
            .iter()
            .copied()
            .filter(|i| !seeds.contains(i))
            .max_by(|&a, &b| {
                let da = seeds.iter().map(|&s| dist.get(a, s)).fold(f64::INFINITY, f64::min);
                let db = seeds.iter().map(|&s| dist.get(b, s)).fold(f64::INFINITY, f64::min);
                da.total_cmp(&db)
            })
            .expect("points remain");
        seeds.push(next);
    }
    let mut subsets: Vec<Vec<usize>> = seeds.iter().map(|&s| vec![s]).collect();
    for &p in order.iter().filter(|p| !seeds.contains(p)) {
        let mut pick = None;
        let mut pick_d = f64::NEG_INFINITY;
        for (c, s) in subsets.iter().enumerate() {
            if s.len() >= size {
                continue;
            }
            let d = s.iter().map(|&q| dist.get(p, q)).fold(f64::INFINITY, f64::min);
            if d > pick_d {
                pick_d = d;
                pick = Some(c);
            }
        }
        subsets[pick.expect("capacity remains")].push(p);
    }
    subsets
}

fn local_search(dist: &Dist, subsets: &mut [Vec<usize>]) {
    let k = subsets.len();
    let mut current = score(dist, subsets);
    loop {
        let mut improved = false;
        'outer: for a in 0..k {
            for b in a + 1..k {
                for x in 0..subsets[a].len() {
                    for y in 0..subsets[b].len() {
                        let (pa, pb) = (subsets[a][x], subsets[b][y]);
                        subsets[a][x] = pb;
                        subsets[b][y] = pa;
                        let sc = score(dist, subsets);
                        if better(&sc, &current) {
                            debug_assert!(sc[0] >= current[0]);
                            current = sc;
                            improved = true;
                            continue 'outer;
                        }
                        subsets[a][x] = pa;
                        subsets[b][y] = pb;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}
