//! Generic trellis search with per-survivor decision feedback.
//!
//! The state at step `t` is the candidate position of the last `nu` symbols
//! (mixed radix, lag 1 least significant). With a hypersymbol partition the
//! oldest slot holds a subset label instead. Terms reaching beyond the state
//! read the survivor's own symbol history, which is kept by register
//! exchange. After the last symbol `nu` termination steps repeat it.

use super::model::PreparedModel;
use crate::error::{Error, Result};
use crate::types::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub symbols: Vec<usize>,
    /// Accumulated metric of the surviving path.
    pub path_metric: f64,
    /// Largest number of branches evaluated in one step.
    pub max_branches: u128,
}

pub(crate) struct Search<'a> {
    pub nu: usize,
    /// Sorted candidate symbols per time step; `None` allows every symbol.
    pub candidates: Option<&'a [Vec<u16>]>,
    /// Subset label per symbol and label count, applied to the oldest slot.
    pub partition: Option<(&'a [usize], usize)>,
    /// `None` keeps full survivor histories and decides at the frame end.
    pub traceback: Option<usize>,
    pub branch_cap: u128,
}

impl Search<'_> {
    fn cand_len(&self, m: usize, k: usize, tau: usize) -> usize {
        match self.candidates {
            Some(c) => c[tau.min(k - 1)].len(),
            None => m,
        }
    }

    fn cand(&self, k: usize, tau: usize, pos: usize) -> usize {
        match self.candidates {
            Some(c) => c[tau.min(k - 1)][pos] as usize,
            None => pos,
        }
    }

    fn cand_pos(&self, k: usize, tau: usize, sym: usize) -> usize {
        match self.candidates {
            Some(c) => c[tau.min(k - 1)].binary_search(&(sym as u16)).expect("symbol is a candidate"),
            None => sym,
        }
    }

    /// Radix of the slot for lag `i` at step `t`.
    fn radix(&self, m: usize, k: usize, t: usize, i: usize) -> usize {
        if i > t {
            return 1;
        }
        match self.partition {
            Some((_, labels)) if i == self.nu => labels,
            _ => self.cand_len(m, k, t - i),
        }
    }

    fn states(&self, m: usize, k: usize, t: usize) -> usize {
        (1..=self.nu).map(|i| self.radix(m, k, t, i)).product()
    }

    /// Branches evaluated at the busiest step.
    pub fn max_branches(&self, m: usize, k: usize) -> u128 {
        let mut worst = 0u128;
        for t in 0..k + self.nu {
            let s: u128 = (1..=self.nu).map(|i| self.radix(m, k, t, i) as u128).product();
            let b = if t < k { self.cand_len(m, k, t) as u128 } else { 1 };
            worst = worst.max(s * b);
        }
        worst
    }

    /// Runs the search over `k` symbols given the observation streams.
    pub fn run(&self, model: &PreparedModel, obs: &[Vec<C64>], k: usize) -> Result<Decoded> {
        let (m, n) = (model.m, model.n);
        if k == 0 {
            return Ok(Decoded { symbols: Vec::new(), path_metric: 0.0, max_branches: 0 });
        }
        if let Some((_, l)) = self.partition {
            assert!(self.nu >= 2 && l >= 1, "partitioned slots need nu >= 2");
        }
        let required = self.max_branches(m, k);
        if required > self.branch_cap {
            return Err(Error::Infeasible { required, cap: self.branch_cap });
        }
        let steps = k + self.nu;
        let w = match self.traceback {
            Some(d) => (d + 1).max(model.depth).max(self.nu + 1),
            None => steps,
        };

        let mut metric = vec![0.0f64];
        let mut hist = vec![0u16; w];
        let mut decided = vec![usize::MAX; k];

        let n_streams = model.streams.len();
        let mut resid = vec![C64::new(0.0, 0.0); n_streams * n];
        let mut present = vec![false; n_streams];
        let mut scratch = vec![C64::new(0.0, 0.0); n];

        for t in 0..steps {
            let s_old = metric.len();
            let s_new = self.states(m, k, t + 1);
            let terminating = t >= k;
            let r0 = self.cand_len(m, k, t);
            // Lower part of the new key: old slots for lags 1..nu-1.
            let p_keep: usize = (1..self.nu).map(|i| self.radix(m, k, t, i)).product();
            let p_part: usize = (1..self.nu.saturating_sub(1)).map(|i| self.radix(m, k, t, i)).product();

            let mut new_metric = vec![f64::INFINITY; s_new];
            let mut pred = vec![usize::MAX; s_new];
            let mut new_sym = vec![0u16; s_new];

            for (si, st) in model.streams.iter().enumerate() {
                let j = t as isize - st.delay as isize;
                present[si] = j >= 0 && ((j as usize + 1) * n) <= obs[si].len();
            }

            for old in 0..s_old {
                let base_metric = metric[old];
                if base_metric == f64::INFINITY {
                    continue;
                }
                let h = &hist[old * w..(old + 1) * w];
                let sym = |tau: usize| h[tau % w] as usize;

                for (si, st) in model.streams.iter().enumerate() {
                    if !present[si] {
                        continue;
                    }
                    let j = t - st.delay;
                    let r = &mut resid[si * n..(si + 1) * n];
                    r.copy_from_slice(&obs[si][j * n..(j + 1) * n]);
                    for term in st.terms.iter().filter(|x| x.lag >= 1) {
                        let newest = t as isize - term.lag;
                        let idx = if term.interp {
                            let older = newest - 1;
                            if older < 0 || older >= k as isize {
                                continue;
                            }
                            sym(older as usize) * m + sym(newest as usize)
                        } else {
                            if newest < 0 || newest >= k as isize {
                                continue;
                            }
                            sym(newest as usize)
                        };
                        let v = &term.values[idx * n..(idx + 1) * n];
                        r.iter_mut().zip(v).for_each(|(a, b)| *a -= b);
                    }
                }

                let lower = match self.partition {
                    Some((labels, _)) => {
                        let keep = old % p_part;
                        let tau = t as isize + 1 - self.nu as isize;
                        let lab = if tau >= 0 { labels[sym(tau as usize)] } else { 0 };
                        keep + p_part * lab
                    }
                    None => old % p_keep,
                };
                let prev = if t >= 1 { Some(sym(t - 1)) } else { None };

                let (lo, hi) = if terminating {
                    let p = self.cand_pos(k, t, prev.expect("termination follows a symbol"));
                    (p, p + 1)
                } else {
                    (0, r0)
                };
                for pos in lo..hi {
                    let c = if terminating { prev.unwrap_or(0) } else { self.cand(k, t, pos) };
                    let mut bm = 0.0;
                    for (si, st) in model.streams.iter().enumerate() {
                        if !present[si] {
                            continue;
                        }
                        let e = &mut scratch[..];
                        e.copy_from_slice(&resid[si * n..(si + 1) * n]);
                        for term in st.terms.iter().filter(|x| x.lag == 0) {
                            let idx = if term.interp {
                                match prev {
                                    Some(p) if t - 1 < k => p * m + c,
                                    _ => continue,
                                }
                            } else {
                                if terminating {
                                    continue;
                                }
                                c
                            };
                            let v = &term.values[idx * n..(idx + 1) * n];
                            e.iter_mut().zip(v).for_each(|(a, b)| *a -= b);
                        }
                        bm += e.iter().map(|z| z.norm_sqr()).sum::<f64>();
                    }
                    let key = if self.nu == 0 { 0 } else { pos + r0 * lower };
                    let total = base_metric + bm;
                    if total < new_metric[key] {
                        new_metric[key] = total;
                        pred[key] = old;
                        new_sym[key] = c as u16;
                    }
                }
            }

            let mut new_hist = vec![0u16; s_new * w];
            for key in 0..s_new {
                if pred[key] == usize::MAX {
                    continue;
                }
                let row = &mut new_hist[key * w..(key + 1) * w];
                row.copy_from_slice(&hist[pred[key] * w..(pred[key] + 1) * w]);
                row[t % w] = new_sym[key];
            }
            metric = new_metric;
            hist = new_hist;

            if let Some(d) = self.traceback {
                if t >= d && t - d < k {
                    let best = argmin(&metric);
                    decided[t - d] = hist[best * w + (t - d) % w] as usize;
                }
            }
        }

        let best = argmin(&metric);
        for (tau, d) in decided.iter_mut().enumerate() {
            if *d == usize::MAX {
                *d = hist[best * w + tau % w] as usize;
            }
        }
        Ok(Decoded { symbols: decided, path_metric: metric[best], max_branches: required })
    }
}

/// Index of the smallest value; the lowest index wins ties.
fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}
