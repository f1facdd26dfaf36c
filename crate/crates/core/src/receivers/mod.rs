//! Detection and equalisation.
//!
//! Every sequence estimator (VA, DFE, DDFSE, RSSE, iterative VA) is the same
//! trellis search run on a [`TrellisModel`] with different memory, candidate
//! sets and state merging. Models come from a [`BranchMetricModel`].

mod complexity;
mod mf;
mod model;
mod trellis;
mod wmf;

pub use complexity::{complexity_xi, xi_iterative, xi_rsse, xi_standard};
pub use mf::{matched_filter_downsample, SampleRate};
pub use model::{BranchMetricModel, ModelKind, Stream, Term, TermKind, TrellisModel};
pub use trellis::Decoded;
pub use wmf::{build_wmf_sinc2, spectral_factor, WhitenedImpulse};

pub(crate) use model::{expected_observation, PreparedModel};

use std::fmt;
use std::str::FromStr;

use crate::channel::ReceivedFrame;
use crate::constellations::{neighbor_table, HypersymbolPartition};
use crate::error::{domain, Error, Result};
use crate::types::{dist_sqr, ConstellationSet};
use trellis::Search;

/// Default per-step branch cap; `64^3` branches fit, `64^4` do not.
pub const DEFAULT_BRANCH_CAP: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Estimator {
    Symbolwise,
    Va,
    Dfe,
    Ddfse,
    Rsse,
    IterVa,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Symbolwise => "symbolwise",
            Estimator::Va => "va",
            Estimator::Dfe => "dfe",
            Estimator::Ddfse => "ddfse",
            Estimator::Rsse => "rsse",
            Estimator::IterVa => "iter",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "symbolwise" | "ml" => Ok(Estimator::Symbolwise),
            "va" | "viterbi" => Ok(Estimator::Va),
            "dfe" => Ok(Estimator::Dfe),
            "ddfse" => Ok(Estimator::Ddfse),
            "rsse" => Ok(Estimator::Rsse),
            "iter" | "iterva" | "iterative" => Ok(Estimator::IterVa),
            _ => domain(format!("unknown estimator `{s}`")),
        }
    }
}

/// Where the iterative VA takes its neighbour tables from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NeighborSource {
    /// Nearest neighbours in the effective constellation `H A`, per channel.
    EffectiveHa,
    /// Nearest neighbours in `A` itself.
    Constellation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Traceback {
    /// `5 (nu + 1)` symbols.
    Default,
    /// Keep whole survivor paths and decide at the end of the frame.
    Full,
    Depth(usize),
}

impl Traceback {
    fn resolve(self, nu: usize) -> Option<usize> {
        match self {
            Traceback::Default => Some(5 * (nu + 1)),
            Traceback::Full => None,
            Traceback::Depth(d) => Some(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrellisDecodeConfig {
    pub estimator: Estimator,
    pub nu: usize,
    pub nu_max: Option<usize>,
    pub n_nb: Option<usize>,
    pub partition: Option<HypersymbolPartition>,
    pub traceback: Traceback,
    pub neighbor_source: NeighborSource,
    pub branch_cap: u128,
}

impl TrellisDecodeConfig {
    fn base(estimator: Estimator, nu: usize) -> Self {
        Self {
            estimator,
            nu,
            nu_max: None,
            n_nb: None,
            partition: None,
            traceback: Traceback::Default,
            neighbor_source: NeighborSource::EffectiveHa,
            branch_cap: DEFAULT_BRANCH_CAP,
        }
    }

    pub fn symbolwise() -> Self {
        Self::base(Estimator::Symbolwise, 0)
    }

    pub fn va(nu: usize) -> Self {
        Self::base(Estimator::Va, nu)
    }

    pub fn dfe() -> Self {
        Self::base(Estimator::Dfe, 0)
    }

    pub fn ddfse(nu: usize) -> Self {
        Self::base(Estimator::Ddfse, nu)
    }

    /// Reduced-state search with full resolution in the first delay element
    /// and the partition's subsets in the second.
    pub fn rsse(partition: HypersymbolPartition) -> Self {
        Self { partition: Some(partition), ..Self::base(Estimator::Rsse, 2) }
    }

    pub fn iter_va(nu_max: usize, n_nb: usize) -> Self {
        Self { nu_max: Some(nu_max), n_nb: Some(n_nb), ..Self::base(Estimator::IterVa, 1) }
    }

    pub fn with_traceback(mut self, t: Traceback) -> Self {
        self.traceback = t;
        self
    }

    pub fn with_branch_cap(mut self, cap: u128) -> Self {
        self.branch_cap = cap;
        self
    }

    pub fn with_neighbor_source(mut self, s: NeighborSource) -> Self {
        self.neighbor_source = s;
        self
    }

    /// Checks that estimator-specific fields are present exactly when needed.
    pub fn validate(&self) -> Result<()> {
        let e = self.estimator;
        let iter = e == Estimator::IterVa;
        if self.nu_max.is_some() != iter || self.n_nb.is_some() != iter {
            return domain(format!("nu_max and n_NB must be set exactly for the iterative VA (estimator {e})"));
        }
        if self.partition.is_some() != (e == Estimator::Rsse) {
            return domain(format!("a partition must be set exactly for RSSE (estimator {e})"));
        }
        match e {
            Estimator::Symbolwise | Estimator::Dfe if self.nu != 0 => domain(format!("{e} has no trellis memory")),
            Estimator::Rsse if self.nu != 2 => domain("RSSE partitions the second of two delay elements"),
            Estimator::IterVa if self.nu_max.is_some_and(|v| v < 1) || self.n_nb == Some(0) => {
                domain("iterative VA needs nu_max >= 1 and n_NB >= 1")
            }
            _ => Ok(()),
        }
    }
}

struct Stage {
    nu: usize,
    model: PreparedModel,
}

/// A decoder prepared for one constellation, observation model and
/// configuration. Preparation precomputes every term table; decoding only
/// applies the frame's channel matrix.
pub struct Receiver {
    a: ConstellationSet,
    cfg: TrellisDecodeConfig,
    stages: Vec<Stage>,
    labels: Option<(Vec<usize>, usize)>,
    table_a: Option<Vec<Vec<usize>>>,
}

impl Receiver {
    pub fn new(a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Self> {
        cfg.validate()?;
        model::check_model_constellation(model, a)?;
        let tail = model.dfe_tail_taps;
        let plan: Vec<(usize, usize)> = match cfg.estimator {
            Estimator::Symbolwise => {
                if model.kind != ModelKind::IsiFree {
                    return domain("symbolwise detection needs an ISI-free model");
                }
                vec![(0, 0)]
            }
            Estimator::Va => vec![(cfg.nu, 0)],
            Estimator::Dfe => vec![(0, tail.max(model.isi_length()))],
            Estimator::Ddfse | Estimator::Rsse => vec![(cfg.nu, tail)],
            Estimator::IterVa => (1..=cfg.nu_max.expect("validated")).map(|nu| (nu, tail)).collect(),
        };
        let stages = plan
            .into_iter()
            .map(|(nu, tail)| Ok(Stage { nu, model: PreparedModel::new(&model.receiver_model(nu, tail), a)? }))
            .collect::<Result<Vec<_>>>()?;
        let labels = match &cfg.partition {
            Some(p) => {
                p.validate(a.m())?;
                Some((p.labels(a.m()), p.k()))
            }
            None => None,
        };
        let mut table_a = None;
        if let Some(nb) = cfg.n_nb {
            if nb >= a.m() {
                return domain(format!("n_NB = {nb} must be below M = {}", a.m()));
            }
            if cfg.neighbor_source == NeighborSource::Constellation {
                table_a = Some(neighbor_table(a.points(), a.n(), nb)?);
            }
        }
        Ok(Self { a: a.clone(), cfg: cfg.clone(), stages, labels, table_a })
    }

    pub fn config(&self) -> &TrellisDecodeConfig {
        &self.cfg
    }

    pub fn decode(&self, y: &ReceivedFrame) -> Result<Decoded> {
        if y.n != self.a.n() || y.channel.n() != self.a.n() {
            return domain("frame and constellation antenna counts differ");
        }
        if self.cfg.estimator == Estimator::Symbolwise {
            let symbols = detect_symbolwise(y, &self.a)?;
            return Ok(Decoded { symbols, path_metric: f64::NAN, max_branches: self.a.m() as u128 });
        }
        let k = y.symbols;
        let mut candidates: Option<Vec<Vec<u16>>> = None;
        let mut out: Option<Decoded> = None;
        let mut branches = 0u128;
        for (i, stage) in self.stages.iter().enumerate() {
            let model = stage.model.through(&y.channel.h);
            if i > 0 {
                let prev = out.as_ref().expect("earlier stage ran");
                candidates = Some(self.candidates(&prev.symbols, y)?);
            }
            let search = Search {
                nu: stage.nu,
                candidates: candidates.as_deref(),
                partition: self.labels.as_ref().map(|(l, c)| (l.as_slice(), *c)),
                traceback: self.cfg.traceback.resolve(stage.nu),
                branch_cap: self.cfg.branch_cap,
            };
            let d = search.run(&model, &y.streams, k)?;
            branches += d.max_branches;
            out = Some(d);
        }
        let mut d = out.expect("at least one stage");
        d.max_branches = branches;
        Ok(d)
    }

    fn candidates(&self, estimate: &[usize], y: &ReceivedFrame) -> Result<Vec<Vec<u16>>> {
        let nb = self.cfg.n_nb.expect("iterative VA");
        let per_channel;
        let table = match &self.table_a {
            Some(t) => t,
            None => {
                per_channel = neighbor_table(&self.a.transformed(&y.channel.h), self.a.n(), nb)?;
                &per_channel
            }
        };
        Ok(estimate
            .iter()
            .map(|&x| {
                let mut c: Vec<u16> = std::iter::once(x).chain(table[x].iter().copied()).map(|v| v as u16).collect();
                c.sort_unstable();
                c
            })
            .collect())
    }
}

/// Per-symbol `argmin_j |y[k] - H a_j|^2`; ties go to the lower index.
pub fn detect_symbolwise(y: &ReceivedFrame, a: &ConstellationSet) -> Result<Vec<usize>> {
    let n = a.n();
    if y.n != n || y.channel.n() != n {
        return domain("frame and constellation antenna counts differ");
    }
    let ha = a.transformed(&y.channel.h);
    let obs = y.samples();
    if obs.len() < y.symbols * n {
        return domain("frame holds fewer observations than symbols");
    }
    Ok(obs
        .chunks_exact(n)
        .take(y.symbols)
        .map(|yk| {
            let mut best = (0, f64::INFINITY);
            for (j, p) in ha.chunks_exact(n).enumerate() {
                let d = dist_sqr(yk, p);
                if d < best.1 {
                    best = (j, d);
                }
            }
            best.0
        })
        .collect())
}

fn run_checked(
    want: Estimator,
    y: &ReceivedFrame,
    a: &ConstellationSet,
    model: &BranchMetricModel,
    cfg: &TrellisDecodeConfig,
) -> Result<Decoded> {
    if cfg.estimator != want {
        return domain(format!("configuration is for {}, not {want}", cfg.estimator));
    }
    Receiver::new(a, model, cfg)?.decode(y)
}

/// Maximum-likelihood sequence estimate under the model truncated to `nu`
/// memory elements.
pub fn viterbi(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    run_checked(Estimator::Va, y, a, model, cfg)
}

/// Symbol-by-symbol decisions with past decisions cancelling the ISI tail.
pub fn dfe(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    run_checked(Estimator::Dfe, y, a, model, cfg)
}

/// Trellis over `nu` memory elements with per-survivor feedback of
/// `model.dfe_tail_taps` older intervals.
pub fn ddfse(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    run_checked(Estimator::Ddfse, y, a, model, cfg)
}

pub fn rsse(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    run_checked(Estimator::Rsse, y, a, model, cfg)
}

/// Full `nu = 1` pass, then passes with `nu = 2..=nu_max` restricted to the
/// previous estimate and its `n_NB` nearest neighbours at every step.
pub fn iterative_va(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    run_checked(Estimator::IterVa, y, a, model, cfg)
}

/// Runs whichever estimator `cfg` names.
pub fn decode(y: &ReceivedFrame, a: &ConstellationSet, model: &BranchMetricModel, cfg: &TrellisDecodeConfig) -> Result<Decoded> {
    Receiver::new(a, model, cfg)?.decode(y)
}
