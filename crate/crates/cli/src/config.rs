//! Command arguments, TOML config files and preset layering.
//!
//! Every parameter is optional at parse time. The effective value comes from
//! the first layer that sets it: command-line flag, config file, preset,
//! built-in default.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

/// Invalid configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(ConfigError(msg.into()).into())
}

pub trait Layer: Sized {
    /// Fields of `self` win; unset ones fall back to `lower`.
    fn over(self, lower: Self) -> Self;
}

macro_rules! layered {
    ($t:ident { $($f:ident),* $(,)? }) => {
        impl Layer for $t {
            fn over(self, lower: Self) -> Self {
                Self { $($f: self.$f.or(lower.$f)),* }
            }
        }
    };
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GenArgs {
    /// Named preset (`table1`).
    #[arg(long)]
    pub preset: Option<String>,
    /// eqpa, kmc, pm or papsk.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub es: Option<f64>,
    /// Output constellation file (default: inside the output directory).
    #[arg(long)]
    pub file: Option<PathBuf>,
}
layered!(GenArgs { preset, method, n, m, es, file });

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SerArgs {
    /// fig2a, fig2a-kmc, fig2a-pm, fig3, fig4, fig6 or fig7.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub es: Option<f64>,
    /// Read the constellation from a file instead of generating it.
    #[arg(long)]
    pub constellation: Option<PathBuf>,
    /// isi-free, sinc2, t2 or si.
    #[arg(long)]
    pub signaling: Option<String>,
    /// awgn or rayleigh.
    #[arg(long)]
    pub channel: Option<String>,
    /// symbolwise, va, dfe, ddfse, rsse or iter.
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub numax: Option<usize>,
    #[arg(long)]
    pub nnb: Option<usize>,
    /// Hypersymbol count of the RSSE partition.
    #[arg(long)]
    pub partition_k: Option<usize>,
    /// Neighbour tables for the iterative VA: `ha` or `a`.
    #[arg(long)]
    pub neighbors: Option<String>,
    /// Traceback depth in symbols; 0 keeps whole survivor paths.
    #[arg(long)]
    pub traceback: Option<usize>,
    /// Trailing ISI intervals cancelled by decision feedback.
    #[arg(long)]
    pub tail: Option<usize>,
    /// Eb/N0 grid in dB, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ebn0: Option<Vec<f64>>,
    #[arg(long)]
    pub min_errors: Option<u64>,
    #[arg(long)]
    pub max_symbols: Option<u64>,
    #[arg(long)]
    pub frame_len: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub fip: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub span: Option<usize>,
}
layered!(SerArgs {
    preset,
    method,
    n,
    m,
    es,
    constellation,
    signaling,
    channel,
    estimator,
    nu,
    numax,
    nnb,
    partition_k,
    neighbors,
    traceback,
    tail,
    ebn0,
    min_errors,
    max_symbols,
    frame_len,
    beta,
    fip,
    q,
    span,
});

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct PasprArgs {
    /// fig9.
    #[arg(long)]
    pub preset: Option<String>,
    /// rrc, sinc2, rect, t2 or si; comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub pulse: Option<Vec<String>>,
    /// Defaults to papsk for PAM pulses and pm when t2 or si is requested.
    #[arg(long)]
    pub method: Option<String>,
    /// Antenna counts, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n: Option<Vec<usize>>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub es: Option<f64>,
    #[arg(long)]
    pub constellation: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub fip: Option<usize>,
    #[arg(long)]
    pub symbols: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub span: Option<usize>,
}
layered!(PasprArgs { preset, pulse, method, n, m, es, constellation, beta, fip, symbols, q, span });

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SpectrumArgs {
    /// rrc, sinc2, rect, t2 or si.
    #[arg(long)]
    pub pulse: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub es: Option<f64>,
    #[arg(long)]
    pub constellation: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub fip: Option<usize>,
    #[arg(long)]
    pub symbols: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub span: Option<usize>,
    /// Welch segment length in symbol periods.
    #[arg(long)]
    pub segment: Option<usize>,
}
layered!(SpectrumArgs { pulse, method, n, m, es, constellation, beta, fip, symbols, q, span, segment });

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CapacityArgs {
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub es: Option<f64>,
    #[arg(long)]
    pub constellation: Option<PathBuf>,
    /// Eb/N0 grid in dB (rate `log2 M` per use), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ebn0: Option<Vec<f64>>,
    /// Noise draws per grid point.
    #[arg(long)]
    pub draws: Option<usize>,
}
layered!(CapacityArgs { method, n, m, es, constellation, ebn0, draws });

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug, PartialEq)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ComplexityArgs {
    /// table3.
    #[arg(long)]
    pub preset: Option<String>,
    /// va, ddfse, rsse or iter.
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long = "M", alias = "m")]
    #[serde(alias = "M")]
    pub m: Option<u128>,
    #[arg(long)]
    pub nu: Option<u32>,
    #[arg(long)]
    pub numax: Option<u32>,
    #[arg(long)]
    pub nnb: Option<u128>,
    /// RSSE delay element orders, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub orders: Option<Vec<u128>>,
}
layered!(ComplexityArgs { preset, estimator, m, nu, numax, nnb, orders });

/// Contents of a `--config` file.
#[derive(Deserialize, Default, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub gen: Option<GenArgs>,
    pub ser: Option<SerArgs>,
    pub paspr: Option<PasprArgs>,
    pub spectrum: Option<SpectrumArgs>,
    pub capacity: Option<CapacityArgs>,
    pub complexity: Option<ComplexityArgs>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())).into())
    }
}
