//! `pskh` experiment runner.

mod commands;
mod config;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Ctx, Report};
use config::{CapacityArgs, ComplexityArgs, ConfigError, FileConfig, GenArgs, PasprArgs, SerArgs, SpectrumArgs};

const VERSION: &str = env!("PSKH_BUILD_VERSION");

#[derive(Parser, Debug)]
#[command(name = "pskh", version = VERSION, about = "Phase shift keying on the hypersphere: simulation runner")]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: results].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "PSKH_WORKERS")]
    workers: Option<usize>,
    /// Master seed [default: 1].
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Generate a constellation file and print its distance profile.
    Gen(GenArgs),
    /// Symbol error rate over an Eb/N0 grid.
    Ser(SerArgs),
    /// Peak-to-average sum power ratio of transmit waveforms.
    Paspr(PasprArgs),
    /// Power spectral density and fractional bandwidths.
    Spectrum(SpectrumArgs),
    /// Constellation-constrained mutual information on vector AWGN.
    Capacity(CapacityArgs),
    /// Trellis branches per step.
    Complexity(ComplexityArgs),
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Gen(_) => "gen",
            Cmd::Ser(_) => "ser",
            Cmd::Paspr(_) => "paspr",
            Cmd::Spectrum(_) => "spectrum",
            Cmd::Capacity(_) => "capacity",
            Cmd::Complexity(_) => "complexity",
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ctx = Ctx { out: cli.out.or(file.out).unwrap_or_else(|| PathBuf::from("results")), seed: cli.seed.or(file.seed).unwrap_or(1) };
    let workers = cli.workers.or(file.workers).unwrap_or(0);
    std::fs::create_dir_all(&ctx.out)
        .map_err(|e| anyhow::Error::new(pskh::Error::Io(e)).context(format!("cannot create {}", ctx.out.display())))?;
    let name = cli.cmd.name();
    let start = Instant::now();
    let (report, used_workers) = pskh::par::with_workers(workers, || -> anyhow::Result<(Report, usize)> {
        let r = match cli.cmd {
            Cmd::Gen(a) => commands::gen(&ctx, a, file.gen.unwrap_or_default()),
            Cmd::Ser(a) => commands::ser(&ctx, a, file.ser.unwrap_or_default()),
            Cmd::Paspr(a) => commands::paspr(&ctx, a, file.paspr.unwrap_or_default()),
            Cmd::Spectrum(a) => commands::spectrum(&ctx, a, file.spectrum.unwrap_or_default()),
            Cmd::Capacity(a) => commands::capacity(&ctx, a, file.capacity.unwrap_or_default()),
            Cmd::Complexity(a) => commands::complexity(&ctx, a, file.complexity.unwrap_or_default()),
        }?;
        Ok((r, pskh::par::current_workers()))
    })?;
    let manifest = json!({
        "command": name,
        "version": VERSION,
        "seed": ctx.seed,
        "workers": used_workers,
        "config": report.config,
        "wall_time_s": start.elapsed().as_secs_f64(),
        "outputs": report.outputs,
        "results": report.results,
    });
    let path = ctx.out.join(format!("{name}.manifest.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .map_err(|e| anyhow::Error::new(pskh::Error::Io(e)).context(format!("cannot write {}", path.display())))?;
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<pskh::Error>() {
        Some(pskh::Error::Infeasible { .. }) => 3,
        Some(pskh::Error::Io(_)) | None => 1,
        Some(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(pskh::Error::Infeasible { required, cap }) = e.downcast_ref::<pskh::Error>() {
                eprintln!("error: refusing infeasible trellis: requires Xi = {required} branches per step, cap is {cap}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
