//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use pskh::constellations::io::{fmt17, read_constellation, write_constellation};
use pskh::constellations::{distance_profile, gen_eqpa, gen_kmc_default, gen_papsk, gen_pm_default, hypersymbol_partition};
use pskh::energy::sigma2_for_ebn0;
use pskh::link::{random_symbols, Link, LinkConfig, Signaling, TxScheme};
use pskh::metrics::csv::{write_psd_csv, write_ser_csv};
use pskh::metrics::{mi_constellation, paspr_db, psd_estimate, run_ser, SerConfig};
use pskh::modulation::PulseKind;
use pskh::receivers::{complexity_xi, xi_rsse, xi_standard, Estimator, NeighborSource, Traceback, TrellisDecodeConfig};
use pskh::{ChannelKind, ConstellationSet, RngSeed};
use serde_json::{json, Value};

use crate::config::{config_error, CapacityArgs, ComplexityArgs, GenArgs, Layer, PasprArgs, SerArgs, SpectrumArgs};
use crate::presets;

/// What a command produced, for the run manifest.
#[derive(Default)]
pub struct Report {
    pub config: Vec<Value>,
    pub outputs: Vec<PathBuf>,
    pub results: Vec<Value>,
}

pub struct Ctx {
    pub out: PathBuf,
    pub seed: u64,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn create(&self, report: &mut Report, name: &str) -> anyhow::Result<BufWriter<File>> {
        let p = self.path(name);
        let f = File::create(&p).map_err(|e| anyhow::Error::new(pskh::Error::Io(e)).context(format!("cannot create {}", p.display())))?;
        report.outputs.push(p);
        Ok(BufWriter::new(f))
    }
}

fn parse<T: std::str::FromStr<Err = pskh::Error>>(s: &str) -> anyhow::Result<T> {
    s.parse::<T>().or_else(|e| config_error(e.to_string()))
}

fn io(e: std::io::Error) -> anyhow::Error {
    pskh::Error::Io(e).into()
}

/// Default order for `n` antennas when none is given.
fn default_m(n: usize) -> usize {
    1 << (2 * n).min(8)
}

fn constellation(method: &str, n: usize, m: usize, es: f64, file: Option<&Path>, seed: RngSeed) -> anyhow::Result<ConstellationSet> {
    if let Some(p) = file {
        let f = File::open(p).map_err(|e| anyhow::Error::new(pskh::Error::Io(e)).context(format!("cannot open {}", p.display())))?;
        return Ok(read_constellation(BufReader::new(f))?);
    }
    Ok(match method.to_ascii_lowercase().as_str() {
        "eqpa" => gen_eqpa(n, m, es)?,
        "kmc" => gen_kmc_default(n, m, es, seed)?,
        "pm" => gen_pm_default(n, m, es, seed)?,
        "papsk" | "pa-psk" => gen_papsk(n, m, es)?,
        other => return config_error(format!("unknown constellation method `{other}` (expected eqpa, kmc, pm or papsk)")),
    })
}

fn tx_scheme(pulse: &str, beta: f64, fip: usize) -> anyhow::Result<TxScheme> {
    Ok(match pulse.to_ascii_lowercase().as_str() {
        "t2" => TxScheme::T2 { beta },
        "si" => TxScheme::Si { beta, f_ip: fip },
        p => TxScheme::Pam { pulse: parse::<PulseKind>(p)?, beta },
    })
}

pub fn gen(ctx: &Ctx, flags: GenArgs, file: GenArgs) -> anyhow::Result<Report> {
    let top = flags.clone().over(file.clone());
    let mut report = Report::default();
    match top.preset.as_deref() {
        Some(name) => {
            let mut w = ctx.create(&mut report, &format!("{name}.csv"))?;
            writeln!(w, "method,n,M,d_min,d_nb_avg").map_err(io)?;
            for p in presets::gen(name)? {
                let args = GenArgs { file: None, ..flags.clone() }.over(GenArgs { file: None, ..file.clone() }).over(p);
                let (a, row) = gen_one(ctx, &args, &mut report)?;
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    row["method"].as_str().unwrap_or(""),
                    a.n(),
                    a.m(),
                    fmt17(row["d_min"].as_f64().unwrap_or(f64::NAN)),
                    fmt17(row["d_nb_avg"].as_f64().unwrap_or(f64::NAN))
                )
                .map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
        None => {
            gen_one(ctx, &top, &mut report)?;
        }
    }
    Ok(report)
}

fn gen_one(ctx: &Ctx, args: &GenArgs, report: &mut Report) -> anyhow::Result<(ConstellationSet, Value)> {
    let method = args.method.clone().unwrap_or_else(|| "pm".into());
    let n = args.n.unwrap_or(3);
    let m = args.m.unwrap_or_else(|| default_m(n));
    let a = constellation(&method, n, m, args.es.unwrap_or(1.0), None, RngSeed(ctx.seed))?;
    let prof = distance_profile(&a, 0)?;
    let path = args.file.clone().unwrap_or_else(|| ctx.path(&format!("{method}_n{n}_M{m}.txt")));
    let f = File::create(&path).map_err(|e| anyhow::Error::new(pskh::Error::Io(e)).context(format!("cannot create {}", path.display())))?;
    let mut w = BufWriter::new(f);
    write_constellation(&a, &mut w)?;
    w.flush().map_err(io)?;
    println!("{method} n={n} M={m}: d_min = {:.4}, d_nb_avg = {:.4} -> {}", prof.d_min, prof.d_nb_avg, path.display());
    report.outputs.push(path);
    report.config.push(serde_json::to_value(args)?);
    let row = json!({ "method": method, "n": n, "M": m, "d_min": prof.d_min, "d_nb_avg": prof.d_nb_avg });
    report.results.push(row.clone());
    Ok((a, row))
}

fn decoder(args: &SerArgs, a: &ConstellationSet, seed: RngSeed) -> anyhow::Result<TrellisDecodeConfig> {
    let est = parse::<Estimator>(args.estimator.as_deref().unwrap_or("symbolwise"))?;
    let nu = args.nu.unwrap_or(2);
    let cfg = match est {
        Estimator::Symbolwise => TrellisDecodeConfig::symbolwise(),
        Estimator::Va => TrellisDecodeConfig::va(nu),
        Estimator::Dfe => TrellisDecodeConfig::dfe(),
        Estimator::Ddfse => TrellisDecodeConfig::ddfse(nu),
        Estimator::Rsse => TrellisDecodeConfig::rsse(hypersymbol_partition(a, args.partition_k.unwrap_or(4), seed)?),
        Estimator::IterVa => TrellisDecodeConfig::iter_va(args.numax.unwrap_or(2), args.nnb.unwrap_or(4)),
    };
    let cfg = match args.neighbors.as_deref().unwrap_or("ha") {
        "ha" => cfg.with_neighbor_source(NeighborSource::EffectiveHa),
        "a" => cfg.with_neighbor_source(NeighborSource::Constellation),
        other => return config_error(format!("unknown neighbour source `{other}` (expected ha or a)")),
    };
    Ok(match args.traceback {
        None => cfg,
        Some(0) => cfg.with_traceback(Traceback::Full),
        Some(d) => cfg.with_traceback(Traceback::Depth(d)),
    })
}

fn signaling(args: &SerArgs) -> anyhow::Result<Signaling> {
    let q = args.q.unwrap_or(16);
    let span = args.span.unwrap_or(16);
    Ok(match parse::<Signaling>(args.signaling.as_deref().unwrap_or("isi-free"))? {
        Signaling::Sinc2Wmf { .. } => Signaling::Sinc2Wmf { q, span },
        Signaling::Si { .. } => Signaling::Si { beta: args.beta.unwrap_or(0.25), f_ip: args.fip.unwrap_or(4), q, span },
        s => s,
    })
}

pub fn ser(ctx: &Ctx, flags: SerArgs, file: SerArgs) -> anyhow::Result<Report> {
    let top = flags.clone().over(file.clone());
    let runs = match top.preset.as_deref() {
        Some(name) => presets::ser(name)?,
        None => vec![(String::new(), SerArgs::default())],
    };
    let stem = top.preset.clone().unwrap_or_else(|| "ser".into());
    let single = runs.len() == 1;
    let mut report = Report::default();
    for (label, preset) in runs {
        let args = flags.clone().over(file.clone()).over(preset);
        let seed = RngSeed(ctx.seed);
        let method = args.method.clone().unwrap_or_else(|| "pm".into());
        let n = args.n.unwrap_or(3);
        let a =
            constellation(&method, n, args.m.unwrap_or_else(|| default_m(n)), args.es.unwrap_or(1.0), args.constellation.as_deref(), seed)?;
        let mut cfg = LinkConfig::new(
            a.clone(),
            signaling(&args)?,
            parse::<ChannelKind>(args.channel.as_deref().unwrap_or("awgn"))?,
            decoder(&args, &a, seed.derive(2))?,
        );
        cfg.dfe_tail_taps = args.tail.unwrap_or(cfg.dfe_tail_taps);
        cfg.frame_len = args.frame_len.unwrap_or(cfg.frame_len);
        let link = Link::new(&cfg)?;
        let sc = SerConfig {
            ebn0_db: args.ebn0.clone().unwrap_or_else(|| (0..=10).step_by(2).map(f64::from).collect()),
            min_errors: args.min_errors.unwrap_or(200),
            max_symbols: args.max_symbols.unwrap_or(10_000_000),
            ..SerConfig::default()
        };
        let curve = run_ser(&link, &sc, seed.derive(1))?;
        let name = if single { format!("{stem}.csv") } else { format!("{stem}_{label}.csv") };
        let mut w = ctx.create(&mut report, &name)?;
        write_ser_csv(&curve, &mut w)?;
        w.flush().map_err(io)?;
        for p in &curve.points {
            println!(
                "{}{:>6.2} dB  SER {:.4e}  ({} errors / {} symbols)",
                if label.is_empty() { String::new() } else { format!("{label:<10} ") },
                p.ebn0_db,
                p.ser(),
                p.errors,
                p.symbols
            );
        }
        report.config.push(serde_json::to_value(&args)?);
        report.results.push(json!({
            "run": label,
            "points": curve.points.iter().map(|p| json!({"ebn0_db": p.ebn0_db, "ser": p.ser(), "symbols": p.symbols, "errors": p.errors})).collect::<Vec<_>>(),
        }));
    }
    Ok(report)
}

pub fn paspr(ctx: &Ctx, flags: PasprArgs, file: PasprArgs) -> anyhow::Result<Report> {
    let top = flags.clone().over(file.clone());
    let preset = match top.preset.as_deref() {
        Some(name) => presets::paspr(name)?,
        None => PasprArgs::default(),
    };
    let args = top.over(preset);
    let pulses = args.pulse.clone().unwrap_or_else(|| vec!["rrc".into()]);
    let ns = args.n.clone().unwrap_or_else(|| vec![3]);
    let (beta, fip) = (args.beta.unwrap_or(0.25), args.fip.unwrap_or(4));
    let (q, span, k) = (args.q.unwrap_or(16), args.span.unwrap_or(16), args.symbols.unwrap_or(100_000));
    let pam_only = pulses.iter().all(|p| !matches!(p.to_ascii_lowercase().as_str(), "t2" | "si"));
    let method = args.method.clone().unwrap_or_else(|| if pam_only { "papsk" } else { "pm" }.into());
    let mut report = Report::default();
    let mut rows = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let seed = RngSeed(ctx.seed).derive(i as u64);
        let a =
            constellation(&method, n, args.m.unwrap_or_else(|| default_m(n)), args.es.unwrap_or(1.0), args.constellation.as_deref(), seed)?;
        let (_, x) = random_symbols(&a, k, seed.derive(1));
        for p in &pulses {
            let scheme = tx_scheme(p, beta, fip)?;
            let v = paspr_db(&scheme.waveform(&x, a.n(), q, span)?, span)?;
            println!("{scheme} n={} M={}: PASPR = {v:.3} dB", a.n(), a.m());
            rows.push((p.clone(), a.n(), a.m(), v));
        }
    }
    let mut w = ctx.create(&mut report, "paspr.csv")?;
    writeln!(w, "pulse,n,M,paspr_db").map_err(io)?;
    for (p, n, m, v) in &rows {
        writeln!(w, "{p},{n},{m},{}", fmt17(*v)).map_err(io)?;
        report.results.push(json!({"pulse": p, "n": n, "M": m, "paspr_db": v}));
    }
    w.flush().map_err(io)?;
    report.config.push(serde_json::to_value(&args)?);
    Ok(report)
}

pub fn spectrum(ctx: &Ctx, flags: SpectrumArgs, file: SpectrumArgs) -> anyhow::Result<Report> {
    let args = flags.over(file);
    let seed = RngSeed(ctx.seed);
    let n = args.n.unwrap_or(3);
    let a = constellation(
        args.method.as_deref().unwrap_or("pm"),
        n,
        args.m.unwrap_or_else(|| default_m(n)),
        args.es.unwrap_or(1.0),
        args.constellation.as_deref(),
        seed,
    )?;
    let scheme = tx_scheme(args.pulse.as_deref().unwrap_or("rrc"), args.beta.unwrap_or(0.25), args.fip.unwrap_or(4))?;
    let (_, x) = random_symbols(&a, args.symbols.unwrap_or(16_384), seed.derive(1));
    let w = scheme.waveform(&x, a.n(), args.q.unwrap_or(16), args.span.unwrap_or(64))?;
    let est = psd_estimate(&w, args.segment.unwrap_or(256))?;
    let mut report = Report::default();
    let mut f = ctx.create(&mut report, "spectrum.csv")?;
    write_psd_csv(&est, &mut f)?;
    f.flush().map_err(io)?;
    for &(x, b) in &est.b_x {
        println!("{scheme}: B_{x} = {b:.4} / T");
        report.results.push(json!({"fraction": x, "bandwidth": b}));
    }
    report.config.push(serde_json::to_value(&args)?);
    Ok(report)
}

pub fn capacity(ctx: &Ctx, flags: CapacityArgs, file: CapacityArgs) -> anyhow::Result<Report> {
    let args = flags.over(file);
    let seed = RngSeed(ctx.seed);
    let n = args.n.unwrap_or(3);
    let a = constellation(
        args.method.as_deref().unwrap_or("pm"),
        n,
        args.m.unwrap_or_else(|| default_m(n)),
        args.es.unwrap_or(1.0),
        args.constellation.as_deref(),
        seed,
    )?;
    let grid = args.ebn0.clone().unwrap_or_else(|| (-4..=20).step_by(2).map(f64::from).collect());
    let draws = args.draws.unwrap_or(20_000);
    let mut report = Report::default();
    let mut w = ctx.create(&mut report, "capacity.csv")?;
    writeln!(w, "ebn0_db,sigma2,mi_bits,std_err").map_err(io)?;
    for (i, &db) in grid.iter().enumerate() {
        let s2 = sigma2_for_ebn0(db, a.es(), a.rm(), a.n(), ChannelKind::IdentityAwgn)?;
        let mi = mi_constellation(&a, s2, draws, seed.derive2(1, i as u64))?;
        println!("{db:>6.2} dB  I = {:.4} bits (+/- {:.4})", mi.bits, mi.std_err);
        writeln!(w, "{},{},{},{}", fmt17(db), fmt17(s2), fmt17(mi.bits), fmt17(mi.std_err)).map_err(io)?;
        report.results.push(json!({"ebn0_db": db, "sigma2": s2, "mi_bits": mi.bits, "std_err": mi.std_err}));
    }
    w.flush().map_err(io)?;
    report.config.push(serde_json::to_value(&args)?);
    Ok(report)
}

fn xi(args: &ComplexityArgs) -> anyhow::Result<u128> {
    let m = args.m.unwrap_or(64);
    let est = parse::<Estimator>(args.estimator.as_deref().unwrap_or("iter"))?;
    Ok(match est {
        Estimator::Symbolwise | Estimator::Dfe => m,
        Estimator::Va | Estimator::Ddfse => xi_standard(m, args.nu.unwrap_or(1)),
        Estimator::Rsse => xi_rsse(m, args.orders.as_deref().unwrap_or(&[m, 4])),
        Estimator::IterVa => {
            let m = usize::try_from(m).or_else(|_| config_error("M too large"))?;
            let nnb = usize::try_from(args.nnb.unwrap_or(4)).or_else(|_| config_error("nnb too large"))?;
            complexity_xi(&TrellisDecodeConfig::iter_va(args.numax.unwrap_or(2) as usize, nnb), m)?
        }
    })
}

pub fn complexity(ctx: &Ctx, flags: ComplexityArgs, file: ComplexityArgs) -> anyhow::Result<Report> {
    let top = flags.clone().over(file.clone());
    let runs = match top.preset.as_deref() {
        Some(name) => presets::complexity(name)?,
        None => vec![(String::new(), ComplexityArgs::default())],
    };
    let mut report = Report::default();
    let mut rows = Vec::new();
    for (label, preset) in runs {
        let args = flags.clone().over(file.clone()).over(preset);
        let v = xi(&args)?;
        let label = if label.is_empty() { args.estimator.clone().unwrap_or_else(|| "iter".into()) } else { label };
        println!("{label}: Xi = {v}");
        report.config.push(serde_json::to_value(&args)?);
        report.results.push(json!({"config": label, "xi": v.to_string()}));
        rows.push((label, v));
    }
    let mut w = ctx.create(&mut report, &format!("{}.csv", top.preset.as_deref().unwrap_or("complexity")))?;
    writeln!(w, "config,xi").map_err(io)?;
    for (l, v) in rows {
        writeln!(w, "{l},{v}").map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(report)
}
