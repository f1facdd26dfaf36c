//! Bundled experiment presets. Each run is a partial argument set that sits
//! below the config file and the command-line flags.

use crate::config::{config_error, ComplexityArgs, GenArgs, PasprArgs, SerArgs};

pub const SER_PRESETS: [&str; 7] = ["fig2a", "fig2a-kmc", "fig2a-pm", "fig3", "fig4", "fig6", "fig7"];

fn grid(lo: i32, hi: i32, step: usize) -> Option<Vec<f64>> {
    Some((lo..=hi).step_by(step).map(f64::from).collect())
}

fn s(v: &str) -> Option<String> {
    Some(v.to_string())
}

fn vector_awgn(method: &str) -> SerArgs {
    SerArgs {
        method: s(method),
        n: Some(3),
        m: Some(64),
        signaling: s("isi-free"),
        channel: s("awgn"),
        estimator: s("symbolwise"),
        ebn0: grid(0, 10, 1),
        ..Default::default()
    }
}

fn si_link(estimator: &str) -> SerArgs {
    SerArgs {
        method: s("pm"),
        n: Some(3),
        m: Some(64),
        signaling: s("si"),
        channel: s("rayleigh"),
        estimator: s(estimator),
        beta: Some(0.25),
        fip: Some(4),
        ebn0: grid(8, 16, 2),
        max_symbols: Some(1_000_000),
        ..Default::default()
    }
}

/// Labelled SER runs of a preset.
pub fn ser(name: &str) -> anyhow::Result<Vec<(String, SerArgs)>> {
    let runs = match name {
        "fig2a" => ["eqpa", "kmc", "pm", "papsk"].iter().map(|m| (m.to_string(), vector_awgn(m))).collect(),
        "fig2a-kmc" => vec![("kmc".into(), vector_awgn("kmc"))],
        "fig2a-pm" => vec![("pm".into(), vector_awgn("pm"))],
        "fig3" => {
            let base = SerArgs {
                method: s("pm"),
                n: Some(2),
                m: Some(16),
                channel: s("rayleigh"),
                ebn0: grid(0, 20, 2),
                max_symbols: Some(2_000_000),
                ..Default::default()
            };
            vec![
                ("isi-free".into(), SerArgs { signaling: s("isi-free"), estimator: s("symbolwise"), ..base.clone() }),
                ("sinc2-dfe".into(), SerArgs { signaling: s("sinc2"), estimator: s("dfe"), ..base.clone() }),
                (
                    "sinc2-va2".into(),
                    SerArgs { signaling: s("sinc2"), estimator: s("va"), nu: Some(2), max_symbols: Some(200_000), ..base },
                ),
            ]
        }
        "fig4" => {
            let base = SerArgs {
                method: s("pm"),
                n: Some(3),
                m: Some(64),
                channel: s("rayleigh"),
                ebn0: grid(4, 20, 2),
                max_symbols: Some(2_000_000),
                ..Default::default()
            };
            vec![
                ("isi-free".into(), SerArgs { signaling: s("isi-free"), estimator: s("symbolwise"), ..base.clone() }),
                ("t2".into(), SerArgs { signaling: s("t2"), estimator: s("va"), nu: Some(1), ..base }),
            ]
        }
        "fig6" => vec![
            ("ddfse1".into(), SerArgs { nu: Some(1), ..si_link("ddfse") }),
            ("ddfse2".into(), SerArgs { nu: Some(2), max_symbols: Some(100_000), ..si_link("ddfse") }),
        ],
        "fig7" => vec![
            ("iter2".into(), SerArgs { numax: Some(2), nnb: Some(4), ..si_link("iter") }),
            ("iter3".into(), SerArgs { numax: Some(3), nnb: Some(4), ..si_link("iter") }),
            ("rsse".into(), SerArgs { partition_k: Some(4), ..si_link("rsse") }),
        ],
        _ => return config_error(format!("unknown ser preset `{name}` (expected one of {})", SER_PRESETS.join(", "))),
    };
    Ok(runs)
}

pub fn paspr(name: &str) -> anyhow::Result<PasprArgs> {
    match name {
        "fig9" => Ok(PasprArgs {
            pulse: Some(["rrc", "sinc2", "t2", "si"].map(String::from).to_vec()),
            method: s("kmc"),
            n: Some(vec![2, 3]),
            beta: Some(0.25),
            fip: Some(4),
            symbols: Some(100_000),
            ..Default::default()
        }),
        _ => config_error(format!("unknown paspr preset `{name}` (expected fig9)")),
    }
}

/// `table1` expands to every generator at M = 64 and M = 512.
pub fn gen(name: &str) -> anyhow::Result<Vec<GenArgs>> {
    match name {
        "table1" => Ok([64, 512]
            .iter()
            .flat_map(|&m| {
                ["eqpa", "kmc", "pm", "papsk"].map(|method| GenArgs { method: s(method), n: Some(3), m: Some(m), ..Default::default() })
            })
            .collect()),
        _ => config_error(format!("unknown gen preset `{name}` (expected table1)")),
    }
}

pub fn complexity(name: &str) -> anyhow::Result<Vec<(String, ComplexityArgs)>> {
    match name {
        "table3" => {
            let c = |e: &str| ComplexityArgs { estimator: s(e), m: Some(64), ..Default::default() };
            Ok(vec![
                ("va nu=1".into(), ComplexityArgs { nu: Some(1), ..c("va") }),
                ("va nu=2".into(), ComplexityArgs { nu: Some(2), ..c("va") }),
                ("rsse 64x4".into(), ComplexityArgs { orders: Some(vec![64, 4]), ..c("rsse") }),
                ("iter numax=2 nnb=4".into(), ComplexityArgs { numax: Some(2), nnb: Some(4), ..c("iter") }),
                ("iter numax=3 nnb=4".into(), ComplexityArgs { numax: Some(3), nnb: Some(4), ..c("iter") }),
            ])
        }
        _ => config_error(format!("unknown complexity preset `{name}` (expected table3)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_ser_preset_resolves() {
        for p in SER_PRESETS {
            assert!(!ser(p).unwrap().is_empty(), "{p}");
        }
        assert!(ser("fig99").is_err());
    }

    #[test]
    fn fig2a_kmc_has_8db_point() {
        let runs = ser("fig2a-kmc").unwrap();
        assert!(runs[0].1.ebn0.as_ref().unwrap().contains(&8.0));
    }

    #[test]
    fn table1_covers_all_generators() {
        assert_eq!(gen("table1").unwrap().len(), 8);
    }
}
