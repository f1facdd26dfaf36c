//! Text file format for constellations.
//!
//! ```text
//! PSKH v1 n=<n> M=<M> Es=<Es> gen=<tag>
//! <re_1> <im_1> ... <re_n> <im_n>     (M lines, 17 significant digits)
//! ```

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::types::{ConstellationSet, GeneratorTag, C64};

pub fn write_constellation<W: Write>(a: &ConstellationSet, mut w: W) -> Result<()> {
    writeln!(w, "PSKH v1 n={} M={} Es={} gen={}", a.n(), a.m(), a.es(), a.tag())?;
    for p in a.iter() {
        let line: Vec<String> = p.iter().flat_map(|z| [fmt17(z.re), fmt17(z.im)]).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

pub fn read_constellation<R: BufRead>(r: R) -> Result<ConstellationSet> {
    let mut lines = r.lines();
    let header = match lines.next() {
        Some(l) => l?,
        None => return parse_err(1, "empty file"),
    };
    let mut fields = header.split_whitespace();
    if fields.next() != Some("PSKH") || fields.next() != Some("v1") {
        return parse_err(1, "expected `PSKH v1` header");
    }
    let (mut n, mut m, mut es, mut tag) = (None, None, None, None);
    for f in fields {
        let Some((key, value)) = f.split_once('=') else {
            return parse_err(1, format!("malformed header field `{f}`"));
        };
        let bad = || Error::Parse { line: 1, msg: format!("bad value in `{f}`") };
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "M" => m = Some(value.parse::<usize>().map_err(|_| bad())?),
            "Es" => es = Some(value.parse::<f64>().map_err(|_| bad())?),
            "gen" => tag = Some(value.parse::<GeneratorTag>().map_err(|_| bad())?),
            _ => return parse_err(1, format!("unknown header field `{key}`")),
        }
    }
    let (Some(n), Some(m), Some(es), Some(tag)) = (n, m, es, tag) else {
        return parse_err(1, "header must define n, M, Es and gen");
    };
    let mut points = Vec::with_capacity(n * m);
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() })?;
        if vals.len() != 2 * n {
            return parse_err(i + 2, format!("expected {} values, found {}", 2 * n, vals.len()));
        }
        points.extend(vals.chunks_exact(2).map(|c| C64::new(c[0], c[1])));
        rows += 1;
    }
    if rows != m {
        return parse_err(rows + 1, format!("expected {m} points, found {rows}"));
    }
    ConstellationSet::new(n, es, tag, points)
}
