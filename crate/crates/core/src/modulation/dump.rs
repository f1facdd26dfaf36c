//! Binary waveform dump.
//!
//! Little-endian header of three `u32` values `n, K, Q`, followed by every
//! antenna's samples in turn as interleaved `re, im` `f64` pairs.

use std::io::{Read, Write};

use crate::error::{domain, Result};
use crate::types::{Waveform, C64};

pub fn write_waveform<W: Write>(w: &Waveform, mut out: W) -> Result<()> {
    for v in [w.n(), w.symbols(), w.q()] {
        let v = u32::try_from(v).map_err(|_| crate::Error::Domain(format!("{v} does not fit the u32 header")))?;
        out.write_all(&v.to_le_bytes())?;
    }
    for z in w.samples() {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_waveform<R: Read>(mut r: R) -> Result<Waveform> {
    let mut head = [0u8; 12];
    r.read_exact(&mut head)?;
    let word = |i: usize| u32::from_le_bytes(head[4 * i..4 * i + 4].try_into().expect("4 bytes")) as usize;
    let (n, k, q) = (word(0), word(1), word(2));
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() % 16 != 0 {
        return domain("waveform body is not a whole number of complex samples");
    }
    let samples = body
        .chunks_exact(16)
        .map(|c| C64::new(f64::from_le_bytes(c[..8].try_into().expect("8 bytes")), f64::from_le_bytes(c[8..].try_into().expect("8 bytes"))))
        .collect();
    Waveform::new(n, q, k, samples)
}
