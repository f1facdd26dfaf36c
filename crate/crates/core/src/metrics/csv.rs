//! CSV emission for SER curves and spectra.

use std::io::Write;

use crate::constellations::io::fmt17;
use crate::error::Result;

use super::{SerCurve, SpectrumEstimate};

pub fn write_ser_csv<W: Write>(curve: &SerCurve, mut w: W) -> Result<()> {
    writeln!(w, "ebn0_db,ser,symbols,errors")?;
    for p in &curve.points {
        writeln!(w, "{},{},{},{}", fmt17(p.ebn0_db), fmt17(p.ser()), p.symbols, p.errors)?;
    }
    Ok(())
}

pub fn write_psd_csv<W: Write>(s: &SpectrumEstimate, mut w: W) -> Result<()> {
    writeln!(w, "freq,psd")?;
    for (f, p) in s.freqs.iter().zip(&s.psd) {
        writeln!(w, "{},{}", fmt17(*f), fmt17(*p))?;
    }
    Ok(())
}
