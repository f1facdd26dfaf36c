//! Shared value types.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{domain, Error, Result};

pub type C64 = Complex<f64>;

/// Relative tolerance on the squared norm of constellation points.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorTag {
    Eqpa,
    Kmc,
    Pm,
    Papsk,
    External,
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorTag::Eqpa => "EQPA",
            GeneratorTag::Kmc => "KMC",
            GeneratorTag::Pm => "PM",
            GeneratorTag::Papsk => "PAPSK",
            GeneratorTag::External => "EXTERNAL",
        };
        f.write_str(s)
    }
}

impl FromStr for GeneratorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "EQPA" => Ok(GeneratorTag::Eqpa),
            "KMC" => Ok(GeneratorTag::Kmc),
            "PM" => Ok(GeneratorTag::Pm),
            "PAPSK" => Ok(GeneratorTag::Papsk),
            "EXTERNAL" => Ok(GeneratorTag::External),
            _ => domain(format!("unknown generator tag `{s}`")),
        }
    }
}

/// `M` equal-energy complex `n`-vectors, stored point-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstellationSet {
    n: usize,
    es: f64,
    tag: GeneratorTag,
    points: Vec<C64>,
}

impl ConstellationSet {
    /// Builds a set from point-major complex coordinates and checks every invariant.
    pub fn new(n: usize, es: f64, tag: GeneratorTag, points: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConstellation("antenna count must be at least 1".into()));
        }
        if !(es > 0.0 && es.is_finite()) {
            return Err(Error::InvalidConstellation(format!("symbol energy must be positive, got {es}")));
        }
        if !points.len().is_multiple_of(n) {
            return Err(Error::InvalidConstellation(format!("{} coordinates do not split into {n}-vectors", points.len())));
        }
        let m = points.len() / n;
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidConstellation(format!("M = {m} is not a power of two >= 2")));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidConstellation("non-finite coordinate".into()));
        }
        for (i, p) in points.chunks_exact(n).enumerate() {
            let e = norm_sqr(p);
            if ((e - es) / es).abs() > NORM_TOL {
                return Err(Error::InvalidConstellation(format!("point {i} has squared norm {e}, expected {es}")));
            }
        }
        let mut seen = HashSet::with_capacity(m);
        for (i, p) in points.chunks_exact(n).enumerate() {
            // +0.0 and -0.0 describe the same point.
            let key: Vec<u64> = p.iter().flat_map(|z| [(z.re + 0.0).to_bits(), (z.im + 0.0).to_bits()]).collect();
            if !seen.insert(key) {
                return Err(Error::InvalidConstellation(format!("point {i} duplicates an earlier point")));
            }
        }
        Ok(Self { n, es, tag, points })
    }

    /// Builds a set from real `2n`-vectors paired as `(re_1, im_1, ..., re_n, im_n)`.
    pub fn from_real(n: usize, es: f64, tag: GeneratorTag, real: &[Vec<f64>]) -> Result<Self> {
        let mut points = Vec::with_capacity(real.len() * n);
        for r in real {
            if r.len() != 2 * n {
                return Err(Error::InvalidConstellation(format!("real point has {} coordinates, expected {}", r.len(), 2 * n)));
            }
            points.extend(r.chunks_exact(2).map(|c| C64::new(c[0], c[1])));
        }
        Self::new(n, es, tag, points)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.points.len() / self.n
    }

    /// Bits per modulation interval, `log2 M`.
    pub fn rm(&self) -> u32 {
        self.m().trailing_zeros()
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn tag(&self) -> GeneratorTag {
        self.tag
    }

    pub fn point(&self, i: usize) -> &[C64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &[C64]> {
        self.points.chunks_exact(self.n)
    }

    pub fn real_point(&self, i: usize) -> Vec<f64> {
        self.point(i).iter().flat_map(|z| [z.re, z.im]).collect()
    }

    /// Points of the effective constellation `H A`, point-major.
    pub fn transformed(&self, h: &DMatrix<C64>) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.points.len()];
        for (p, o) in self.iter().zip(out.chunks_exact_mut(self.n)) {
            mat_vec_into(h, p, o);
        }
        out
    }

    /// The same set with every point multiplied by `c` (and energy by `c^2`).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.n, self.es * c * c, self.tag, self.points.iter().map(|z| z * c).collect())
    }
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn dist_sqr(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// `Re <a, b>`, the inner product of the real `2n`-dimensional representations.
pub fn real_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

pub fn mat_vec_into(h: &DMatrix<C64>, x: &[C64], out: &mut [C64]) {
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (c, xc) in x.iter().enumerate() {
            acc += h[(r, c)] * xc;
        }
        *o = acc;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    IdentityAwgn,
    RayleighIid,
    Explicit,
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" | "identity" | "identity_awgn" => Ok(ChannelKind::IdentityAwgn),
            "rayleigh" | "rayleigh_iid" | "fading" => Ok(ChannelKind::RayleighIid),
            "explicit" => Ok(ChannelKind::Explicit),
            _ => domain(format!("unknown channel kind `{s}`")),
        }
    }
}

/// A square flat MIMO channel with its per-component noise variance.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    pub h: DMatrix<C64>,
    pub sigma2: f64,
    pub kind: ChannelKind,
}

impl ChannelRealization {
    pub fn identity(n: usize, sigma2: f64) -> Result<Self> {
        Self::build(DMatrix::identity(n, n), sigma2, ChannelKind::IdentityAwgn)
    }

    pub fn explicit(h: DMatrix<C64>, sigma2: f64) -> Result<Self> {
        Self::build(h, sigma2, ChannelKind::Explicit)
    }

    pub(crate) fn build(h: DMatrix<C64>, sigma2: f64, kind: ChannelKind) -> Result<Self> {
        if h.nrows() != h.ncols() || h.nrows() == 0 {
            return domain(format!("channel must be square and non-empty, got {}x{}", h.nrows(), h.ncols()));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return domain(format!("noise variance must be finite and >= 0, got {sigma2}"));
        }
        Ok(Self { h, sigma2, kind })
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return domain(format!("noise variance must be finite and >= 0, got {sigma2}"));
        }
        self.sigma2 = sigma2;
        Ok(self)
    }
}

/// Oversampled multi-antenna samples, antenna-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Waveform {
    n: usize,
    q: usize,
    symbols: usize,
    samples: Vec<C64>,
}

impl Waveform {
    pub fn new(n: usize, q: usize, symbols: usize, samples: Vec<C64>) -> Result<Self> {
        if n == 0 || q == 0 {
            return domain("waveform needs n >= 1 and Q >= 1");
        }
        if !samples.len().is_multiple_of(n) || !(samples.len() / n).is_multiple_of(q) {
            return domain(format!("{} samples do not form {n} antennas of whole symbol intervals at Q = {q}", samples.len()));
        }
        Ok(Self { n, q, symbols, samples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of data symbols the waveform was synthesised from.
    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// Samples per antenna.
    pub fn len(&self) -> usize {
        self.samples.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn antenna(&self, a: usize) -> &[C64] {
        let l = self.len();
        &self.samples[a * l..(a + 1) * l]
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    /// Instantaneous sum power over antennas at every sample.
    pub fn sum_power(&self) -> Vec<f64> {
        let l = self.len();
        let mut p = vec![0.0; l];
        for a in 0..self.n {
            for (pi, z) in p.iter_mut().zip(&self.samples[a * l..(a + 1) * l]) {
                *pi += z.norm_sqr();
            }
        }
        p
    }
}
