use crate::energy::sigma2_for_ebn0;
use crate::error::{domain, Result};
use crate::link::Link;
use crate::par::map_indexed;
use crate::rng::RngSeed;

/// One grid point of a SER curve with exact counts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SerPoint {
    pub ebn0_db: f64,
    pub symbols: u64,
    pub errors: u64,
}

impl SerPoint {
    pub fn ser(&self) -> f64 {
        if self.symbols == 0 {
            0.0
        } else {
            self.errors as f64 / self.symbols as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SerCurve {
    pub points: Vec<SerPoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SerConfig {
    /// `f64::INFINITY` simulates the noiseless channel.
    pub ebn0_db: Vec<f64>,
    pub min_errors: u64,
    pub max_symbols: u64,
    /// Frames simulated between two checks of the stopping rule.
    pub batch_frames: usize,
}

impl Default for SerConfig {
    fn default() -> Self {
        Self { ebn0_db: Vec::new(), min_errors: 200, max_symbols: 10_000_000, batch_frames: 16 }
    }
}

/// Monte Carlo SER over the Eb/N0 grid.
///
/// Frame `f` of grid point `p` always uses seed `seed.derive2(p, f)` and the
/// stopping rule is checked only between fixed-size batches, so results do
/// not depend on the number of workers.
pub fn run_ser(link: &Link, cfg: &SerConfig, seed: RngSeed) -> Result<SerCurve> {
    if cfg.batch_frames == 0 || cfg.max_symbols == 0 {
        return domain("batch size and symbol budget must be positive");
    }
    let a = link.constellation();
    let mut curve = SerCurve::default();
    for (p, &db) in cfg.ebn0_db.iter().enumerate() {
        let sigma2 = if db == f64::INFINITY { 0.0 } else { sigma2_for_ebn0(db, a.es(), a.rm(), a.n(), link.channel_kind())? };
        let mut point = SerPoint { ebn0_db: db, symbols: 0, errors: 0 };
        let mut next_frame = 0u64;
        while point.errors < cfg.min_errors && point.symbols < cfg.max_symbols {
            let first = next_frame;
            let outcomes = map_indexed(cfg.batch_frames, |i| link.simulate_frame(sigma2, seed.derive2(p as u64, first + i as u64)));
            for o in outcomes {
                let o = o?;
                point.errors += o.errors;
                point.symbols += o.symbols;
            }
            next_frame += cfg.batch_frames as u64;
        }
        curve.points.push(point);
    }
    Ok(curve)
}
