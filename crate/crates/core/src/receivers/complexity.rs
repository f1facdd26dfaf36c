//! Per-step trellis branch counts.

use super::{Estimator, TrellisDecodeConfig};
use crate::error::{domain, Result};

/// Branches of a full trellis with `nu` memory elements: `M^(nu+1)`.
pub fn xi_standard(m: u128, nu: u32) -> u128 {
    m.pow(nu + 1)
}

/// Reduced-state trellis whose delay elements hold `orders[i]` classes:
/// `M * prod(orders)`.
pub fn xi_rsse(m: u128, orders: &[u128]) -> u128 {
    m * orders.iter().product::<u128>()
}

/// Iterative VA: a full `nu = 1` pass, then one pass per `(n_NB, nu)` stage
/// with `n_NB + 1` candidates per step: `M^2 + sum (n_NB + 1)^(nu + 1)`.
pub fn xi_iterative(m: u128, stages: &[(u128, u32)]) -> u128 {
    m * m + stages.iter().map(|&(nb, nu)| (nb + 1).pow(nu + 1)).sum::<u128>()
}

/// Branch count implied by a decoder configuration over `m` symbols.
pub fn complexity_xi(cfg: &TrellisDecodeConfig, m: usize) -> Result<u128> {
    cfg.validate()?;
    let mm = m as u128;
    Ok(match cfg.estimator {
        Estimator::Symbolwise | Estimator::Dfe => mm,
        Estimator::Va | Estimator::Ddfse => xi_standard(mm, cfg.nu as u32),
        Estimator::Rsse => {
            let p = cfg.partition.as_ref().expect("validated");
            if p.k() == 0 {
                return domain("empty partition");
            }
            xi_rsse(mm, &[mm, p.k() as u128])
        }
        Estimator::IterVa => {
            let nb = cfg.n_nb.expect("validated") as u128;
            let stages: Vec<(u128, u32)> = (2..=cfg.nu_max.expect("validated")).map(|i| (nb, i as u32)).collect();
            xi_iterative(mm, &stages)
        }
    })
}
