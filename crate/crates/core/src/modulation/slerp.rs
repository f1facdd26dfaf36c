//! Spherical linear interpolation on the real `2n`-dimensional sphere.

use crate::error::{domain, Error, Result};
use crate::types::{norm_sqr, C64};

/// Below this angle the two points are treated as equal.
pub const LINEAR_TOL: f64 = 1e-6;
/// Within this distance of `pi` the two points are treated as antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-6;

/// The great-circle arc from `x1` to `x2`, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct SlerpPath<'a> {
    x1: &'a [C64],
    x2: &'a [C64],
    theta: f64,
    sin_theta: f64,
    radius: f64,
}

impl<'a> SlerpPath<'a> {
    pub fn new(x1: &'a [C64], x2: &'a [C64]) -> Result<Self> {
        if x1.len() != x2.len() {
            return domain("slerp endpoints have different dimensions");
        }
        let (e1, e2) = (norm_sqr(x1), norm_sqr(x2));
        if !(e1 > 0.0) || ((e1 - e2) / e1).abs() > 1e-9 {
            return domain(format!("slerp endpoints must have equal non-zero norm, got {e1} and {e2}"));
        }
        let diff: f64 = x1.iter().zip(x2).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let sum: f64 = x1.iter().zip(x2).map(|(a, b)| (a + b).norm_sqr()).sum::<f64>().sqrt();
        let theta = 2.0 * diff.atan2(sum);
        if std::f64::consts::PI - theta < ANTIPODAL_TOL {
            return Err(Error::AntipodalPoints);
        }
        Ok(Self { x1, x2, theta, sin_theta: theta.sin(), radius: e1.sqrt() })
    }

    /// Angle between the endpoints.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Writes the point at fraction `tau` of the arc into `out`.
    pub fn at_into(&self, tau: f64, out: &mut [C64]) {
        if self.theta < LINEAR_TOL {
            for ((o, a), b) in out.iter_mut().zip(self.x1).zip(self.x2) {
                *o = a * (1.0 - tau) + b * tau;
            }
            let scale = self.radius / norm_sqr(out).sqrt();
            out.iter_mut().for_each(|o| *o *= scale);
            return;
        }
        let w1 = ((1.0 - tau) * self.theta).sin() / self.sin_theta;
        let w2 = (tau * self.theta).sin() / self.sin_theta;
        for ((o, a), b) in out.iter_mut().zip(self.x1).zip(self.x2) {
            *o = a * w1 + b * w2;
        }
    }

    pub fn at(&self, tau: f64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.x1.len()];
        self.at_into(tau, &mut out);
        out
    }
}

/// Point at fraction `tau` along the great circle from `x1` to `x2`.
///
/// Uses the real inner product `Re <x1, x2>`. Nearly identical endpoints fall
/// back to renormalised linear interpolation; antipodal endpoints are an error.
pub fn slerp(x1: &[C64], x2: &[C64], tau: f64) -> Result<Vec<C64>> {
    if !(0.0..=1.0).contains(&tau) {
        return domain(format!("interpolation fraction must lie in [0, 1], got {tau}"));
    }
    Ok(SlerpPath::new(x1, x2)?.at(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn endpoints_are_exact() {
        let x = [c(0.6, 0.0), c(0.0, 0.8)];
        let y = [c(0.0, 0.8), c(-0.6, 0.0)];
        assert_eq!(slerp(&x, &y, 0.0).unwrap(), x.to_vec());
        assert_eq!(slerp(&x, &y, 1.0).unwrap(), y.to_vec());
    }

    #[test]
    fn orthogonal_midpoint() {
        let m = slerp(&[c(1.0, 0.0)], &[c(0.0, 1.0)], 0.5).unwrap();
        assert!((m[0] - c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn antipodes_are_rejected() {
        assert!(matches!(slerp(&[c(1.0, 0.0)], &[c(-1.0, 0.0)], 0.5), Err(Error::AntipodalPoints)));
    }

    #[test]
    fn nearly_equal_points_interpolate_linearly() {
        let x = [c(1.0, 0.0)];
        let y = [C64::from_polar(1.0, 1e-9)];
        let m = slerp(&x, &y, 0.5).unwrap();
        assert!((m[0].norm() - 1.0).abs() < 1e-15);
        assert!((m[0].arg() - 0.5e-9).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(slerp(&[c(1.0, 0.0)], &[c(0.0, 2.0)], 0.5).is_err());
        assert!(slerp(&[c(1.0, 0.0)], &[c(0.0, 1.0)], 1.5).is_err());
    }
}
