//! Roots of `r^2 - 2 x r + 1 = 0` and the decay constants derived from them.

use crate::error::Result;
use crate::matrix::check_coefficients;

/// Spectral quantities of a dominant tridiagonal Toeplitz matrix.
///
/// `r_plus` is the root with `|r_plus| > 1` and carries the sign of `x`.
/// `rho = -r_plus` is the signed decay ratio: the inverse's `m`-th diagonal
/// is proportional to `rho^-m`, which absorbs the `(-1)^(i+j)` sign factor of
/// the closed form for both signs of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub x: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    pub rho: f64,
    pub phi: f64,
    pub tau: f64,
}

/// Computes [`SpectralParams`] for the coefficients `(a, b)`.
///
/// Fails with `DegenerateOffDiagonal` when `b == 0` and with
/// `NotDiagonallyDominant` when `|a| <= 2|b|`.
pub fn spectral_params(a: f64, b: f64) -> Result<SpectralParams> {
    check_coefficients(a, b)?;
    let x = a / (2.0 * b);
    let ax = x.abs();
    // (|x| - 1)(|x| + 1) avoids the cancellation of x^2 - 1 near |x| = 1.
    let s = ((ax - 1.0) * (ax + 1.0)).sqrt();
    let r_plus = (ax + s).copysign(x);
    let r_minus = 1.0 / r_plus;
    Ok(SpectralParams {
        x,
        r_plus,
        r_minus,
        rho: -r_plus,
        phi: r_plus.abs().log2(),
        tau: b * (r_plus - r_minus),
    })
}

/// `true` iff `|s - t| < 2^-delta`.
pub fn numerically_equal(s: f64, t: f64, delta: u32) -> bool {
    (s - t).abs() < pow2_neg(delta)
}

/// `2^-delta`, exact down to the subnormal range.
pub(crate) fn pow2_neg(delta: u32) -> f64 {
    // powi is exact for powers of two as long as the result is normal;
    // split the exponent so subnormal thresholds such as 2^-1074 survive.
    let delta = delta as i32;
    if delta <= 1000 {
        2f64.powi(-delta)
    } else {
        2f64.powi(-1000) * 2f64.powi(1000 - delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::reference::dd_div;
    use twofloat::TwoFloat;

    /// Extended-precision evaluation of the same definitions.
    fn oracle(a: f64, b: f64) -> (f64, f64, f64, f64) {
        let x = dd_div(TwoFloat::from(a), TwoFloat::from(2.0 * b));
        let s = (x * x - 1.0).sqrt();
        let rp = if x.hi() > 0.0 { x + s } else { x - s };
        let rm = dd_div(TwoFloat::from(1.0), rp);
        let tau = TwoFloat::from(b) * (rp - rm);
        let phi = rp.abs().log2();
        (rp.into(), rm.into(), tau.into(), phi.into())
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn three_one() {
        let p = spectral_params(3.0, 1.0).unwrap();
        let (rp, rm, tau, phi) = oracle(3.0, 1.0);
        assert_eq!(p.x, 1.5);
        assert!(close(p.r_plus, rp, 4e-16));
        assert!(close(p.r_minus, rm, 4e-16));
        assert!(close(p.tau, tau, 8e-16));
        assert!(close(p.phi, phi, 4e-16));
        // frozen from the oracle above
        assert!((p.r_plus - 2.6180339887).abs() < 1e-10);
        assert!((p.r_minus - 0.3819660113).abs() < 1e-10);
        assert!((p.tau - 2.2360679775).abs() < 1e-10);
        assert!((p.phi - 1.3884838).abs() < 1e-7);
        assert_eq!(p.rho, -p.r_plus);
    }

    #[test]
    fn four_one() {
        let p = spectral_params(4.0, 1.0).unwrap();
        let (rp, _, tau, phi) = oracle(4.0, 1.0);
        assert_eq!(p.x, 2.0);
        assert!(close(p.r_plus, rp, 4e-16));
        assert!(close(p.tau, tau, 8e-16));
        assert!((p.r_plus - 3.7320508).abs() < 1e-7);
        assert!((p.tau - 3.4641016).abs() < 1e-7);
        assert!((p.phi - 1.8999687).abs() < 1e-7);
        assert!((phi - 1.8999687).abs() < 1e-7);
    }

    #[test]
    fn negative_x_selects_negative_root() {
        let p = spectral_params(4.0, -1.0).unwrap();
        assert_eq!(p.x, -2.0);
        assert!(p.r_plus < -1.0);
        assert_eq!(p.r_plus.signum(), p.x.signum());
        assert!(p.rho > 0.0);
        assert!((p.rho - (2.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!(p.phi > 0.0);
    }

    #[test]
    fn rejects_boundary_and_degenerate() {
        assert!(matches!(
            spectral_params(2.0, 1.0),
            Err(Error::NotDiagonallyDominant { .. })
        ));
        assert!(matches!(
            spectral_params(-2.0, 1.0),
            Err(Error::NotDiagonallyDominant { .. })
        ));
        assert!(matches!(
            spectral_params(1.0, 0.0),
            Err(Error::DegenerateOffDiagonal)
        ));
    }

    #[test]
    fn numerically_equal_threshold() {
        assert!(numerically_equal(1.0, 1.0, 53));
        assert!(numerically_equal(0.0, 2f64.powi(-54), 53));
        assert!(!numerically_equal(0.0, 2f64.powi(-52), 53));
        assert!(!numerically_equal(0.0, 2f64.powi(-53), 53));
    }

    #[test]
    fn subnormal_threshold() {
        assert_eq!(pow2_neg(1074), f64::from_bits(1));
        assert_eq!(pow2_neg(149), 2f64.powi(-149));
    }
}
