//! Precision-derived constants: error-bound exponent, minimum order, and the
//! bandwidth of the working-precision inverse.

use crate::error::{Error, Result};
use crate::spectral::SpectralParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandProfile {
    /// Precision parameter: numbers below `2^-delta` are numerically zero.
    pub delta: u32,
    /// Smallest integer `k >= max(10, delta + log2|tau| - log2 3)`.
    pub k_delta: u32,
    /// Minimum order for which the banded inverse is guaranteed, `ceil(k_delta / phi)`.
    pub n_delta: usize,
    /// Real cut-off exponent `(delta - log2|tau|) / phi`.
    pub alpha_delta: f64,
    /// Numerically nonzero diagonals on one side, main diagonal included.
    pub bandwidth: usize,
    /// Leading rows whose entries carry the boundary correction term.
    pub corrections: usize,
}

impl BandProfile {
    /// Half-band: largest offset from the diagonal with a nonzero entry.
    pub fn half_band(&self) -> usize {
        self.bandwidth - 1
    }
}

pub fn band_profile(params: &SpectralParams, delta: u32) -> Result<BandProfile> {
    if delta == 0 {
        return Err(Error::InvalidDelta);
    }
    let tau_abs = params.tau.abs();
    // log2(|tau| / 3) in one rounding keeps exact cases such as tau = 1.5
    // from landing a hair above an integer.
    let k_real = (delta as f64 + (tau_abs / 3.0).log2()).max(10.0);
    let k_delta = ceil_to_u32(k_real);
    let n_delta = ceil_to_usize(k_delta as f64 / params.phi).max(1);
    let alpha_delta = (delta as f64 - tau_abs.log2()) / params.phi;
    let bandwidth = ceil_to_usize(alpha_delta).max(1);
    let corrections = bandwidth.saturating_sub(2);
    Ok(BandProfile {
        delta,
        k_delta,
        n_delta,
        alpha_delta,
        bandwidth,
        corrections,
    })
}

/// Entrywise bound `3 / (|tau| 2^k)` between the banded and the exact inverse.
pub fn error_bound(params: &SpectralParams, k: u32) -> Result<f64> {
    if k < 10 {
        return Err(Error::BoundInvalid(k));
    }
    Ok(3.0 / params.tau.abs() * crate::spectral::pow2_neg(k))
}

fn ceil_to_u32(v: f64) -> u32 {
    let c = v.ceil();
    if c >= u32::MAX as f64 {
        u32::MAX
    } else {
        c as u32
    }
}

fn ceil_to_usize(v: f64) -> usize {
    let c = v.ceil();
    if c <= 0.0 {
        0
    } else if c >= usize::MAX as f64 {
        usize::MAX
    } else {
        c as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_params;

    #[test]
    fn four_one_delta_53() {
        let p = spectral_params(4.0, 1.0).unwrap();
        let prof = band_profile(&p, 53).unwrap();
        assert_eq!(prof.k_delta, 54);
        assert_eq!(prof.n_delta, 29);
        assert!((prof.alpha_delta - 26.952).abs() < 1e-3);
        assert_eq!(prof.bandwidth, 27);
        assert_eq!(prof.corrections, 25);
        assert_eq!(prof.half_band(), 26);
    }

    #[test]
    fn three_one_delta_53() {
        let p = spectral_params(3.0, 1.0).unwrap();
        let prof = band_profile(&p, 53).unwrap();
        assert!((prof.alpha_delta - 37.33).abs() < 1e-2);
        assert_eq!(prof.bandwidth, 38);
        assert_eq!(prof.corrections, 36);
    }

    #[test]
    fn tiny_delta_clamps() {
        let p = spectral_params(4.0, 1.0).unwrap();
        let prof = band_profile(&p, 1).unwrap();
        assert_eq!(prof.bandwidth, 1);
        assert_eq!(prof.corrections, 0);
        assert_eq!(prof.k_delta, 10);
        assert!(band_profile(&p, 0).is_err());
    }

    #[test]
    fn exact_log_case_is_not_rounded_up() {
        // a = 2.5, b = 1: r_plus = 2, tau = 1.5 exactly, so k = 53 - 1 = 52.
        let p = spectral_params(2.5, 1.0).unwrap();
        assert_eq!(p.tau, 1.5);
        let prof = band_profile(&p, 53).unwrap();
        assert_eq!(prof.k_delta, 52);
        assert_eq!(prof.n_delta, 52);
    }

    #[test]
    fn bound_values() {
        let p3 = spectral_params(3.0, 1.0).unwrap();
        let b = error_bound(&p3, 10).unwrap();
        assert!((b - 3.0 / (5f64.sqrt() * 1024.0)).abs() < 1e-18);
        assert!((b - 1.3101e-3).abs() < 1e-7);
        let p4 = spectral_params(4.0, 1.0).unwrap();
        let b = error_bound(&p4, 54).unwrap();
        assert!((b - 4.81e-17).abs() < 0.01e-17);
        assert!(matches!(error_bound(&p3, 9), Err(Error::BoundInvalid(9))));
    }
}
