//! Construction and lookup of the compressed working-precision inverse.
//!
//! In the canonical octant `i <= j`, `i + j <= n + 1` the banded inverse is
//!
//! ```text
//! A[i][j] = (rho^(i-j) - rho^-(i+j)) / tau
//! ```
//!
//! and every other entry follows by symmetry `A[i][j] = A[j][i]` and
//! persymmetry `A[i][j] = A[n+1-j][n+1-i]`. Writing `v_m = rho^-m / tau` the
//! canonical entry is `v[j-i] - v[i+j]`, so all numerically nonzero values
//! come from the `bandwidth` band values plus a small block of corrected
//! leading rows. Neither depends on `n`.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::matrix::ToeplitzTridiagonal;
use crate::profile::{band_profile, BandProfile};
use crate::spectral::{spectral_params, SpectralParams};

/// Floating-point operations spent by [`CompressedInverse::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlopCount {
    /// Successive divisions by `rho` producing the band values.
    pub divisions: u64,
    /// Boundary corrections `v[j-i] - v[i+j]`.
    pub subtractions: u64,
    /// `tau` and `1/tau`.
    pub setup: u64,
}

impl FlopCount {
    pub fn total(&self) -> u64 {
        self.divisions + self.subtractions + self.setup
    }
}

/// O(1)-memory representation of the working-precision inverse.
///
/// The first `d` rows form block B, the last `d` rows its 180 degree rotation
/// B', and the rows in between are shifted copies of the pure band.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedInverse {
    matrix: ToeplitzTridiagonal,
    params: SpectralParams,
    profile: BandProfile,
    n: usize,
    band_values: Vec<f64>,
    /// `corrections x bandwidth`, row-major; row `i` (1-based), column `m`
    /// holds canonical entry `(i, i + m)`.
    correction_block: Vec<f64>,
    d: usize,
    flops: FlopCount,
}

impl CompressedInverse {
    /// Builds the compressed inverse of `matrix` at precision `delta`.
    ///
    /// Fails with `OrderBelowThreshold` when `n < N_delta`; the banded form is
    /// not guaranteed there and callers should use [`crate::reference`].
    pub fn build(matrix: &ToeplitzTridiagonal, delta: u32) -> Result<Self> {
        let params = spectral_params(matrix.a(), matrix.b())?;
        let profile = band_profile(&params, delta)?;
        let n = matrix.order();
        if n < profile.n_delta {
            return Err(Error::OrderBelowThreshold {
                n,
                n_delta: profile.n_delta,
            });
        }

        let bw = profile.bandwidth;
        let mut flops = FlopCount {
            setup: 2,
            ..FlopCount::default()
        };

        let mut band_values = Vec::with_capacity(bw);
        band_values.push(1.0 / params.tau);
        for m in 1..bw {
            band_values.push(band_values[m - 1] / params.rho);
            flops.divisions += 1;
        }

        // rho^-(i+j) is numerically nonzero exactly when i + j < bandwidth,
        // which is also when v[i+j] exists.
        let c = profile.corrections;
        let mut correction_block = Vec::with_capacity(c * bw);
        for i in 1..=c {
            for m in 0..bw {
                let reach = 2 * i + m;
                if reach < bw {
                    correction_block.push(band_values[m] - band_values[reach]);
                    flops.subtractions += 1;
                } else {
                    correction_block.push(band_values[m]);
                }
            }
        }

        Ok(Self {
            matrix: *matrix,
            params,
            profile,
            n,
            band_values,
            correction_block,
            d: c.max(bw),
            flops,
        })
    }

    pub fn matrix(&self) -> &ToeplitzTridiagonal {
        &self.matrix
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn profile(&self) -> &BandProfile {
        &self.profile
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn band_values(&self) -> &[f64] {
        &self.band_values
    }

    pub fn correction_block(&self) -> &[f64] {
        &self.correction_block
    }

    /// Row `i` (1-based, `i <= corrections`) of the correction block.
    pub fn correction_row(&self, i: usize) -> &[f64] {
        let bw = self.profile.bandwidth;
        &self.correction_block[(i - 1) * bw..i * bw]
    }

    /// Height of the boundary blocks B and B'.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn half_band(&self) -> usize {
        self.profile.bandwidth - 1
    }

    pub fn flops(&self) -> FlopCount {
        self.flops
    }

    /// Entry `(i, j)`, 1-based, resolved by index reflection only.
    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        let (p, q) = canonical(i, j, self.n)?;
        Ok(self.canonical_entry(p, q))
    }

    #[inline]
    pub(crate) fn canonical_entry(&self, p: usize, q: usize) -> f64 {
        let m = q - p;
        let bw = self.profile.bandwidth;
        if m >= bw {
            0.0
        } else if p <= self.profile.corrections {
            self.correction_block[(p - 1) * bw + m]
        } else {
            self.band_values[m]
        }
    }

    /// Dense `n x n` copy, refused above `cap`.
    pub fn materialize_dense_with_cap(&self, cap: usize) -> Result<DenseMatrix> {
        if self.n > cap {
            return Err(Error::OrderTooLargeForDense { n: self.n, cap });
        }
        Ok(DenseMatrix::from_fn(self.n, |i, j| {
            let (p, q) = canonical_unchecked(i, j, self.n);
            self.canonical_entry(p, q)
        }))
    }

    pub fn materialize_dense(&self) -> Result<DenseMatrix> {
        self.materialize_dense_with_cap(crate::DEFAULT_DENSE_CAP)
    }
}

/// Maps `(i, j)` into the octant `p <= q`, `p + q <= n + 1`.
pub fn canonical(i: usize, j: usize, n: usize) -> Result<(usize, usize)> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    Ok(canonical_unchecked(i, j, n))
}

#[inline]
fn canonical_unchecked(i: usize, j: usize, n: usize) -> (usize, usize) {
    let (p, q) = if i <= j { (i, j) } else { (j, i) };
    if p + q > n + 1 {
        (n + 1 - q, n + 1 - p)
    } else {
        (p, q)
    }
}

/// Banded-inverse formula evaluated directly from `params`, without
/// truncation to the band: `(rho^(p-q) - rho^-(p+q)) / tau` at the canonical
/// image `(p, q)` of `(i, j)`.
pub fn simplified_entry(params: &SpectralParams, n: usize, i: usize, j: usize) -> Result<f64> {
    let (p, q) = canonical(i, j, n)?;
    let near = params.rho.powi(-exponent(q - p));
    let far = params.rho.powi(-exponent(p + q));
    Ok((near - far) / params.tau)
}

fn exponent(m: usize) -> i32 {
    i32::try_from(m).unwrap_or(i32::MAX)
}
