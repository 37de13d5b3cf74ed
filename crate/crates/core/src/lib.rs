//! Working-precision inverses of strictly diagonally dominant symmetric
//! tridiagonal Toeplitz matrices.
//!
//! For `|a| > 2|b|` the inverse of the order-`n` matrix with `a` on the
//! diagonal and `b` on both off-diagonals decays geometrically away from the
//! diagonal. Truncated at the working precision it becomes a band matrix whose
//! bandwidth does not depend on `n`, so the whole inverse is described by a
//! handful of reals that are computed once ([`CompressedInverse`]). The
//! [`solver`] module turns that band into linear-time approximate solves.
//!
//! The [`reference`] module holds the exact oracles (closed-form inverse,
//! Chebyshev polynomials, Thomas elimination) every approximation is checked
//! against.
//!
//! Matrix indices in the public API are 1-based, matching the usual `(i, j)`
//! notation; vectors are ordinary 0-based slices.

pub mod cli;
pub mod dense;
pub mod error;
pub mod inverse;
pub mod io;
pub mod matrix;
pub mod profile;
pub mod reference;
pub mod solver;
pub mod spectral;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use inverse::{simplified_entry, CompressedInverse, FlopCount};
pub use matrix::ToeplitzTridiagonal;
pub use profile::{band_profile, error_bound, BandProfile};
pub use spectral::{numerically_equal, spectral_params, SpectralParams};

/// Largest order for which dense `n x n` output is produced by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Default precision parameter: the significand width of binary64.
pub const DEFAULT_DELTA: u32 = 53;
