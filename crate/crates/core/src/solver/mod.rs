//! Linear-time approximate solves `x = A rhs` with the compressed inverse `A`.

mod stream;

pub use stream::{
    advance_stream, parallel_solve, seed_stream, stream_drift, streaming_solve, StreamCost,
    StreamState,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inverse::CompressedInverse;
use crate::matrix::ToeplitzTridiagonal;
use crate::reference::thomas_solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Boundary blocks plus the streaming row update.
    Streaming,
    /// Direct banded matrix-vector product.
    Banded,
    /// Exact tridiagonal elimination.
    Thomas,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Streaming => "streaming",
            Method::Banded => "banded",
            Method::Thomas => "thomas",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "streaming" => Ok(Method::Streaming),
            "banded" => Ok(Method::Banded),
            "thomas" => Ok(Method::Thomas),
            other => Err(Error::InvalidOption(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub method: Method,
    /// Skip the `- v_h rhs[i-h]` term of the left-sum update.
    pub omit_left_correction: bool,
    /// Independent interior partitions for [`parallel_solve`].
    pub chunks: usize,
    /// Rows between fresh direct seedings of the stream.
    pub reseed_interval: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            method: Method::Streaming,
            omit_left_correction: false,
            chunks: 1,
            reseed_interval: 4096,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.chunks == 0 {
            return Err(Error::InvalidOption("chunks must be at least 1".into()));
        }
        if self.reseed_interval == 0 {
            return Err(Error::InvalidOption("reseed_interval must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// `||T x - rhs||_inf`.
    pub residual_sup: f64,
    /// Floating-point operations of the solve itself, residual check excluded.
    pub flops_estimate: u64,
    pub method_used: Method,
}

/// `||T x - rhs||_inf` by the exact three-term stencil.
pub fn residual_sup(matrix: &ToeplitzTridiagonal, x: &[f64], rhs: &[f64]) -> Result<f64> {
    let n = matrix.order();
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    let (a, b) = (matrix.a(), matrix.b());
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut t = a * x[i];
        if i > 0 {
            t += b * x[i - 1];
        }
        if i + 1 < n {
            t += b * x[i + 1];
        }
        worst = worst.max((t - rhs[i]).abs());
    }
    Ok(worst)
}

/// `A rhs` by direct dot products, at most `2 bandwidth - 1` terms per row.
pub fn banded_solve(inv: &CompressedInverse, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = inv.order();
    check_len(n, rhs)?;
    let mut out = vec![0.0; n];
    for (k, slot) in out.iter_mut().enumerate() {
        let i = k + 1;
        *slot = if stream::is_interior(inv, i) {
            stream::left_sum(inv, rhs, i) + stream::right_sum(inv, rhs, i)
        } else {
            stream::boundary_row(inv, rhs, i)
        };
    }
    Ok(out)
}

/// Runs the method selected in `opts`. Streaming and banded solves build the
/// compressed inverse first and fail with `OrderBelowThreshold` when `n` is too
/// small for it.
pub fn solve(
    matrix: &ToeplitzTridiagonal,
    rhs: &[f64],
    delta: u32,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    opts.validate()?;
    let n = matrix.order();
    check_len(n, rhs)?;
    match opts.method {
        Method::Thomas => {
            let solution = thomas_solve(matrix, rhs)?;
            let residual_sup = residual_sup(matrix, &solution, rhs)?;
            Ok(SolveReport {
                solution,
                residual_sup,
                // 2 + 3(n-1) forward, 2(n-1) backward
                flops_estimate: 8 * n as u64,
                method_used: Method::Thomas,
            })
        }
        Method::Banded => {
            let inv = CompressedInverse::build(matrix, delta)?;
            let solution = banded_solve(&inv, rhs)?;
            let residual_sup = residual_sup(matrix, &solution, rhs)?;
            Ok(SolveReport {
                solution,
                residual_sup,
                flops_estimate: (n * (2 * inv.profile().bandwidth - 1)) as u64,
                method_used: Method::Banded,
            })
        }
        Method::Streaming => {
            let inv = CompressedInverse::build(matrix, delta)?;
            if opts.chunks > 1 {
                parallel_solve(&inv, rhs, opts)
            } else {
                streaming_solve(&inv, rhs, opts)
            }
        }
    }
}

pub(crate) fn check_len(n: usize, rhs: &[f64]) -> Result<()> {
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    Ok(())
}
