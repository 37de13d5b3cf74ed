use twofloat::TwoFloat;

use crate::dense::DenseMatrix;
use super::dd_div;
use crate::error::{Error, Result};
use crate::matrix::ToeplitzTridiagonal;

/// Closed-form inverse
///
/// ```text
/// (T^-1)[i][j] = (-1)^(i+j) U_{i-1}(x) U_{n-j}(x) / (b U_n(x)),   i <= j,
/// ```
///
/// with `x = a / 2b`, evaluated in double-double. Writing
/// `U_k(x) = r+^k (1 - q^(k+1)) / (1 - q)` with `q = r-^2` cancels the growing
/// powers analytically, so no intermediate overflows:
///
/// ```text
/// U_{i-1} U_{n-j} / U_n = r-^(j-i+1) (1 - q^i)(1 - q^(n-j+1)) / ((1 - q)(1 - q^(n+1)))
/// ```
#[derive(Debug, Clone, Copy)]
pub struct ExactInverse {
    n: usize,
    inv_b: TwoFloat,
    r_minus: TwoFloat,
    q: TwoFloat,
    one_minus_q: TwoFloat,
    one_minus_qn1: TwoFloat,
}

impl ExactInverse {
    pub fn new(matrix: &ToeplitzTridiagonal) -> Self {
        let (a, b) = (matrix.a(), matrix.b());
        let x = dd_div(TwoFloat::from(a), TwoFloat::from(2.0 * b));
        let ax = x.abs();
        let s = ((ax - 1.0) * (ax + 1.0)).sqrt();
        let mag = dd_div(TwoFloat::from(1.0), ax + s);
        let r_minus = if x.hi() > 0.0 { mag } else { -mag };
        let q = mag * mag;
        let n = matrix.order();
        Self {
            n,
            inv_b: dd_div(TwoFloat::from(1.0), TwoFloat::from(b)),
            r_minus,
            q,
            one_minus_q: 1.0 - q,
            one_minus_qn1: 1.0 - pow(q, n + 1),
        }
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.n;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Ok(self
            .combine(
                pow(self.r_minus, j - i + 1),
                pow(self.q, i),
                pow(self.q, n - j + 1),
                i + j,
            )
            .into())
    }

    fn combine(&self, r_pow: TwoFloat, q_i: TwoFloat, q_tail: TwoFloat, parity: usize) -> TwoFloat {
        let ratio = dd_div(r_pow * (1.0 - q_i) * (1.0 - q_tail), self.one_minus_q * self.one_minus_qn1);
        let v = ratio * self.inv_b;
        if parity.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    /// Full matrix; power tables are built once by repeated multiplication.
    pub fn dense(&self) -> DenseMatrix {
        let n = self.n;
        let mut r_pows = Vec::with_capacity(n + 2);
        let mut q_pows = Vec::with_capacity(n + 2);
        let (mut r, mut q) = (TwoFloat::from(1.0), TwoFloat::from(1.0));
        for _ in 0..n + 2 {
            r_pows.push(r);
            q_pows.push(q);
            r *= self.r_minus;
            q *= self.q;
        }
        let mut upper = vec![0.0; n * n];
        for i in 1..=n {
            for j in i..=n {
                let v: f64 = self
                    .combine(r_pows[j - i + 1], q_pows[i], q_pows[n - j + 1], i + j)
                    .into();
                upper[(i - 1) * n + (j - 1)] = v;
                upper[(j - 1) * n + (i - 1)] = v;
            }
        }
        DenseMatrix::from_row_major(n, upper).expect("n x n entries")
    }
}

fn pow(base: TwoFloat, e: usize) -> TwoFloat {
    match i32::try_from(e) {
        Ok(0) => TwoFloat::from(1.0),
        Ok(e) => base.powi(e),
        // |base| < 1 here, so the power has long underflowed
        Err(_) => TwoFloat::from(0.0),
    }
}

/// Exact `(T^-1)[i][j]`, 1-based.
pub fn exact_inverse_entry(matrix: &ToeplitzTridiagonal, i: usize, j: usize) -> Result<f64> {
    ExactInverse::new(matrix).entry(i, j)
}

pub fn exact_inverse_dense_with_cap(matrix: &ToeplitzTridiagonal, cap: usize) -> Result<DenseMatrix> {
    let n = matrix.order();
    if n > cap {
        return Err(Error::OrderTooLargeForDense { n, cap });
    }
    Ok(ExactInverse::new(matrix).dense())
}

/// Exact dense inverse, refused above [`crate::DEFAULT_DENSE_CAP`].
pub fn exact_inverse_dense(matrix: &ToeplitzTridiagonal) -> Result<DenseMatrix> {
    exact_inverse_dense_with_cap(matrix, crate::DEFAULT_DENSE_CAP)
}
