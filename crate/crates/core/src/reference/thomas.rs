use crate::error::{Error, Result};
use crate::matrix::ToeplitzTridiagonal;

/// Solves `T x = rhs` by forward elimination and back substitution.
pub fn thomas_solve(matrix: &ToeplitzTridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.order();
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    let (a, b) = (matrix.a(), matrix.b());

    // c[i]: eliminated super-diagonal, x holds the modified right-hand side
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut pivot = a;
    for i in 0..n {
        if i > 0 {
            pivot = a - b * c[i - 1];
        }
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot(i + 1));
        }
        c[i] = b / pivot;
        x[i] = if i > 0 { (rhs[i] - b * x[i - 1]) / pivot } else { rhs[i] / pivot };
    }
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
