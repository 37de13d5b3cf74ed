use crate::error::{Error, Result};

/// The order-`n` symmetric tridiagonal Toeplitz matrix with `a` on the
/// diagonal and `b` on both neighbouring diagonals.
///
/// Construction enforces `b != 0` and strict diagonal dominance `|a| > 2|b|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToeplitzTridiagonal {
    a: f64,
    b: f64,
    n: usize,
}

impl ToeplitzTridiagonal {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        check_coefficients(a, b)?;
        if n == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Same coefficients, different order.
    pub fn with_order(&self, n: usize) -> Result<Self> {
        Self::new(self.a, self.b, n)
    }

    /// `y = T x` via the three-term stencil.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let n = self.n;
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.a * x[i];
            if i > 0 {
                acc += self.b * x[i - 1];
            }
            if i + 1 < n {
                acc += self.b * x[i + 1];
            }
            y.push(acc);
        }
        Ok(y)
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::IndexOutOfRange { i, j, n: self.n });
        }
        Ok(match i.abs_diff(j) {
            0 => self.a,
            1 => self.b,
            _ => 0.0,
        })
    }
}

pub(crate) fn check_coefficients(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite { a, b });
    }
    if b == 0.0 {
        return Err(Error::DegenerateOffDiagonal);
    }
    if a.abs() <= 2.0 * b.abs() {
        return Err(Error::NotDiagonallyDominant {
            a_abs: a.abs(),
            two_b_abs: 2.0 * b.abs(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_coefficients() {
        assert!(matches!(
            ToeplitzTridiagonal::new(3.0, 0.0, 4),
            Err(Error::DegenerateOffDiagonal)
        ));
        assert!(matches!(
            ToeplitzTridiagonal::new(2.0, 1.0, 4),
            Err(Error::NotDiagonallyDominant { .. })
        ));
        assert!(matches!(
            ToeplitzTridiagonal::new(f64::NAN, 1.0, 4),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            ToeplitzTridiagonal::new(3.0, 1.0, 0),
            Err(Error::InvalidOrder)
        ));
    }

    #[test]
    fn matvec_matches_entries() {
        let t = ToeplitzTridiagonal::new(3.0, -1.0, 4).unwrap();
        let y = t.matvec(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0, 9.0]);
        assert_eq!(t.entry(2, 3).unwrap(), -1.0);
        assert_eq!(t.entry(1, 3).unwrap(), 0.0);
        assert!(t.entry(5, 1).is_err());
    }
}
