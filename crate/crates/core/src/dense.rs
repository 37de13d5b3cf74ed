use crate::error::{Error, Result};

/// Square row-major matrix. Used for exact inverses and dense exports of
/// small problems.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![0.0; order * order],
        }
    }

    pub fn from_row_major(order: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::LengthMismatch {
                expected: order * order,
                actual: entries.len(),
            });
        }
        Ok(Self { order, entries })
    }

    /// Fills entry `(i, j)` (1-based) from `f`.
    pub(crate) fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 1..=order {
            for j in 1..=order {
                entries.push(f(i, j));
            }
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1) * self.order + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[(i - 1) * self.order..i * self.order]
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order {
            return Err(Error::LengthMismatch {
                expected: self.order,
                actual: x.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.order.max(1))
            .take(self.order)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i))
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.order, other.order);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
