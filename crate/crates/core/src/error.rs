use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("DegenerateOffDiagonal: b = 0, the matrix is diagonal")]
    DegenerateOffDiagonal,

    #[error("NotDiagonallyDominant: |a| = {a_abs} is not greater than 2|b| = {two_b_abs}")]
    NotDiagonallyDominant { a_abs: f64, two_b_abs: f64 },

    #[error("NonFinite: matrix coefficients must be finite (a = {a}, b = {b})")]
    NonFinite { a: f64, b: f64 },

    #[error("InvalidOrder: matrix order must be at least 1")]
    InvalidOrder,

    #[error("InvalidDelta: precision parameter must be at least 1")]
    InvalidDelta,

    #[error("BoundInvalid: error bound requires k >= 10, got k = {0}")]
    BoundInvalid(u32),

    #[error("IndexOutOfRange: ({i}, {j}) is outside 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("OrderBelowThreshold: n = {n} is below N_delta = {n_delta}; use the exact reference instead")]
    OrderBelowThreshold { n: usize, n_delta: usize },

    #[error("OrderTooLargeForDense: n = {n} exceeds the dense cap {cap}")]
    OrderTooLargeForDense { n: usize, cap: usize },

    #[error("OrderTooSmall: streaming needs n > 2d = {}, got n = {n}", 2 * .d)]
    OrderTooSmall { n: usize, d: usize },

    #[error("ZeroPivot: elimination hit a vanishing pivot at row {0}")]
    ZeroPivot(usize),

    #[error("LengthMismatch: expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("NotInteriorRow: row {row} is not in the interior block {lo}..={hi}")]
    NotInteriorRow { row: usize, lo: usize, hi: usize },

    #[error("RowOutOfRange: cannot advance from row {row}, last interior row is {last}")]
    RowOutOfRange { row: usize, last: usize },

    #[error("InvalidOption: {0}")]
    InvalidOption(String),

    #[error("Format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
