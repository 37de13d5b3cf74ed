//! Exact oracles: the closed-form inverse, Chebyshev polynomials of the
//! second kind, and Thomas elimination.
//!
//! The closed form and the Chebyshev evaluations run in double-double
//! arithmetic and are rounded once at the end, so their results sit within
//! about half an ulp of the real value. That keeps the oracle's own error well
//! below the bounds it is used to check.

mod chebyshev;
mod exact;
mod thomas;

pub use chebyshev::{chebyshev_u, chebyshev_u_closed};
pub use exact::{exact_inverse_dense, exact_inverse_dense_with_cap, exact_inverse_entry, ExactInverse};
pub use thomas::thomas_solve;

use twofloat::TwoFloat;

/// Double-double `num / den`. The crate's own division is only good to about
/// one f64 ulp, so the reciprocal is refined with two Newton steps.
pub(crate) fn dd_div(num: TwoFloat, den: TwoFloat) -> TwoFloat {
    let mut y = TwoFloat::from(1.0 / den.hi());
    for _ in 0..2 {
        y = y + y * (1.0 - den * y);
    }
    num * y
}
