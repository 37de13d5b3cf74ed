use twofloat::TwoFloat;

/// `U_m(x)` by the three-term recurrence `U_{k+1} = 2x U_k - U_{k-1}`,
/// `U_0 = 1`, `U_1 = 2x`, carried in double-double and rounded once.
pub fn chebyshev_u(m: usize, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let two_x = TwoFloat::from(2.0 * x);
    let mut prev = TwoFloat::from(1.0);
    let mut cur = two_x;
    for _ in 1..m {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur.into()
}

/// `U_m(x) = (r+^(m+1) - r-^(m+1)) / (r+ - r-)` for `|x| > 1`, where `r+-` are
/// the real roots of `r^2 - 2 x r + 1`. `None` when the roots are not real
/// and distinct.
pub fn chebyshev_u_closed(m: usize, x: f64) -> Option<f64> {
    if x.abs().partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) {
        return None;
    }
    let ax = TwoFloat::from(x.abs());
    let s = ((ax - 1.0) * (ax + 1.0)).sqrt();
    let (r_plus, r_minus) = if x > 0.0 { (ax + s, ax - s) } else { (-(ax + s), -(ax - s)) };
    let e = i32::try_from(m + 1).ok()?;
    let u = super::dd_div(r_plus.powi(e) - r_minus.powi(e), r_plus - r_minus);
    Some(u.into())
}
