//! Relative comparison helpers shared by validation checks and tests.

/// `|a − b| / max(1, |a|, |b|)`: relative for large magnitudes and absolute
/// near zero, where curvature numerators often cancel.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    rel_diff(a, b) <= tol
}
