//! Shared floating-point tolerances.
//!
//! All travel-time and revisit-time comparisons in this crate use an absolute
//! plus relative tolerance of `1e-9` each; metric checks on instances use an
//! absolute `1e-9`.

/// Absolute tolerance for time comparisons.
pub const EPS_ABS: f64 = 1e-9;

/// Relative tolerance for time comparisons.
pub const EPS_REL: f64 = 1e-9;

/// Absolute tolerance for triangle-inequality checks on travel-time matrices.
pub const EPS_TRIANGLE: f64 = 1e-9;

/// Tolerance for `a` and `b` at their magnitude.
#[inline]
fn tol(a: f64, b: f64) -> f64 {
    EPS_ABS + EPS_REL * a.abs().max(b.abs())
}

/// `a == b` within tolerance.
#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol(a, b)
}

/// `a <= b` within tolerance.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + tol(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances() {
        assert!(approx_eq(1.0, 1.0 + 5e-10));
        assert!(!approx_eq(1.0, 1.0 + 5e-8));
        assert!(approx_le(1.0 + 5e-10, 1.0));
        assert!(!approx_le(1.1, 1.0));
        assert!(approx_eq(1e6, 1e6 + 1e-4));
    }
}
