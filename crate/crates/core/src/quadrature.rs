//! Adaptive Simpson integration with a Richardson correction on accepted panels.

use crate::error::{GtError, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 50;
const MAX_EVALUATIONS: usize = 20_000_000;

struct State<F> {
    f: F,
    evaluations: usize,
    exhausted: bool,
}

impl<F: FnMut(f64) -> f64> State<F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn panel(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth == 0 || self.evaluations >= MAX_EVALUATIONS || !delta.is_finite() {
            self.exhausted = true;
            return left + right + delta / 15.0;
        }
        self.panel(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + self.panel(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integrates `f` over `[a, b]` to an absolute error estimate of `abs_tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    integrate_adaptive_depth(f, a, b, abs_tol, DEFAULT_MAX_DEPTH)
}

/// As [`integrate_adaptive`] with an explicit recursion cap.
///
/// When the cap is hit anywhere, the error carries the best available estimate.
pub fn integrate_adaptive_depth<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(GtError::Domain(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if !(abs_tol > 0.0) {
        return Err(GtError::InvalidParameter(format!(
            "tolerance must be positive, got {abs_tol}"
        )));
    }
    let mut st = State {
        f,
        evaluations: 0,
        exhausted: false,
    };
    let fa = st.eval(a);
    let fb = st.eval(b);
    let m = 0.5 * (a + b);
    let fm = st.eval(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let estimate = st.panel(a, b, fa, fm, fb, whole, abs_tol, max_depth);
    if st.exhausted || !estimate.is_finite() {
        Err(GtError::NonConvergence { estimate })
    } else {
        Ok(estimate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_adaptive(|t| t * t, 0.0, 2.0, 1e-10).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn constant() {
        assert_eq!(integrate_adaptive(|_| 1.0, 0.0, 5.0, 1e-12).unwrap(), 5.0);
    }

    #[test]
    fn smooth_transcendental() {
        let v = integrate_adaptive(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(integrate_adaptive(|t| t, 1.0, 1.0, 1e-9).is_err());
        assert!(integrate_adaptive(|t| t, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn depth_exhaustion_reports_best_estimate() {
        // discontinuity defeats the error estimate at a shallow cap
        let step = |t: f64| if t < 1.0 / 3.0 { 0.0 } else { 1.0 };
        match integrate_adaptive_depth(step, 0.0, 1.0, 1e-14, 4) {
            Err(GtError::NonConvergence { estimate }) => {
                assert!((estimate - 2.0 / 3.0).abs() < 0.05)
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }
}
