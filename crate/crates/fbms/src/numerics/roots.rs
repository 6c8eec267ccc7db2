//! Bracketed scalar root finding.
//!
//! The solver keeps a sign-change bracket at all times and interleaves secant
//! steps with bisection; a secant step is accepted only when it lands safely
//! inside the current bracket, so convergence is never worse than bisection.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("root finder failed to converge after {0} iterations")]
    NoConvergence(usize),
    #[error("non-finite function value at x={0}")]
    NonFinite(f64),
}

/// Root of `f` inside `[lo, hi]`, which must bracket a sign change.
///
/// `tol` is an absolute tolerance on the abscissa.
pub fn solve_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NonFinite(a));
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo, hi, flo: fa, fhi: fb });
    }
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            return Ok(0.5 * (a + b));
        }
        // Secant proposal from the bracket endpoints.
        let xs = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let safe = xs.is_finite()
            && xs > a.min(b) + 0.01 * (b - a).abs()
            && xs < a.max(b) - 0.01 * (b - a).abs();
        let x = if safe { xs } else { mid };
        let fx = f(x);
        if !fx.is_finite() {
            return Err(RootError::NonFinite(x));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Err(RootError::NoConvergence(200))
}

/// Pure bisection for a function known to be monotone increasing across the
/// bracket (used where the evaluations may return `INFINITY` to flag
/// out-of-domain probes; the secant step would choke on those).
pub fn bisect_monotone<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if !(fa < 0.0 && fb > 0.0) {
        return Err(RootError::NoSignChange { lo, hi, flo: fa, fhi: fb });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// March downward from `start` with doubling steps until `f` turns negative;
/// returns a bracket `(lo, hi)` with `f(lo) < 0 <= f(hi)` implied by the scan.
/// `f(start)` is assumed positive by the caller.
pub fn expand_bracket_down<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    initial_step: f64,
    max_span: f64,
) -> Option<(f64, f64)> {
    let mut step = initial_step;
    let mut prev = start;
    loop {
        let x = prev - step;
        if start - x > max_span {
            return None;
        }
        if f(x) < 0.0 {
            return Some((x, prev));
        }
        prev = x;
        step *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = solve_bracketed(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn bracket_expansion() {
        let (lo, hi) = expand_bracket_down(|x| x, 5.0, 0.5, 100.0).unwrap();
        assert!(lo < 0.0 && hi >= 0.0);
    }
}
