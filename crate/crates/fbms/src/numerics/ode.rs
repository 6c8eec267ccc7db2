//! Classical fourth-order Runge-Kutta with step-doubling error control.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size underflow at t={0} (near-singular right-hand side)")]
    StepFailure(f64),
}

fn rk4_step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: &F,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + h * k3[i];
    }
    let k4 = f(t + h, &y2);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` with local relative tolerance
/// `rtol`. Each accepted step also invokes `observe(t, y)` so callers can run
/// event detection on the dense sequence of accepted states.
pub fn integrate_adaptive<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    rtol: f64,
    mut observe: O,
) -> Result<[f64; N], OdeError>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let dir = (t1 - t0).signum();
    if dir == 0.0 {
        return Ok(y0);
    }
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span / 64.0).min(1e-2);
    observe(t, &y);
    let mut guard = 0usize;
    while (t1 - t) * dir > 0.0 {
        guard += 1;
        if guard > 2_000_000 {
            return Err(OdeError::StepFailure(t));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let full = rk4_step(&f, t, &y, h);
        let half = rk4_step(&f, t, &y, 0.5 * h);
        let two_half = rk4_step(&f, t + 0.5 * h, &half, 0.5 * h);
        let mut err: f64 = 0.0;
        let mut scale: f64 = 1e-30;
        for i in 0..N {
            err = err.max((full[i] - two_half[i]).abs());
            scale = scale.max(y[i].abs()).max(two_half[i].abs()).max(1.0);
        }
        let tol = rtol * scale;
        if err <= tol || h.abs() < 1e-14 * span {
            if h.abs() < 1e-14 * span && err > 100.0 * tol {
                return Err(OdeError::StepFailure(t));
            }
            t += h;
            // Local extrapolation: the two-half-step solution plus the
            // leading error term estimated by step doubling.
            for i in 0..N {
                y[i] = two_half[i] + (two_half[i] - full[i]) / 15.0;
            }
            observe(t, &y);
            if err < 0.1 * tol {
                h *= 2.0;
            }
        } else {
            h *= 0.5;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate_adaptive(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 2.0, 1e-10, |_, _| {})
            .unwrap();
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let y = integrate_adaptive(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            10.0 * std::f64::consts::PI,
            1e-11,
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8, "y = {:?}", y);
    }
}
