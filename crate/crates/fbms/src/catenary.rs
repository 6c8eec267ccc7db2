//! Geometry of catenoids that are rotationally invariant about the y-axis,
//! clipped to the unit ball.
//!
//! Everything here is a function of the generating catenary
//! `x(y) = a cosh((y-b)/a)` in the half-plane `x >= 0`. Latitudes are polar
//! angles measured from the north pole `(0,1)`, so a point of the unit circle
//! at latitude `beta` is `(sin beta, cos beta)`. Internally most routines work
//! in the normalized abscissa `u = (y-b)/a`, which stays of logarithmic size
//! even when the neck radius `a` is tiny.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, integrate_adaptive, solve_bracketed};

#[derive(Debug, Error)]
pub enum CatenaryError {
    #[error("contact angle alpha_in={alpha_in} outside (0, pi - beta_in) for beta_in={beta_in}")]
    Domain { beta_in: f64, alpha_in: f64 },
    #[error("catenary does not re-enter the unit circle below the inner latitude")]
    NoExit,
    #[error("ode step control failed: {0}")]
    StepFailure(#[from] numerics::OdeError),
    #[error("root finding failed: {0}")]
    Root(#[from] numerics::RootError),
}

/// Neck radius and neck height of a catenary `x = a cosh((y-b)/a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatenoidParams {
    /// Neck radius, strictly positive.
    pub a: f64,
    /// Height of the neck on the y-axis.
    pub b: f64,
}

/// One catenoidal annulus clipped to the unit ball, described by the
/// latitudes and contact angles of its two boundary circles.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CatenoidArc {
    pub beta_in: f64,
    pub alpha_in: f64,
    pub beta_ex: f64,
    pub alpha_ex: f64,
    pub params: CatenoidParams,
}

/// Heights of the two points where lines through the origin touch the
/// catenary.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TangencyPair {
    pub y_top_minus: f64,
    pub y_top_plus: f64,
}

/// Sign with a dead zone: exact balance points (|x| below 1e-12) count as 0,
/// which keeps the `sgn * arcosh` product in the closed form well defined
/// when `alpha_in + beta_in = pi/2`.
pub fn sgn_zero(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x.signum()
    }
}

/// `arcosh` evaluated as `log(x + sqrt(max(x^2-1, 0)))`; arguments slightly
/// below 1 from roundoff are clamped to 1.
pub fn arcosh(x: f64) -> f64 {
    let x = if x < 1.0 { 1.0 } else { x };
    (x + (x * x - 1.0).max(0.0).sqrt()).ln()
}

/// Catenary through `(sin beta_in, cos beta_in)` meeting the unit circle at
/// interior angle `alpha_in` (measured against the arc toward the south
/// pole).
pub fn catenoid_from_inner(beta_in: f64, alpha_in: f64) -> Result<CatenoidParams, CatenaryError> {
    if !(beta_in > 0.0 && beta_in < std::f64::consts::PI)
        || !(alpha_in > 0.0 && alpha_in < std::f64::consts::PI - beta_in)
    {
        return Err(CatenaryError::Domain { beta_in, alpha_in });
    }
    let s = alpha_in + beta_in;
    let a = beta_in.sin() * s.sin();
    let b = beta_in.cos()
        - sgn_zero(s - std::f64::consts::FRAC_PI_2) * a * arcosh(1.0 / s.sin());
    Ok(CatenoidParams { a, b })
}

/// `x(y) = a cosh((y-b)/a)`.
pub fn catenary_x(params: CatenoidParams, y: f64) -> f64 {
    params.a * ((y - params.b) / params.a).cosh()
}

/// Right-hand side of the slope equation `dv/dbeta` for
/// `v = d(log 1/r)/dbeta` along a catenary in polar coordinates.
pub fn v_ode_rhs(beta: f64, v: f64) -> f64 {
    let cot = beta.cos() / beta.sin();
    -cot * v * (v * v + 1.0) - 2.0 * (v * v + 1.0)
}

/// Slope `v` of the catenary at latitude `beta` computed from the closed
/// form: `p = dx/dy = sinh(u)` is converted to polar slope.
fn v_from_slope(beta: f64, p: f64) -> f64 {
    (beta.cos() + p * beta.sin()) / (beta.sin() - p * beta.cos())
}

/// Squared distance from origin minus one, as a function of `u = (y-b)/a`.
fn r2_minus_1(params: CatenoidParams, u: f64) -> f64 {
    let x = params.a * u.cosh();
    let y = params.b + params.a * u;
    x * x + y * y - 1.0
}

/// Half the derivative of `r^2` with respect to `y`, in terms of `u`.
fn half_dr2(params: CatenoidParams, u: f64) -> f64 {
    params.a * u.cosh() * u.sinh() + (params.b + params.a * u)
}

/// Unique lower intersection of the catenary `K[beta_in, alpha_in]` with the
/// unit circle, with exit contact angle recovered from the tangent there.
///
/// `r^2(y)` is convex along the catenary and increasing at the entry point,
/// so the exit is bracketed by first locating the minimum of `r^2` and then
/// expanding downward until the catenary leaves the disc again.
pub fn sphere_exit(beta_in: f64, alpha_in: f64) -> Result<CatenoidArc, CatenaryError> {
    let params = catenoid_from_inner(beta_in, alpha_in)?;
    let u_in = (beta_in.cos() - params.b) / params.a;

    // d(r^2)/dy > 0 at the entry whenever alpha_in + beta_in < pi, so the
    // minimum of the convex r^2 sits strictly below u_in.
    let (glo, ghi) = numerics::expand_bracket_down(|u| half_dr2(params, u), u_in, 0.5, 4000.0)
        .ok_or(CatenaryError::NoExit)?;
    let u_min = solve_bracketed(|u| half_dr2(params, u), glo, ghi, 1e-14 * ghi.abs().max(1.0))?;
    if r2_minus_1(params, u_min) >= 0.0 {
        return Err(CatenaryError::NoExit);
    }
    let (rlo, rhi) =
        numerics::expand_bracket_down(|u| -r2_minus_1(params, u), u_min, 0.5, 4000.0)
            .ok_or(CatenaryError::NoExit)?;
    let tol_u = (1e-13 / params.a).max(1e-15 * rhi.abs().max(1.0));
    let u_ex = solve_bracketed(|u| r2_minus_1(params, u), rlo, rhi.min(u_min), tol_u)?;

    let y_ex = params.b + params.a * u_ex;
    let x_ex = params.a * u_ex.cosh();
    let beta_ex = x_ex.atan2(y_ex);
    let v_ex = v_from_slope(beta_ex, u_ex.sinh());
    let alpha_ex = (-v_ex).atan();
    Ok(CatenoidArc { beta_in, alpha_in, beta_ex, alpha_ex, params })
}

/// Integrate the slope equation from `v(beta_in) = tan(alpha_in)` up to
/// `beta_target`; independent of the closed-form path through `sphere_exit`.
pub fn integrate_v(beta_in: f64, alpha_in: f64, beta_target: f64) -> Result<f64, CatenaryError> {
    let y = integrate_adaptive(
        |beta, y: &[f64; 1]| [v_ode_rhs(beta, y[0])],
        beta_in,
        [alpha_in.tan()],
        beta_target,
        1e-9,
        |_, _| {},
    )?;
    Ok(y[0])
}

/// Exit latitude and angle determined purely by the slope ODE: integrates
/// `(v, w)` with `w = log(1/r)` and locates the return of `w` to zero.
///
/// This is the oracle against which `sphere_exit` is checked; the only shared
/// ingredient is the right-hand side of the slope equation.
pub fn ode_sphere_exit(beta_in: f64, alpha_in: f64) -> Result<(f64, f64), CatenaryError> {
    if !(alpha_in > 0.0 && alpha_in < std::f64::consts::PI - beta_in) {
        return Err(CatenaryError::Domain { beta_in, alpha_in });
    }
    let rhs = |beta: f64, y: &[f64; 2]| [v_ode_rhs(beta, y[0]), y[0]];
    // March in latitude until w = log(1/r) returns to zero from above.
    let mut crossing: Option<(f64, [f64; 2], f64)> = None;
    let mut prev: Option<(f64, [f64; 2])> = None;
    let horizon = std::f64::consts::PI - 1e-9;
    let mut step_end = (beta_in + 0.1).min(horizon);
    let mut state = [alpha_in.tan(), 0.0];
    let mut beta0 = beta_in;
    'outer: while beta0 < horizon {
        let mut found: Option<(f64, [f64; 2], f64)> = None;
        integrate_adaptive(rhs, beta0, state, step_end, 1e-11, |t, y| {
            if found.is_none() {
                if let Some((tp, yp)) = prev {
                    if yp[1] > 0.0 && y[1] <= 0.0 && t > beta_in {
                        found = Some((tp, yp, t));
                    }
                }
                if t > beta_in + 1e-12 || y[1] > 0.0 {
                    prev = Some((t, *y));
                }
            }
        })?;
        if let Some(c) = found {
            crossing = Some(c);
            break 'outer;
        }
        let (tp, yp) = prev.ok_or(CatenaryError::NoExit)?;
        beta0 = tp;
        state = yp;
        step_end = (beta0 + 0.1).min(horizon);
        if step_end <= beta0 {
            break;
        }
    }
    let (t0, y0, t1) = crossing.ok_or(CatenaryError::NoExit)?;
    // Refine w(beta) = 0 on [t0, t1] by bisection, re-integrating the short
    // tail from the stored pre-crossing state.
    let w_at = |t: f64| -> f64 {
        integrate_adaptive(rhs, t0, y0, t, 1e-12, |_, _| {}).map(|y| y[1]).unwrap_or(f64::NAN)
    };
    let beta_ex = solve_bracketed(w_at, t0, t1, 1e-12)?;
    let v_ex = integrate_adaptive(rhs, t0, y0, beta_ex, 1e-12, |_, _| {})?[0];
    Ok((beta_ex, (-v_ex).atan()))
}

/// Both tangency heights of lines through the origin, found by bracketed
/// bisection on each side of the unique maximum of `1 - (y/a) tanh((y-b)/a)`.
pub fn tangency_points(params: CatenoidParams) -> TangencyPair {
    let a = params.a;
    let b = params.b;
    // Critical point: sinh(u) cosh(u) + y/a = 0, increasing in u.
    let crit = |u: f64| u.sinh() * u.cosh() + (b + a * u) / a;
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut step = 1.0;
    while crit(lo) > 0.0 {
        lo -= step;
        step *= 2.0;
    }
    step = 1.0;
    while crit(hi) < 0.0 {
        hi += step;
        step *= 2.0;
    }
    let u0 = solve_bracketed(crit, lo, hi, 1e-14 * hi.abs().max(1.0)).expect("bracketed");

    let g = |u: f64| 1.0 - ((b + a * u) / a) * u.tanh();
    // g has its maximum (>= 1) at u0 and tends to -inf both ways: one root on
    // each side.
    let find = |dir: f64| -> f64 {
        let mut u = u0;
        let mut step = 1.0;
        loop {
            let next = u + dir * step;
            if g(next) < 0.0 {
                let (ga, gb) = if dir > 0.0 { (u, next) } else { (next, u) };
                return solve_bracketed(g, ga, gb, 1e-14 * next.abs().max(1.0))
                    .expect("bracketed");
            }
            u = next;
            step *= 2.0;
        }
    };
    let u_minus = find(-1.0);
    let u_plus = find(1.0);
    TangencyPair { y_top_minus: b + a * u_minus, y_top_plus: b + a * u_plus }
}

/// Polar radius of the arc at latitude `beta` (single-valued on a graphical
/// arc); solved from `atan2(x(y), y) = beta` on the arc's y-range.
pub fn arc_radius(arc: &CatenoidArc, beta: f64) -> f64 {
    let p = arc.params;
    let u_in = (arc.beta_in.cos() - p.b) / p.a;
    let u_ex = (arc.beta_ex.cos() - p.b) / p.a;
    let latitude = |u: f64| (p.a * u.cosh()).atan2(p.b + p.a * u) - beta;
    // Latitude is increasing as y decreases along a graphical arc.
    let u = solve_bracketed(latitude, u_ex.min(u_in), u_ex.max(u_in), 1e-14)
        .unwrap_or_else(|_| if beta <= arc.beta_in { u_in } else { u_ex });
    let x = p.a * u.cosh();
    let y = p.b + p.a * u;
    x.hypot(y)
}

/// Polar slope `v = d(log 1/r)/dbeta` at latitude `beta` on the arc.
pub fn arc_v(arc: &CatenoidArc, beta: f64) -> f64 {
    let p = arc.params;
    let u_in = (arc.beta_in.cos() - p.b) / p.a;
    let u_ex = (arc.beta_ex.cos() - p.b) / p.a;
    let latitude = |u: f64| (p.a * u.cosh()).atan2(p.b + p.a * u) - beta;
    let u = solve_bracketed(latitude, u_ex.min(u_in), u_ex.max(u_in), 1e-14)
        .unwrap_or_else(|_| if beta <= arc.beta_in { u_in } else { u_ex });
    v_from_slope(beta, u.sinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const SQRT2_OVER_2: f64 = std::f64::consts::SQRT_2 / 2.0;

    #[test]
    fn closed_form_quarter_pi() {
        // The (pi/4, pi/4) catenary is x = (sqrt2/2) cosh(sqrt2 y - 1).
        let p = catenoid_from_inner(FRAC_PI_4, FRAC_PI_4).unwrap();
        assert!((p.a - SQRT2_OVER_2).abs() < 1e-15);
        assert!((p.b - SQRT2_OVER_2).abs() < 1e-15);
        assert!((catenary_x(p, 0.0) - 1.0911227807955015).abs() < 1e-12);
    }

    #[test]
    fn closed_form_two_pi_sevenths() {
        let p = catenoid_from_inner(2.0 * PI / 7.0, 2.0 * PI / 7.0).unwrap();
        assert!((p.a - 0.7622293348805763).abs() < 1e-14);
        assert!((catenary_x(p, 0.0) - 0.8995877504609004).abs() < 1e-12);
    }

    #[test]
    fn balanced_sign_case() {
        // alpha + beta = pi/2 kills the arcosh term.
        let beta = 0.9;
        let p = catenoid_from_inner(beta, FRAC_PI_2 - beta).unwrap();
        assert_eq!(p.b, beta.cos());
    }

    #[test]
    fn neck_value_at_b() {
        let p = CatenoidParams { a: 0.3, b: -0.2 };
        assert_eq!(catenary_x(p, p.b), p.a);
    }

    #[test]
    fn domain_error() {
        assert!(matches!(
            catenoid_from_inner(2.0, 1.5),
            Err(CatenaryError::Domain { .. })
        ));
        assert!(matches!(catenoid_from_inner(1.0, 0.0), Err(CatenaryError::Domain { .. })));
    }

    #[test]
    fn rhs_trivial_values() {
        assert_eq!(v_ode_rhs(1.234, 0.0), -2.0);
        let v = 0.7;
        assert!((v_ode_rhs(FRAC_PI_2, v) + 2.0 * (v * v + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn exit_sides_of_equator() {
        // (pi/4, pi/4) crosses y=0 outside the circle, so it exits above the
        // equator; (2pi/7, 2pi/7) crosses inside and exits below.
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        assert!(arc.beta_ex < FRAC_PI_2, "beta_ex = {}", arc.beta_ex);
        let arc = sphere_exit(2.0 * PI / 7.0, 2.0 * PI / 7.0).unwrap();
        assert!(arc.beta_ex > FRAC_PI_2, "beta_ex = {}", arc.beta_ex);
    }

    #[test]
    fn exit_on_unit_circle() {
        let arc = sphere_exit(0.6, 0.45).unwrap();
        let r = arc_radius(&arc, arc.beta_ex);
        assert!((r - 1.0).abs() < 1e-12);
        // Both closed forms for a agree (lemma's dual expression).
        let a2 = arc.beta_ex.sin() * (arc.beta_ex - arc.alpha_ex).sin();
        assert!((arc.params.a - a2).abs() < 1e-10);
    }

    #[test]
    fn integrate_v_initial_condition() {
        let v = integrate_v(0.7, 0.4, 0.7).unwrap();
        assert!((v - 0.4f64.tan()).abs() < 1e-14);
    }

    #[test]
    fn v_zero_at_radius_minimum() {
        // v = d(log 1/r)/dbeta vanishes exactly where r is minimal.
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        let p = arc.params;
        // Minimum of r^2 in u.
        let (lo, hi) =
            numerics::expand_bracket_down(|u| half_dr2(p, u), (arc.beta_in.cos() - p.b) / p.a, 0.5, 100.0)
                .unwrap();
        let u_min = solve_bracketed(|u| half_dr2(p, u), lo, hi, 1e-14).unwrap();
        let beta_min = (p.a * u_min.cosh()).atan2(p.b + p.a * u_min);
        let v = arc_v(&arc, beta_min);
        assert!(v.abs() < 1e-10, "v at argmin r = {v}");
    }

    #[test]
    fn ode_oracle_matches_closed_form() {
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (beta_ex, alpha_ex) = ode_sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        assert!((arc.beta_ex - beta_ex).abs() < 1e-8, "{} vs {}", arc.beta_ex, beta_ex);
        assert!((arc.alpha_ex - alpha_ex).abs() < 1e-8);
    }

    #[test]
    fn tangency_symmetric_case() {
        // b = 0: roots at +-a t* with t* tanh t* = 1.
        let p = CatenoidParams { a: 0.37, b: 0.0 };
        let t = tangency_points(p);
        let tstar = 1.1996786402577337;
        assert!((t.y_top_plus - p.a * tstar).abs() < 1e-12);
        assert!((t.y_top_plus + t.y_top_minus).abs() < 1e-12);
    }

    #[test]
    fn tangency_ray_is_tangent() {
        let p = CatenoidParams { a: 0.55, b: 0.21 };
        let t = tangency_points(p);
        for y in [t.y_top_minus, t.y_top_plus] {
            let x = catenary_x(p, y);
            // Ray slope dy/dx along the ray equals the curve tangent there:
            // compare y/x against dy/dx = 1/sinh(u) via finite differences.
            let h = 1e-6;
            let dxdy = (catenary_x(p, y + h) - catenary_x(p, y - h)) / (2.0 * h);
            assert!((y / x - 1.0 / dxdy).abs() < 1e-5, "y={y}");
        }
    }
}
