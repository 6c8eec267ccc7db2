//! Singly periodic Scherk surfaces: implicit membership, wing graphs over
//! the asymptotic half-planes, core boundary curves, and the smooth cutoffs
//! used throughout the meshing pipeline.

mod cutoff;

pub use cutoff::{cutoff_eval, psi_base, Cutoff};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configuration::Configuration;
use crate::numerics::solve_bracketed;

#[derive(Debug, Error)]
pub enum ScherkError {
    #[error("theta={theta} outside [10 delta_theta, pi/2 - 10 delta_theta] with delta_theta={delta_theta}")]
    ThetaRange { theta: f64, delta_theta: f64 },
    #[error("point lies over the core hole: no wing height at x={x}, z={z}")]
    OutsideWing { x: f64, z: f64 },
    #[error("normal line misses the surface within |f| <= 1 at s={s}, z={z}")]
    NoIntersection { s: f64, z: f64 },
    #[error("no offset a <= {0} satisfies the requested decay bound")]
    CalibrationFailure(f64),
}

/// Scherk angle with the uniform-geometry margin checked.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScherkAngle {
    pub theta: f64,
}

impl ScherkAngle {
    pub fn new(theta: f64, delta_theta: f64) -> Result<Self, ScherkError> {
        let lo = 10.0 * delta_theta;
        let hi = std::f64::consts::FRAC_PI_2 - 10.0 * delta_theta;
        if theta < lo || theta > hi {
            return Err(ScherkError::ThetaRange { theta, delta_theta });
        }
        Ok(Self { theta })
    }

    /// Perpendicular offset of the wing asymptote from its parallel through
    /// the origin: `b_theta = sin(2 theta) log(tan theta)`.
    pub fn b_theta(&self) -> f64 {
        (2.0 * self.theta).sin() * self.theta.tan().ln()
    }
}

/// Per-run margin: a thirtieth of the smallest contact-angle margin of the
/// configuration, so that every Scherk angle used downstream sits well inside
/// the admissible band.
pub fn delta_theta_for(config: &Configuration) -> f64 {
    let mut m = f64::INFINITY;
    for &a in &config.alpha_plus {
        m = m.min(a).min(std::f64::consts::FRAC_PI_2 - a);
    }
    m / 30.0
}

/// `sin^2(theta) cosh(x/sin theta) - cos^2(theta) cosh(y/cos theta) - cos z`;
/// zero exactly on the Scherk surface.
pub fn scherk_residual(theta: ScherkAngle, p: [f64; 3]) -> f64 {
    let t = theta.theta;
    let (s2, c2) = (t.sin() * t.sin(), t.cos() * t.cos());
    s2 * (p[0] / t.sin()).cosh() - c2 * (p[1] / t.cos()).cosh() - p[2].cos()
}

/// `log` of `(sin^2 t cosh(L) - cos z)`, stable for large `L = x / sin t`.
fn log_scherk_lhs(t: f64, big_l: f64, z: f64) -> f64 {
    let s2 = t.sin() * t.sin();
    let l = big_l.abs();
    if l < 300.0 {
        (s2 * l.cosh() - z.cos()).ln()
    } else {
        // cosh(l) ~ e^l / 2 beyond all representable corrections.
        l + (0.5 * s2).ln()
    }
}

/// Height of the first-quadrant wing over `(x, z)`: the positive-`y` solution
/// of the implicit equation, defined where the argument of `arcosh` is at
/// least one.
pub fn wing_height(theta: ScherkAngle, x: f64, z: f64) -> Result<f64, ScherkError> {
    let t = theta.theta;
    let s2 = t.sin() * t.sin();
    let c2 = t.cos() * t.cos();
    let big_l = x / t.sin();
    if big_l.abs() < 300.0 {
        let w = (s2 * big_l.cosh() - z.cos()) / c2;
        if w < 1.0 {
            return Err(ScherkError::OutsideWing { x, z });
        }
        Ok(t.cos() * crate::catenary::arcosh(w))
    } else {
        // log-space: arcosh(w) = log(2 w) up to O(1/w^2).
        let logw = log_scherk_lhs(t, big_l, z) - c2.ln();
        Ok(t.cos() * (logw + std::f64::consts::LN_2))
    }
}

/// Unit vectors `e[t] = (cos t, sin t, 0)` and `e'[t] = (-sin t, cos t, 0)`.
pub fn e_vec(t: f64) -> [f64; 3] {
    [t.cos(), t.sin(), 0.0]
}

pub fn e_perp(t: f64) -> [f64; 3] {
    [-t.sin(), t.cos(), 0.0]
}

/// Asymptotic half-plane parametrization of the first-quadrant wing:
/// `A_theta(s, z) = (a + s) e[pi/2 - theta] + z e_z + b_theta e'[pi/2-theta]`.
pub fn asymptotic_plane_point(theta: ScherkAngle, a: f64, s: f64, z: f64) -> [f64; 3] {
    let d = e_vec(std::f64::consts::FRAC_PI_2 - theta.theta);
    let n = e_perp(std::f64::consts::FRAC_PI_2 - theta.theta);
    let b = theta.b_theta();
    [(a + s) * d[0] + b * n[0], (a + s) * d[1] + b * n[1], z]
}

/// Signed offset `f_theta(s, z)` of the wing from its asymptotic half-plane,
/// along `e'[pi/2 - theta]`, by safeguarded root finding on the graph form of
/// the implicit equation.
pub fn wing_graph(theta: ScherkAngle, a: f64, s: f64, z: f64) -> Result<f64, ScherkError> {
    let t = theta.theta;
    let d = e_vec(std::f64::consts::FRAC_PI_2 - t);
    let n = e_perp(std::f64::consts::FRAC_PI_2 - t);
    let b = theta.b_theta();
    let base = [(a + s) * d[0] + b * n[0], (a + s) * d[1] + b * n[1]];
    // g(f) = y(f) - wing_height(x(f), z): strictly increasing in f since the
    // normal line crosses the wing graph transversally.
    let mut g = |f: f64| -> f64 {
        let x = base[0] + f * n[0];
        let y = base[1] + f * n[1];
        match wing_height(theta, x, z) {
            Ok(h) => y - h,
            Err(_) => f64::NAN,
        }
    };
    // The decay estimate localizes the surface near the plane.
    let mut half = (10.0 * 1e-3 * (-s).exp()).min(1.0).max(1e-6);
    loop {
        let (glo, ghi) = (g(-half), g(half));
        if glo.is_finite() && ghi.is_finite() && glo.signum() != ghi.signum() {
            return Ok(solve_bracketed(&mut g, -half, half, 1e-15).map_err(|_| {
                ScherkError::NoIntersection { s, z }
            })?);
        }
        half *= 4.0;
        if half > 1.0 {
            return Err(ScherkError::NoIntersection { s, z });
        }
    }
}

/// Sampled wing chart: the graph function on an `(s, z)` grid together with
/// the measured decay constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WingChart {
    pub theta: f64,
    pub a: f64,
    pub b_theta: f64,
    pub s_grid: Vec<f64>,
    pub z_grid: Vec<f64>,
    /// Row-major `f[s][z]`.
    pub f: Vec<Vec<f64>>,
    /// `sup e^s |f|` over the grid.
    pub sup_decay: f64,
}

pub fn sample_wing_chart(
    theta: ScherkAngle,
    a: f64,
    s_samples: usize,
    z_samples: usize,
    s_max: f64,
) -> Result<WingChart, ScherkError> {
    let s_grid: Vec<f64> =
        (0..s_samples).map(|i| s_max * i as f64 / (s_samples - 1) as f64).collect();
    let z_grid: Vec<f64> = (0..z_samples)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / z_samples as f64)
        .collect();
    let mut f = Vec::with_capacity(s_samples);
    let mut sup = 0.0f64;
    for &s in &s_grid {
        let mut row = Vec::with_capacity(z_samples);
        for &z in &z_grid {
            let v = wing_graph(theta, a, s, z)?;
            sup = sup.max(s.exp() * v.abs());
            row.push(v);
        }
        f.push(row);
    }
    Ok(WingChart {
        theta: theta.theta,
        a,
        b_theta: theta.b_theta(),
        s_grid,
        z_grid,
        f,
        sup_decay: sup,
    })
}

/// Measured decay bound `sup e^s (|f| + |df/dtheta|)` over the chart grid,
/// with the theta-derivative by centered differences.
fn decay_bound(theta: ScherkAngle, a: f64, eps: f64) -> f64 {
    let dt = 1e-5;
    let tp = ScherkAngle { theta: theta.theta + dt };
    let tm = ScherkAngle { theta: theta.theta - dt };
    let mut sup = 0.0f64;
    let s_samples = 41;
    let z_samples = 256;
    for i in 0..s_samples {
        let s = 10.0 * i as f64 / (s_samples - 1) as f64;
        for j in 0..z_samples {
            let z = 2.0 * std::f64::consts::PI * j as f64 / z_samples as f64;
            // Offsets too small to clear the core hole fail the bound.
            let (f0, fp, fm) = match (
                wing_graph(theta, a, s, z),
                wing_graph(tp, a, s, z),
                wing_graph(tm, a, s, z),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => return f64::INFINITY,
            };
            let df = (fp - fm) / (2.0 * dt);
            sup = sup.max(s.exp() * (f0.abs() + df.abs()));
            if sup > eps {
                return sup;
            }
        }
    }
    sup
}

/// Smallest grid value of the core-exclusion offset `a` for which the sampled
/// decay bound holds and `|b_theta| <= eps a`.
pub fn calibrate_a(theta: ScherkAngle, eps: f64) -> Result<f64, ScherkError> {
    assert!(eps > 0.0 && eps <= 1e-3, "epsilon must lie in (0, 1e-3]");
    let a_max = 1e3;
    let step = 0.25;
    let ok = |a: f64| -> bool {
        theta.b_theta().abs() <= eps * a && decay_bound(theta, a, eps) <= eps
    };
    // Both constraints are monotone in a: bisect over the grid.
    let n = (a_max / step) as usize;
    let (mut lo, mut hi) = (1usize, n);
    if !ok(hi as f64 * step) {
        return Err(ScherkError::CalibrationFailure(a_max));
    }
    if ok(lo as f64 * step) {
        return Ok(lo as f64 * step);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid as f64 * step) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi as f64 * step)
}

/// Closed boundary curve of the half Scherk surface in the `yz`-plane,
/// sampled with `n` points: `cos z = sin^2 t - cos^2 t cosh(y / cos t)`.
pub fn core_boundary(theta: ScherkAngle, n: usize) -> Vec<[f64; 3]> {
    assert!(n >= 16);
    let t = theta.theta;
    // y = 0 forces cos z = -cos(2 theta); the curve spans z in
    // [z0, 2 pi - z0] around z = pi.
    let z0 = (-(2.0 * t).cos()).clamp(-1.0, 1.0).acos();
    let half = n / 2;
    let mut pts = Vec::with_capacity(2 * half);
    for i in 0..=half {
        let z = z0 + (2.0 * std::f64::consts::PI - 2.0 * z0) * i as f64 / half as f64;
        let w = ((t.sin() * t.sin() - z.cos()) / (t.cos() * t.cos())).max(1.0);
        let y = t.cos() * crate::catenary::arcosh(w);
        pts.push([0.0, y, z]);
    }
    for i in (1..half).rev() {
        let z = z0 + (2.0 * std::f64::consts::PI - 2.0 * z0) * i as f64 / half as f64;
        let w = ((t.sin() * t.sin() - z.cos()) / (t.cos() * t.cos())).max(1.0);
        let y = t.cos() * crate::catenary::arcosh(w);
        pts.push([0.0, -y, z]);
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn angle(theta: f64) -> ScherkAngle {
        ScherkAngle { theta }
    }

    #[test]
    fn residual_symmetric_point() {
        let th = angle(FRAC_PI_4);
        assert!(scherk_residual(th, [0.0, 0.0, FRAC_PI_2]).abs() < 1e-15);
        // theta = pi/4 swaps x and y, so points (t,t,z) are on-surface iff
        // cos z = 0.
        assert!((scherk_residual(th, [0.7, 0.7, 0.0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_reflection_invariance() {
        let th = angle(0.6);
        let p = [0.83, 1.1, 0.37];
        let r = scherk_residual(th, p);
        for q in [
            [-p[0], p[1], p[2]],
            [p[0], -p[1], p[2]],
            [p[0], p[1], -p[2]],
            [p[0], p[1], 2.0 * PI - p[2]],
        ] {
            assert_eq!(scherk_residual(th, q), r);
        }
    }

    #[test]
    fn wing_height_cases() {
        let th = angle(FRAC_PI_4);
        // z = pi/2: y = x on the diagonal wing.
        let y = wing_height(th, 2.0, FRAC_PI_2).unwrap();
        assert!((y - 2.0).abs() < 1e-12);
        // frozen value at z = 0, x = 2.
        let y = wing_height(th, 2.0, 0.0).unwrap();
        assert!((y - 1.8082556605591615).abs() < 1e-12);
        // hole region
        assert!(wing_height(th, 0.0, 0.1).is_err());
    }

    #[test]
    fn wing_height_satisfies_residual() {
        let th = angle(0.5);
        for &x in &[1.5, 2.5, 4.0] {
            for &z in &[1.2, 2.0, 3.0] {
                let y = wing_height(th, x, z).unwrap();
                assert!(scherk_residual(th, [x, y, z]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wing_graph_residual_and_period() {
        let th = angle(0.65);
        let a = 3.0;
        for &s in &[0.0, 1.0, 3.0] {
            for &z in &[0.3, 2.0, 5.0] {
                let f = wing_graph(th, a, s, z).unwrap();
                let n = e_perp(FRAC_PI_2 - th.theta);
                let p0 = asymptotic_plane_point(th, a, s, z);
                let p = [p0[0] + f * n[0], p0[1] + f * n[1], z];
                assert!(scherk_residual(th, p).abs() < 1e-12, "s={s} z={z}");
                let f2 = wing_graph(th, a, s, z + 2.0 * PI).unwrap();
                assert!((f - f2).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn wing_decay_in_s() {
        let th = angle(FRAC_PI_4);
        let a = 3.0;
        let f0 = wing_graph(th, a, 0.0, 1.0).unwrap().abs();
        let f3 = wing_graph(th, a, 3.0, 1.0).unwrap().abs();
        let f6 = wing_graph(th, a, 6.0, 1.0).unwrap().abs();
        assert!(f3 < f0 * (-2.5f64).exp());
        assert!(f6 < f3 * (-2.5f64).exp());
    }

    #[test]
    fn asymptote_offset_matches_b_theta() {
        // Fit the asymptote of the wing at large x and compare its
        // perpendicular offset against sin(2 theta) log(tan theta).
        let th = angle(0.6);
        let z = 0.8;
        let x1 = 12.0;
        let x2 = 16.0;
        let y1 = wing_height(th, x1, z).unwrap();
        let y2 = wing_height(th, x2, z).unwrap();
        let slope = (y2 - y1) / (x2 - x1);
        assert!((slope - 1.0 / th.theta.tan()).abs() < 1e-4);
        // Perpendicular distance of the fitted line from the origin-parallel.
        let c = y1 - slope * x1;
        let offset = c / (1.0 + slope * slope).sqrt() * 1.0;
        let expected = th.b_theta() / (1.0); // b_theta is the signed offset
        assert!(
            (offset.abs() - expected.abs()).abs() < 1e-3,
            "offset {offset} vs {expected}"
        );
    }

    #[test]
    fn b_theta_values() {
        assert!(angle(FRAC_PI_4).b_theta().abs() < 1e-15);
        assert!((angle(PI / 6.0).b_theta() + 0.475713075448173).abs() < 1e-14);
    }

    #[test]
    fn core_boundary_shape() {
        let th = angle(FRAC_PI_4);
        let pts = core_boundary(th, 64);
        let widest = pts.iter().map(|p| p[1].abs()).fold(0.0, f64::max);
        assert!((widest - 1.246450480280461).abs() < 1e-9);
        for p in &pts {
            assert!(p[1].abs() < 2.0);
            assert_eq!(p[0], 0.0);
            // On-surface check via the x=0 slice equation.
            let r = scherk_residual(th, *p);
            assert!(r.abs() < 1e-12);
        }
        // symmetric under z -> 2pi - z together with y -> -y
        let n = pts.len();
        for i in 0..n {
            let q = pts[(n - i) % n];
            assert!((pts[i][1] + q[1]).abs() < 1e-9 || (pts[i][2] - q[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn calibrate_a_monotone_in_eps() {
        let th = angle(FRAC_PI_4);
        let a1 = calibrate_a(th, 1e-3).unwrap();
        let a2 = calibrate_a(th, 5e-4).unwrap();
        assert!(a2 >= a1, "a({:.0e})={} a({:.0e})={}", 1e-3, a1, 5e-4, a2);
        // b_theta vanishes at pi/4 so only the decay constraint is active.
        assert!(a1 < 20.0);
    }
}
