//! Bent asymptotic half-planes and bent wings.
//!
//! A wing of the half Scherk surface is repositioned by a rigid frame fixing
//! the z-axis, optionally rotated by a small angle about its pivot line, and
//! bent around the axis `{x = -1/tau}`. The image of the asymptotic
//! half-plane is then an exact catenoid (or plane) and the wing itself is a
//! decaying graph over it.

use nalgebra::{Matrix3, Vector3};

use super::maps::bend;
use crate::scherk::{self, Cutoff, ScherkAngle};

/// Rotation about the z-axis.
pub fn rot_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Reflection across the yz-plane (maps the first wing quadrant to the
/// second).
pub fn reflect_yz() -> Matrix3<f64> {
    Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)
}

/// Half-turn about the z-axis (first quadrant to the third).
pub fn half_turn_z() -> Matrix3<f64> {
    Matrix3::new(-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0)
}

/// One repositioned wing: Scherk angle, pivot-rotation angle, rigid frame and
/// bending period.
#[derive(Debug, Clone)]
pub struct WingMap {
    pub theta: ScherkAngle,
    pub phi: f64,
    pub frame: Matrix3<f64>,
    pub tau: f64,
    /// Offset of the wing chart from the z-axis.
    pub a: f64,
    /// Pivot line data: the frame image of the chart boundary is the
    /// vertical line `{x = r0, y = y0}`.
    pub r0: f64,
    pub y0: f64,
    /// Direction angle of increasing `s` at the pivot after repositioning.
    pub eta: f64,
    /// Orientation sign aligning the parametric normal with the continuous
    /// normal field.
    sign: f64,
}

impl WingMap {
    pub fn new(theta: ScherkAngle, phi: f64, frame: Matrix3<f64>, tau: f64, a: f64) -> Self {
        let t = theta.theta;
        let dir = std::f64::consts::FRAC_PI_2 - t;
        let p0 = a * Vector3::from(scherk::e_vec(dir))
            + theta.b_theta() * Vector3::from(scherk::e_perp(dir));
        let q = frame * p0;
        let d = rot_z(phi) * (frame * Vector3::from(scherk::e_vec(dir)));
        let eta = d.y.atan2(d.x);
        let mut wing = Self { theta, phi, frame, tau, a, r0: q.x, y0: q.y, eta, sign: 1.0 };
        // Fix the parametric orientation against the transported reference
        // normal at the pivot.
        let reference = rot_z(phi) * (frame * Vector3::from(scherk::e_perp(dir)));
        let n = wing.raw_normal(0.0, 0.0);
        wing.sign = if n.dot(&reference) >= 0.0 { 1.0 } else { -1.0 };
        wing
    }

    /// Point of the bent asymptotic surface at wing coordinates `(s, z)`.
    pub fn map_a(&self, s: f64, z: f64) -> Vector3<f64> {
        let (se, ce) = self.eta.sin_cos();
        if self.tau == 0.0 {
            return Vector3::new(self.r0 + s * ce, self.y0 + s * se, z);
        }
        let ti = 1.0 / self.tau;
        let w = (self.tau * s).cosh() + ce * (self.tau * s).sinh();
        let (sz, cz) = (self.tau * z).sin_cos();
        Vector3::new(
            (self.r0 + ti) * w * cz - ti,
            self.y0 + s * (1.0 + self.r0 * self.tau) * se,
            (self.r0 + ti) * w * sz,
        )
    }

    fn d_ds(&self, s: f64, z: f64) -> Vector3<f64> {
        let (se, ce) = self.eta.sin_cos();
        if self.tau == 0.0 {
            return Vector3::new(ce, se, 0.0);
        }
        let ti = 1.0 / self.tau;
        let dw = self.tau * ((self.tau * s).sinh() + ce * (self.tau * s).cosh());
        let (sz, cz) = (self.tau * z).sin_cos();
        Vector3::new((self.r0 + ti) * dw * cz, (1.0 + self.r0 * self.tau) * se, (self.r0 + ti) * dw * sz)
    }

    fn d_dz(&self, s: f64, z: f64) -> Vector3<f64> {
        if self.tau == 0.0 {
            return Vector3::new(0.0, 0.0, 1.0);
        }
        let ti = 1.0 / self.tau;
        let w = (self.tau * s).cosh() + self.eta.cos() * (self.tau * s).sinh();
        let (sz, cz) = (self.tau * z).sin_cos();
        Vector3::new(-(self.r0 + ti) * w * self.tau * sz, 0.0, (self.r0 + ti) * w * self.tau * cz)
    }

    fn raw_normal(&self, s: f64, z: f64) -> Vector3<f64> {
        self.d_ds(s, z).cross(&self.d_dz(s, z)).normalize()
    }

    /// Unit normal of the bent asymptotic surface, oriented continuously in
    /// the parameters (equals the transported `e'[pi/2 - theta]` at
    /// `tau = 0, phi = 0`).
    pub fn normal(&self, s: f64, z: f64) -> Vector3<f64> {
        self.sign * self.raw_normal(s, z)
    }

    /// Neck radius and neck height of the catenoid carrying the bent
    /// asymptotic surface (valid when `tau > 0` and `sin eta != 0`), with the
    /// bend axis `{x = -1/tau}` as rotation axis.
    pub fn catenoid(&self) -> Option<crate::catenary::CatenoidParams> {
        if self.tau == 0.0 {
            return None;
        }
        let se = self.eta.sin();
        if se.abs() < 1e-12 {
            return None;
        }
        let neck = (self.r0 + 1.0 / self.tau) * se.abs();
        let t0 = crate::numerics::solve_bracketed(
            |t: f64| t.tanh() - self.eta.cos(),
            -40.0,
            40.0,
            1e-14,
        )
        .ok()?;
        let b = self.y0 - (self.r0 + 1.0 / self.tau) * se * t0;
        Some(crate::catenary::CatenoidParams { a: neck, b })
    }

    /// Point of the bent Scherk wing: near the pivot the bent Scherk surface
    /// itself, beyond `s = 1` the decaying graph over the bent asymptotic
    /// surface, with the graph term cut off at `s ~ 4 delta_s / tau`.
    ///
    /// `f_theta` supplies the wing graph value at `(s, z)`.
    pub fn map_f(&self, s: f64, z: f64, delta_s: f64, f_theta: f64) -> Vector3<f64> {
        let blend = Cutoff::new(1.0, 0.0).eval(s);
        let psi_s = if self.tau == 0.0 {
            1.0
        } else {
            Cutoff::new(4.0 * delta_s / self.tau, 3.0 * delta_s / self.tau).eval(s)
        };
        let mut out = Vector3::zeros();
        if blend > 0.0 {
            // Near the pivot the wing is the bent Scherk surface itself; the
            // repositioning angle only enters through the graph branch.
            let t = self.theta.theta;
            let dirv = Vector3::from(scherk::e_vec(std::f64::consts::FRAC_PI_2 - t));
            let perp = Vector3::from(scherk::e_perp(std::f64::consts::FRAC_PI_2 - t));
            let chart =
                (self.a + s) * dirv + (self.theta.b_theta() + f_theta) * perp + z * Vector3::z();
            out += blend * bend(self.tau, self.frame * chart);
        }
        if blend < 1.0 {
            let graph = self.map_a(s, z) + psi_s * f_theta * self.normal(s, z);
            out += (1.0 - blend) * graph;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn angle(t: f64) -> ScherkAngle {
        ScherkAngle { theta: t }
    }

    #[test]
    fn pivot_circle_geometry() {
        let th = angle(0.7);
        let beta = 0.9;
        let frame = rot_z(FRAC_PI_2 - beta) * half_turn_z();
        let tau = 0.05;
        let w = WingMap::new(th, 0.01, frame, tau, 4.0);
        // s = 0 is the pivot circle: radius 1/tau + r0 about the bend axis,
        // height y0, independent of phi.
        for z in [0.0, 1.0, 4.0] {
            let p = w.map_a(0.0, z);
            let r = ((p.x + 1.0 / tau).powi(2) + p.z * p.z).sqrt();
            assert!((r - (1.0 / tau + w.r0)).abs() < 1e-9);
            assert!((p.y - w.y0).abs() < 1e-12);
        }
        let w2 = WingMap::new(th, -0.02, frame, tau, 4.0);
        assert_eq!(w.r0, w2.r0);
        assert_eq!(w.y0, w2.y0);
    }

    #[test]
    fn tau_zero_flat_plane() {
        let th = angle(0.7);
        let w = WingMap::new(th, 0.0, Matrix3::identity(), 0.0, 3.0);
        // Flat wing: map_a must agree with the chart plane itself.
        for (s, z) in [(0.0, 0.3), (2.0, 1.0), (5.0, -2.0)] {
            let p = w.map_a(s, z);
            let q = Vector3::from(scherk::e_vec(FRAC_PI_2 - th.theta)) * (3.0 + s)
                + Vector3::from(scherk::e_perp(FRAC_PI_2 - th.theta)) * th.b_theta()
                + Vector3::new(0.0, 0.0, z);
            assert!((p - q).norm() < 1e-12, "s={s} z={z}");
        }
        // Normal is the transported e'.
        let n = w.normal(1.0, 1.0);
        let e = Vector3::from(scherk::e_perp(FRAC_PI_2 - th.theta));
        assert!((n - e).norm() < 1e-12);
    }

    #[test]
    fn bent_wing_lies_on_catenoid() {
        let th = angle(0.8);
        let beta = 1.2;
        let frame = rot_z(FRAC_PI_2 - beta) * half_turn_z();
        let tau = 0.04;
        let w = WingMap::new(th, 0.013, frame, tau, 4.0);
        let cat = w.catenoid().unwrap();
        for (s, z) in [(0.0, 0.0), (3.0, 2.0), (8.0, 20.0), (12.0, -5.0)] {
            let p = w.map_a(s, z);
            let rho = ((p.x + 1.0 / tau).powi(2) + p.z * p.z).sqrt();
            let expect = cat.a * ((p.y - cat.b) / cat.a).cosh();
            assert!((rho - expect).abs() < 1e-8, "s={s}: {rho} vs {expect}");
        }
    }

    #[test]
    fn tau_to_zero_limit_of_bent_map() {
        let th = angle(0.7);
        let frame = rot_z(0.3) * reflect_yz();
        let w0 = WingMap::new(th, 0.02, frame, 0.0, 4.0);
        let w1 = WingMap::new(th, 0.02, frame, 1e-6, 4.0);
        for (s, z) in [(0.5, 0.2), (4.0, 1.0)] {
            assert!((w0.map_a(s, z) - w1.map_a(s, z)).norm() < 1e-4);
        }
    }

    #[test]
    fn frame_turn_matches_tetrad_angles() {
        // Wing directions after repositioning reproduce the tetrad
        // eta_2 = pi + alpha^- - beta, eta_3 = 2 pi - alpha^+ - beta for
        // balanced angles.
        let alpha = 0.7;
        let beta = 1.0;
        let th = angle(alpha);
        let f2 = rot_z(FRAC_PI_2 - beta) * reflect_yz();
        let f3 = rot_z(FRAC_PI_2 - beta) * half_turn_z();
        let w2 = WingMap::new(th, 0.0, f2, 0.0, 4.0);
        let w3 = WingMap::new(th, 0.0, f3, 0.0, 4.0);
        let wrap = |x: f64| x.rem_euclid(2.0 * PI);
        assert!((wrap(w2.eta) - wrap(PI + alpha - beta)).abs() < 1e-12);
        assert!((wrap(w3.eta) - wrap(2.0 * PI - alpha - beta)).abs() < 1e-12);
    }

    #[test]
    fn map_f_blend_endpoints() {
        let th = angle(0.75);
        let beta = 1.0;
        let frame = rot_z(FRAC_PI_2 - beta) * half_turn_z();
        let tau = 0.05;
        let delta_s = 0.1;
        let w = WingMap::new(th, 0.0, frame, tau, 4.0);
        // Beyond 4 delta_s / tau the map is exactly the bent asymptote.
        let s = 4.2 * delta_s / tau;
        let f = 1e-4;
        assert!((w.map_f(s, 1.0, delta_s, f) - w.map_a(s, 1.0)).norm() < 1e-12);
        // At s = 0 the map is exactly the bent Scherk wing point.
        let f0 = 0.01;
        let p = w.map_f(0.0, 1.0, delta_s, f0);
        let t = th.theta;
        let chart = Vector3::from(scherk::e_vec(FRAC_PI_2 - t)) * 4.0
            + Vector3::from(scherk::e_perp(FRAC_PI_2 - t)) * (th.b_theta() + f0)
            + Vector3::new(0.0, 0.0, 1.0);
        let expect = bend(tau, frame * chart);
        assert!((p - expect).norm() < 1e-12);
    }
}
