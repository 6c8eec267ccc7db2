//! Elementary maps of the desingularization: the bending map, sphere and
//! cylinder residuals, the wing-repositioning diffeomorphism and the
//! boundary-adjustment shear.

use nalgebra::Vector3;

use crate::scherk::Cutoff;

/// Bend the plane family `z = const` around the vertical line through
/// `(-1/tau, 0, 0)`: `tau = 0` is the identity.
pub fn bend(tau: f64, p: Vector3<f64>) -> Vector3<f64> {
    if tau == 0.0 {
        return p;
    }
    let r = 1.0 / tau + p.x;
    let (s, c) = (tau * p.z).sin_cos();
    Vector3::new(r * c - 1.0 / tau, p.y, r * s)
}

/// Rotation taking one bent period to the next: rotation by `angle` in the
/// xz-plane about the bend axis `{x = -1/tau, z = 0}`.
pub fn rotate_about_bend_axis(tau: f64, angle: f64, p: Vector3<f64>) -> Vector3<f64> {
    let cx = -1.0 / tau;
    let (s, c) = angle.sin_cos();
    let dx = p.x - cx;
    Vector3::new(cx + dx * c - p.z * s, p.y, dx * s + p.z * c)
}

/// Residual of the sphere tangent to the bent image of the `yz`-plane along
/// the bend image of the `z`-axis.
pub fn sphere_membership(tau: f64, beta: f64, p: Vector3<f64>) -> f64 {
    let rr = 1.0 / (tau * beta.sin());
    let dx = p.x + 1.0 / tau;
    let dy = p.y + beta.cos() * rr;
    dx * dx + dy * dy + p.z * p.z - rr * rr
}

/// Residual of the preimage cylinder of that sphere under the bend-rotate
/// composition.
pub fn cylinder_membership(tau: f64, beta: f64, p: Vector3<f64>) -> f64 {
    let rr = 1.0 / (tau * beta.sin());
    let dx = p.x + rr;
    dx * dx + p.y * p.y - rr * rr
}

/// Wing-repositioning diffeomorphism: rotation about the z-axis by
/// `phi * sgn(x) * chi(|x|, y)`, where the cutoff `chi` vanishes on the slab
/// `|x| <= sin(2 delta_theta)/2` and on `{y <= 0}`, and equals one on the
/// outer first-quadrant sector (and by oddness acts by `-phi` on its mirror).
#[derive(Debug, Clone, Copy)]
pub struct ZyDiffeo {
    pub phi: f64,
    cut_x: Cutoff,
    cut_y: Cutoff,
}

impl ZyDiffeo {
    pub fn new(phi: f64, delta_theta: f64) -> Self {
        let slab = 0.5 * (2.0 * delta_theta).sin();
        let sector = (9.0 * delta_theta).sin();
        Self { phi, cut_x: Cutoff::new(slab, sector), cut_y: Cutoff::new(0.0, sector) }
    }

    fn angle_at(&self, p: Vector3<f64>) -> f64 {
        if self.phi == 0.0 {
            return 0.0;
        }
        let chi = self.cut_x.eval(p.x.abs()) * self.cut_y.eval(p.y);
        self.phi * p.x.signum() * chi
    }

    pub fn apply(&self, p: Vector3<f64>) -> Vector3<f64> {
        let ang = self.angle_at(p);
        if ang == 0.0 {
            return p;
        }
        let (s, c) = ang.sin_cos();
        Vector3::new(p.x * c - p.y * s, p.x * s + p.y * c, p.z)
    }
}

/// Boundary-adjustment shear pushing the `x = 0` slab of the half Scherk
/// surface onto the preimage cylinder; identity away from the slab and when
/// `tau = 0` or `beta` is polar.
#[derive(Debug, Clone, Copy)]
pub struct Deform {
    pub beta: f64,
    pub tau: f64,
    /// Half-height of the slab in `y` (the boundary circles have `|y| < 2`).
    pub c_d: f64,
    /// Half-width control of the slab in `x`.
    pub eps_d: f64,
}

impl Deform {
    pub fn new(beta: f64, tau: f64, delta_theta: f64) -> Self {
        let c_d = 2.0;
        // Largest slab width with 2 c_d eps_d <= sin(2 delta_theta)/4.
        let eps_d = (2.0 * delta_theta).sin() / (8.0 * c_d);
        Self { beta, tau, c_d, eps_d }
    }

    fn degenerate(&self) -> bool {
        self.tau == 0.0 || self.beta <= 0.0 || self.beta >= std::f64::consts::PI
    }

    pub fn apply(&self, p: Vector3<f64>) -> Vector3<f64> {
        if self.degenerate() || p.x > 0.0 {
            return p;
        }
        let w = self.c_d * self.eps_d;
        let chi = Cutoff::new(2.0 * w, w).eval(p.x.abs())
            * Cutoff::new(2.0 * self.c_d, self.c_d).eval(p.y.abs());
        if chi == 0.0 {
            return p;
        }
        let rr = 1.0 / (self.tau * self.beta.sin());
        let g = (rr * rr - p.y * p.y).sqrt() - rr;
        // Shear of the slab onto the cylinder: x = 0 maps exactly onto it.
        let dx = g * (p.x / (2.0 * w) + 1.0);
        Vector3::new(p.x + chi * dx, p.y, p.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn bend_basics() {
        let p = Vector3::new(0.3, -0.7, 0.0);
        assert_eq!(bend(0.0, p), p);
        assert!((bend(0.25, p) - p).norm() < 1e-14);
        // Quarter turn: z = pi/(2 tau) sends (x, y, .) to (-1/tau, y, 1/tau + x).
        let tau = 0.1;
        let q = bend(tau, Vector3::new(0.3, -0.7, FRAC_PI_2 / tau));
        assert!((q.x + 1.0 / tau).abs() < 1e-9);
        assert!((q.y + 0.7).abs() < 1e-12);
        assert!((q.z - (1.0 / tau + 0.3)).abs() < 1e-9);
    }

    #[test]
    fn cylinder_maps_to_sphere() {
        // bend o R_{pi/2 - beta} takes the cylinder onto the sphere.
        let tau = 0.05;
        let beta = 0.83_f64;
        let rr = 1.0 / (tau * beta.sin());
        let rot = FRAC_PI_2 - beta;
        for i in 0..40 {
            let phi = 2.0 * PI * i as f64 / 40.0;
            let z = -3.0 + 6.0 * i as f64 / 40.0;
            let p = Vector3::new(rr * (phi.cos() - 1.0), rr * phi.sin(), z);
            assert!(cylinder_membership(tau, beta, p).abs() < 1e-9);
            let (s, c) = rot.sin_cos();
            let q = Vector3::new(p.x * c - p.y * s, p.x * s + p.y * c, p.z);
            let out = bend(tau, q);
            assert!(
                sphere_membership(tau, beta, out).abs() < 1e-8,
                "phi={phi} z={z}: {}",
                sphere_membership(tau, beta, out)
            );
        }
        // The axis itself lands on the sphere (tangency circle).
        let out = bend(tau, Vector3::new(0.0, 0.0, 1.7));
        assert!(sphere_membership(tau, beta, out).abs() < 1e-9);
    }

    #[test]
    fn zy_identity_and_sector() {
        let dt = 0.02;
        let zy = ZyDiffeo::new(0.015, dt);
        // Identity on y <= 0 and on the thin slab.
        let p = Vector3::new(1.3, -0.5, 2.0);
        assert_eq!(zy.apply(p), p);
        let p = Vector3::new(0.2 * (2.0 * dt).sin(), 0.8, -1.0);
        assert_eq!(zy.apply(p), p);
        // Exact rotation on the outer sector.
        let dir = 0.7_f64;
        let p = Vector3::new(2.0 * dir.cos(), 2.0 * dir.sin(), 0.3);
        let q = zy.apply(p);
        let (s, c) = 0.015f64.sin_cos();
        let expect = Vector3::new(p.x * c - p.y * s, p.x * s + p.y * c, p.z);
        assert!((q - expect).norm() < 1e-14);
        // Mirror wing rotates the other way.
        let pm = Vector3::new(-p.x, p.y, p.z);
        let qm = zy.apply(pm);
        assert!((qm.x + q.x).abs() < 1e-14 && (qm.y - q.y).abs() < 1e-14);
    }

    #[test]
    fn deform_boundary_on_cylinder() {
        let beta = 1.1;
        let tau = 0.05;
        let d = Deform::new(beta, tau, 0.02);
        for i in 0..20 {
            let y = -1.8 + 3.6 * i as f64 / 19.0;
            let p = Vector3::new(0.0, y, 0.4 * i as f64);
            let q = d.apply(p);
            assert!(cylinder_membership(tau, beta, q).abs() < 1e-9, "y={y}");
            assert!((q - p).norm() <= 1.1 * tau * beta.sin() * 4.0 + 1e-12);
        }
        // Identity away from the slab and for tau = 0.
        let far = Vector3::new(-1.0, 0.5, 2.0);
        assert_eq!(d.apply(far), far);
        let d0 = Deform::new(beta, 0.0, 0.02);
        let p = Vector3::new(-0.001, 0.5, 2.0);
        assert_eq!(d0.apply(p), p);
    }
}
