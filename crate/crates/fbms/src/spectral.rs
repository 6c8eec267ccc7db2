//! Non-degeneracy certificates for the Jacobi operator `L = Lap + |A|^2`
//! with Dirichlet conditions on the configuration pieces.
//!
//! On a catenoidal annulus the rotationally invariant kernel is governed by a
//! closed-form determinant in the normalized heights `z = (y - b)/a`; the
//! finite-difference path discretizes the Sturm-Liouville reduction per
//! angular Fourier mode and serves as the quantitative margin.

use serde::{Deserialize, Serialize};

use crate::catenary::CatenoidArc;
use crate::configuration::Configuration;
use crate::numerics::SymTridiagonal;

/// Default slack in the separation criterion `z1 - z2 <= 2 + eps`.
pub const SEPARATION_EPS: f64 = 0.05;

/// `tanh z1 - tanh z2 + (z1 - z2) tanh z1 tanh z2`; zero exactly when the
/// rotationally invariant Dirichlet problem on the annulus has a nontrivial
/// kernel.
pub fn jacobi_dirichlet_det(z1: f64, z2: f64) -> f64 {
    z1.tanh() - z2.tanh() + (z1 - z2) * z1.tanh() * z2.tanh()
}

/// Rotationally invariant spectral data of one annulus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnulusSpectralData {
    pub z1: f64,
    pub z2: f64,
    pub det_value: f64,
    pub separation: f64,
    /// Separation within `2 + eps`, under which the determinant cannot vanish
    /// off the diagonal.
    pub within_separation_bound: bool,
    /// Lowest Dirichlet eigenvalue of `-L` per Fourier mode (index = mode).
    pub eigen_estimates: Vec<f64>,
}

/// Normalized heights, determinant and separation flag for an arc.
pub fn annulus_kernel_margin(arc: &CatenoidArc) -> AnnulusSpectralData {
    let a = arc.params.a;
    let b = arc.params.b;
    let z1 = (arc.beta_in.cos() - b) / a;
    let z2 = (arc.beta_ex.cos() - b) / a;
    AnnulusSpectralData {
        z1,
        z2,
        det_value: jacobi_dirichlet_det(z1, z2),
        separation: z1 - z2,
        within_separation_bound: z1 - z2 <= 2.0 + SEPARATION_EPS,
        eigen_estimates: Vec::new(),
    }
}

/// First zero of the Bessel function of order zero, computed once by
/// bracketed root finding on its power series.
pub fn bessel_j0_first_zero() -> f64 {
    // J0(x) = sum (-1)^m (x/2)^{2m} / (m!)^2 converges fast for x <= 4.
    let j0 = |x: f64| {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..60 {
            term *= -q / ((m * m) as f64);
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    };
    crate::numerics::solve_bracketed(j0, 2.0, 3.0, 1e-15).expect("J0 changes sign on [2,3]")
}

/// First Dirichlet eigenvalue of the Laplacian on a flat disc: `(j0/R)^2`.
/// The disc pieces have `|A|^2 = 0`, so this is their full Jacobi margin.
pub fn disc_first_eigenvalue(radius: f64) -> f64 {
    assert!(radius > 0.0, "disc radius must be positive");
    let j = bessel_j0_first_zero();
    (j / radius) * (j / radius)
}

/// Outcome of the finite-difference spectrum computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FdSpectrum {
    /// Lowest eigenvalue of `-L` per Fourier mode `l = 0..=modes`.
    pub lowest: Vec<f64>,
    /// Eigenvalue nearest zero over all computed modes.
    pub min_abs: f64,
    /// Set when Richardson comparison between `grid` and `2 grid` moved the
    /// l=0 eigenvalue by more than 1e-4.
    pub convergence_warning: bool,
}

fn sl_matrix(arc: &CatenoidArc, mode: usize, grid: usize) -> SymTridiagonal {
    let a = arc.params.a;
    let b = arc.params.b;
    let y_top = arc.beta_in.cos();
    let y_bot = arc.beta_ex.cos();
    let n = grid;
    let h = (y_top - y_bot) / (n as f64 + 1.0);
    let l2 = (mode * mode) as f64;
    let mut main = Vec::with_capacity(n);
    let mut weight_sqrt = Vec::with_capacity(n);
    for i in 1..=n {
        let y = y_bot + h * i as f64;
        let u = (y - b) / a;
        let c = u.cosh();
        let sech2 = 1.0 / (c * c);
        // -f'' + (l^2/a^2 - (2/a^2) sech^2) f = lambda cosh^2 f
        let q = l2 / (a * a) - 2.0 / (a * a) * sech2;
        main.push((2.0 / (h * h) + q) / (c * c));
        weight_sqrt.push(c);
    }
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        off.push(-1.0 / (h * h) / (weight_sqrt[i] * weight_sqrt[i + 1]));
    }
    SymTridiagonal::new(main, off)
}

/// Lowest Dirichlet eigenvalue of `-L` on the arc for one Fourier mode.
pub fn lowest_eigenvalue_fd(arc: &CatenoidArc, mode: usize, grid: usize) -> f64 {
    sl_matrix(arc, mode, grid).eigenvalue(0)
}

/// Eigenvalue of `-L` nearest zero for one Fourier mode (kernel detector).
pub fn nearest_zero_eigenvalue_fd(arc: &CatenoidArc, mode: usize, grid: usize) -> f64 {
    sl_matrix(arc, mode, grid).eigenvalue_nearest_zero()
}

/// Finite-difference spectra for modes `0..=modes`, with a grid-doubling
/// consistency check on the rotationally invariant mode.
pub fn annulus_spectrum_fd(arc: &CatenoidArc, modes: usize, grid: usize) -> FdSpectrum {
    let grid = grid.max(64);
    let mut lowest = Vec::with_capacity(modes + 1);
    let mut min_abs = f64::INFINITY;
    for l in 0..=modes {
        let lo = lowest_eigenvalue_fd(arc, l, grid);
        let near = nearest_zero_eigenvalue_fd(arc, l, grid);
        if near.abs() < min_abs.abs() {
            min_abs = near;
        }
        lowest.push(lo);
    }
    let coarse = lowest_eigenvalue_fd(arc, 0, grid);
    let fine = lowest_eigenvalue_fd(arc, 0, 2 * grid);
    FdSpectrum {
        lowest,
        min_abs,
        convergence_warning: (fine - coarse).abs() > 1e-4 * fine.abs().max(1.0),
    }
}

/// Per-piece kernel margins of a configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub k: usize,
    /// Index 0 and k are the disc caps, 1..k-1 the annuli.
    pub piece_margins: Vec<f64>,
    pub global_margin: f64,
    pub annulus_data: Vec<AnnulusSpectralData>,
    pub convergence_warnings: usize,
}

impl SpectralCertificate {
    pub fn is_valid(&self) -> bool {
        self.global_margin > 0.0
    }
}

/// Certify every piece of the configuration: the discs through the exact
/// flat-disc eigenvalue, the annuli through the finite-difference spectrum.
pub fn certify_configuration(config: &Configuration, modes: usize, grid: usize) -> SpectralCertificate {
    let mut margins = Vec::with_capacity(config.k + 1);
    let mut data = Vec::new();
    let mut warnings = 0usize;
    let disc = disc_first_eigenvalue(config.disc_radius());
    margins.push(disc);
    for arc in &config.arcs {
        let spec = annulus_spectrum_fd(arc, modes, grid);
        if spec.convergence_warning {
            warnings += 1;
        }
        margins.push(spec.min_abs.abs());
        let mut d = annulus_kernel_margin(arc);
        d.eigen_estimates = spec.lowest;
        data.push(d);
    }
    margins.push(disc);
    let global = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    SpectralCertificate {
        k: config.k,
        piece_margins: margins,
        global_margin: global,
        annulus_data: data,
        convergence_warnings: warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenary::sphere_exit;
    use crate::configuration::{shoot, UnbalancingSeq};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn det_trivial_and_frozen_values() {
        assert_eq!(jacobi_dirichlet_det(0.73, 0.73), 0.0);
        assert!((jacobi_dirichlet_det(1.0, -1.0) - 0.363136995139582).abs() < 1e-14);
        assert!((jacobi_dirichlet_det(2.0, -2.0) + 1.7893415404357085).abs() < 1e-14);
    }

    #[test]
    fn bessel_zero_value() {
        let j = bessel_j0_first_zero();
        assert!((j - 2.4048255576957724).abs() < 1e-12);
        assert!((disc_first_eigenvalue(1.0) - 5.783185962946783).abs() < 1e-10);
    }

    #[test]
    fn disc_eigenvalue_scaling() {
        let r = 0.37;
        let ratio = disc_first_eigenvalue(r) / disc_first_eigenvalue(2.0 * r);
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn margin_data_for_real_arc() {
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        let d = annulus_kernel_margin(&arc);
        assert!(d.z1 > d.z2);
        assert!(d.separation > 0.0);
        assert!(d.within_separation_bound);
        assert!(d.det_value > 0.0);
    }

    #[test]
    fn fd_detects_kernel_at_det_root() {
        // z2 solving det(2, z2) = 0, frozen from the closed form.
        let z1 = 2.0;
        let z2 = crate::numerics::solve_bracketed(|z| jacobi_dirichlet_det(z1, z), -1.0, 0.0, 1e-15)
            .unwrap();
        assert!((z2 + 0.6970637638231388).abs() < 1e-12);
        // Build an arc realizing these normalized heights: solve for (a,b)
        // with both endpoints on the unit circle by 2x2 Newton.
        let (mut a, mut b) = (0.3, -0.3);
        for _ in 0..60 {
            let f1 = (a * z1.cosh()).powi(2) + (b + a * z1).powi(2) - 1.0;
            let f2 = (a * z2.cosh()).powi(2) + (b + a * z2).powi(2) - 1.0;
            let d1a = 2.0 * a * z1.cosh().powi(2) + 2.0 * (b + a * z1) * z1;
            let d1b = 2.0 * (b + a * z1);
            let d2a = 2.0 * a * z2.cosh().powi(2) + 2.0 * (b + a * z2) * z2;
            let d2b = 2.0 * (b + a * z2);
            let det = d1a * d2b - d1b * d2a;
            a -= (f1 * d2b - f2 * d1b) / det;
            b -= (d1a * f2 - d2a * f1) / det;
        }
        let y1 = b + a * z1;
        let y2 = b + a * z2;
        let arc = CatenoidArc {
            beta_in: (a * z1.cosh()).atan2(y1),
            alpha_in: 0.0,
            beta_ex: (a * z2.cosh()).atan2(y2),
            alpha_ex: 0.0,
            params: crate::catenary::CatenoidParams { a, b },
        };
        let lam = nearest_zero_eigenvalue_fd(&arc, 0, 1024);
        assert!(lam.abs() < 1e-3, "kernel eigenvalue = {lam}");
    }

    #[test]
    fn fd_second_order_convergence() {
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        let e1 = lowest_eigenvalue_fd(&arc, 0, 128);
        let e2 = lowest_eigenvalue_fd(&arc, 0, 256);
        let e3 = lowest_eigenvalue_fd(&arc, 0, 512);
        let order = ((e2 - e1).abs() / (e3 - e2).abs()).log2();
        assert!((order - 2.0).abs() < 0.3, "order {order}");
    }

    #[test]
    fn modes_increase_monotonically() {
        let arc = sphere_exit(FRAC_PI_4, FRAC_PI_4).unwrap();
        let spec = annulus_spectrum_fd(&arc, 6, 128);
        for w in spec.lowest.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(!spec.convergence_warning);
    }

    #[test]
    fn certificate_small_k() {
        let c = shoot(&UnbalancingSeq::zeros(3), 7).unwrap();
        let cert = certify_configuration(&c, 2, 128);
        assert!(cert.is_valid());
        assert_eq!(cert.piece_margins.len(), 8);
        for d in &cert.annulus_data {
            assert!(d.separation <= 2.05, "sep {}", d.separation);
        }
    }
}
