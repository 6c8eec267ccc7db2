//! Assembly of the initial surfaces: scaled desingularizing pieces at every
//! circle of a configuration, fitted annuli and disc caps between their wing
//! rims, boundary orthogonalization and symmetrization.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::mesh::{Mesh, Region};
use super::piece::{build_desing_into, BuildContext, DesingParams, DesingPieceInfo, Resolution};
use super::wing::{half_turn_z, reflect_yz, rot_z, WingMap};
use super::DesingError;
use crate::catenary::CatenoidParams;
use crate::configuration::{shoot, Configuration, UnbalancingSeq};
use crate::scherk::{Cutoff, ScherkAngle};

/// Admissible parameter ball scale: `|xi| <= CBAR * tau`.
pub const CBAR: f64 = 0.5;

/// Full parameter set of one initial surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialSurfaceParams {
    pub k: usize,
    pub m: u32,
    /// Unbalancing parameters; only the first `[k/2]` entries are consumed
    /// and the rest is filled antisymmetrically.
    pub sigma: Vec<f64>,
    /// Wing repositioning parameters `(phi_minus_i, phi_plus_i)` per circle.
    pub varphi: Vec<[f64; 2]>,
    pub resolution: Resolution,
    /// Core-exclusion offset of the Scherk wing charts.
    pub chart_a: f64,
    /// Upper bound for the wing-length parameter; shrunk at runtime until the
    /// trimmed annuli retain a fixed fraction of their arc length.
    pub delta_s_max: f64,
    /// Boundary collar parameter.
    pub eps_prime: f64,
}

impl InitialSurfaceParams {
    pub fn balanced(k: usize, m: u32) -> Self {
        InitialSurfaceParams {
            k,
            m,
            sigma: vec![0.0; k / 2],
            varphi: vec![[0.0, 0.0]; k],
            resolution: Resolution::default(),
            chart_a: 4.0,
            delta_s_max: 0.1,
            eps_prime: 0.1,
        }
    }
}

/// Parameters actually used after runtime resolution, embedded in outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub delta_theta: f64,
    pub delta_s: f64,
    pub eps_prime: f64,
    pub chart_a: f64,
    pub collar: f64,
    pub cbar: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialSurface {
    pub mesh: Mesh,
    pub config: Configuration,
    pub tau: f64,
    pub resolved: ResolvedParams,
    /// Solved matching angles `(phi_tilde_minus, phi_tilde_plus)` per piece.
    pub phi_tilde: Vec<[f64; 2]>,
    /// Fitted annuli `A'_j`, `j = 1..k-1` (the caps are flat discs).
    pub fitted_annuli: Vec<CatenoidParams>,
    pub symmetrization_displacement: f64,
    pub equivariance_residual: f64,
    /// Homothety ratio per piece.
    pub piece_scales: Vec<f64>,
}

/// One desingularizing piece's placement data.
struct Placement {
    params: DesingParams,
    scale: f64,
    shift: Vector3<f64>,
    frame_plus: Matrix3<f64>,
    frame_minus: Matrix3<f64>,
    theta: ScherkAngle,
}

/// Circle of revolution about the y-axis.
#[derive(Debug, Clone, Copy)]
struct Circle {
    radius: f64,
    height: f64,
}

impl Placement {
    fn wing(&self, plus: bool, phi: f64, chart_a: f64) -> WingMap {
        let frame = if plus { self.frame_plus } else { self.frame_minus };
        WingMap::new(self.theta, phi, frame, self.params.tau(), chart_a)
    }

    /// Pivot circle of a wing after the homothety (independent of phi).
    fn pivot(&self, plus: bool, chart_a: f64) -> Circle {
        let w = self.wing(plus, 0.0, chart_a);
        Circle {
            radius: self.scale * (1.0 / self.params.tau() + w.r0),
            height: self.shift.y + self.scale * w.y0,
        }
    }

    /// Rim circle at `s_b = 5 delta_s / tau` for a given matching angle.
    fn rim(&self, plus: bool, phi: f64, chart_a: f64, delta_s: f64) -> Circle {
        let w = self.wing(plus, phi, chart_a);
        let tau = self.params.tau();
        let s_b = 5.0 * delta_s / tau;
        let wfac = (tau * s_b).cosh() + w.eta.cos() * (tau * s_b).sinh();
        Circle {
            radius: self.scale * (1.0 / tau + w.r0) * wfac,
            height: self.shift.y + self.scale * (w.y0 + s_b * (1.0 + w.r0 * tau) * w.eta.sin()),
        }
    }
}

/// Smallest admissible chart offset over all pieces: the hole half-width of
/// the widest Scherk core plus a safety margin.
fn placements_floor(config: &Configuration, varphi: &[[f64; 2]]) -> f64 {
    let mut floor = 1.2f64;
    for i in 0..config.k {
        let theta = config.alpha_plus[i] - varphi[i][1];
        let hole = ((1.0 + theta.cos().powi(2)) / theta.sin().powi(2)).acosh();
        let b_shift = ((2.0 * theta).sin() * theta.tan().ln() / theta.tan()).max(0.0);
        floor = floor.max(hole + b_shift + 0.15);
    }
    floor
}

/// Catenoid through two coaxial circles by damped 2x2 Newton from a seed.
fn fit_catenoid(c1: Circle, c2: Circle, seed: CatenoidParams) -> Result<CatenoidParams, DesingError> {
    let mut a = seed.a;
    let mut b = seed.b;
    for _ in 0..80 {
        let u1 = (c1.height - b) / a;
        let u2 = (c2.height - b) / a;
        let f1 = a * u1.cosh() - c1.radius;
        let f2 = a * u2.cosh() - c2.radius;
        if f1.abs().max(f2.abs()) < 1e-13 {
            return Ok(CatenoidParams { a, b });
        }
        // d/da [a cosh((h-b)/a)] = cosh(u) - u sinh(u); d/db = -sinh(u).
        let j11 = u1.cosh() - u1 * u1.sinh();
        let j12 = -u1.sinh();
        let j21 = u2.cosh() - u2 * u2.sinh();
        let j22 = -u2.sinh();
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            break;
        }
        let da = (f1 * j22 - f2 * j12) / det;
        let db = (j11 * f2 - j21 * f1) / det;
        let lim = 0.5 * a;
        a -= da.clamp(-lim, lim);
        b -= db.clamp(-1.0, 1.0);
    }
    Err(DesingError::GuardFailure(format!(
        "catenoid fit through circles ({}, {}) and ({}, {}) did not converge",
        c1.radius, c1.height, c2.radius, c2.height
    )))
}

/// Mirror-constraint and size checks on the raw parameters.
fn validate_params(p: &InitialSurfaceParams) -> Result<(UnbalancingSeq, Vec<[f64; 2]>), DesingError> {
    if p.k < 3 {
        return Err(DesingError::ParamRange(format!("k = {} below 3", p.k)));
    }
    if p.m < 3 {
        return Err(DesingError::ParamRange(format!("m = {} below 3", p.m)));
    }
    let tau = 1.0 / p.m as f64;
    let sig = UnbalancingSeq::new(p.sigma.iter().take(p.k / 2).cloned().collect());
    if sig.norm > CBAR * tau {
        return Err(DesingError::ParamRange(format!(
            "sigma l1 norm {} above cbar tau = {}",
            sig.norm,
            CBAR * tau
        )));
    }
    let mut varphi = p.varphi.clone();
    if varphi.is_empty() {
        varphi = vec![[0.0, 0.0]; p.k];
    }
    if varphi.len() != p.k {
        return Err(DesingError::ParamRange(format!(
            "varphi has {} entries, expected k = {}",
            varphi.len(),
            p.k
        )));
    }
    for i in 0..p.k {
        let j = p.k - 1 - i;
        if (varphi[i][0] - varphi[j][1]).abs() > 1e-12 {
            return Err(DesingError::ParamRange(format!(
                "varphi mirror constraint violated at circle {}",
                i + 1
            )));
        }
        if varphi[i][0].abs().max(varphi[i][1].abs()) > CBAR * tau {
            return Err(DesingError::ParamRange(format!(
                "|varphi_{}| above cbar tau = {}",
                i + 1,
                CBAR * tau
            )));
        }
    }
    Ok((sig, varphi))
}

/// Assemble the initial surface for the given parameters.
pub fn assemble_initial_surface(p: &InitialSurfaceParams) -> Result<InitialSurface, DesingError> {
    let (sig, varphi) = validate_params(p)?;
    let config = shoot(&sig, p.k)?;
    let k = p.k;
    let m = p.m;
    let tau = 1.0 / m as f64;

    // Margin parameter from the shifted contact angles.
    let mut margin = f64::INFINITY;
    for i in 0..k {
        for a in [
            config.alpha_minus[i] - varphi[i][0],
            config.alpha_plus[i] - varphi[i][1],
        ] {
            margin = margin.min(a).min(std::f64::consts::FRAC_PI_2 - a);
        }
    }
    if margin <= 0.0 {
        return Err(DesingError::ParamRange("contact angle margin exhausted".into()));
    }
    let delta_theta = margin / 30.0;

    // The wing chart must start past the Scherk core hole: at s = 0 the
    // chart's distance from the axis is a sin(theta) - b_theta cos(theta),
    // which has to clear the hole half-width sin(theta) arcosh((1+cos^2)/sin^2).
    let a_floor = placements_floor(&config, &varphi);

    // Wing-length parameter: shrink until every trimmed annulus retains a
    // fixed fraction of its arc and the discs keep a core. The chart offset
    // backs off toward its floor when the pivot insets alone would exhaust an
    // annulus; the trim band `[3, 4] delta_s / tau` must sit past the core
    // blend at s = 1, hence the structural floor on `delta_s * m`.
    let delta_s_for = |a: f64| -> f64 {
        let mut ds = p.delta_s_max;
        for j in 0..k - 1 {
            let cat = &config.arcs[j].params;
            let (b0, b1) = (config.beta[j], config.beta[j + 1]);
            let arc = (cat.a * ((b0.cos() - cat.b) / cat.a).sinh()
                - cat.a * ((b1.cos() - cat.b) / cat.a).sinh())
            .abs();
            let occupancy = b0.sin() + b1.sin();
            let cap = (0.9 * arc - a * tau * occupancy).max(0.0) / (5.3 * occupancy);
            ds = ds.min(cap);
        }
        ds = ds.min((0.9 - a * tau).max(0.0) / 5.3);
        ds
    };
    let structural = 0.36 * tau;
    let mut chart_a = p.chart_a.max(a_floor);
    while delta_s_for(chart_a) < structural {
        chart_a *= 0.9;
        if chart_a < a_floor {
            return Err(DesingError::GuardFailure(format!(
                "no admissible wing chart above the core floor {a_floor:.2}: m = {m} too small for k = {k}"
            )));
        }
    }
    let delta_s = delta_s_for(chart_a);

    let eps_prime = p.eps_prime.min(0.4 * config.beta[0].sin());
    let collar = 0.5 * eps_prime * tau;

    // Placements: angles from the configuration shifted by varphi, homothety
    // taking the bend circle onto each configuration circle.
    let mut placements = Vec::with_capacity(k);
    for i in 0..k {
        let alpha_minus = config.alpha_minus[i] - varphi[i][0];
        let alpha_plus = config.alpha_plus[i] - varphi[i][1];
        let beta = config.beta[i];
        let da = alpha_plus - alpha_minus;
        let params = DesingParams {
            alpha_minus,
            alpha_plus,
            beta,
            phi_minus: 0.0,
            phi_plus: 0.0,
            m,
        };
        let theta = ScherkAngle::new(alpha_plus, delta_theta).map_err(DesingError::Scherk)?;
        placements.push(Placement {
            params,
            scale: tau * beta.sin(),
            shift: Vector3::new(beta.sin(), beta.cos(), 0.0),
            frame_plus: rot_z(std::f64::consts::FRAC_PI_2 - beta) * half_turn_z(),
            frame_minus: rot_z(std::f64::consts::FRAC_PI_2 - beta) * rot_z(-da) * reflect_yz(),
            theta,
        });
    }

    // Fitted annuli through the pivot circles (independent of the matching
    // angles), discs at the pivot heights of the outermost wings.
    let mut fitted = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        let c1 = placements[j].pivot(true, chart_a);
        let c2 = placements[j + 1].pivot(false, chart_a);
        fitted.push(fit_catenoid(c1, c2, config.arcs[j].params)?);
    }
    let disc_north = placements[0].pivot(false, chart_a);
    let disc_south = placements[k - 1].pivot(true, chart_a);

    // Matching angles: 1-D root finding on the signed distance of the rim
    // circle from the adjacent fitted annulus (or disc plane).
    let window = 15.0 * delta_theta;
    let mut phi_tilde = vec![[0.0f64; 2]; k];
    for i in 0..k {
        for (slot, plus) in [(0usize, false), (1usize, true)] {
            let mismatch = |phi: f64| -> f64 {
                let rim = placements[i].rim(plus, phi, chart_a, delta_s);
                if plus && i + 1 < k {
                    let cat = &fitted[i];
                    rim.radius - cat.a * ((rim.height - cat.b) / cat.a).cosh()
                } else if !plus && i > 0 {
                    let cat = &fitted[i - 1];
                    rim.radius - cat.a * ((rim.height - cat.b) / cat.a).cosh()
                } else if plus {
                    rim.height - disc_south.height
                } else {
                    rim.height - disc_north.height
                }
            };
            let side = if plus { '+' } else { '-' };
            let root = crate::numerics::solve_bracketed(mismatch, -window, window, 1e-12)
                .map_err(|_| DesingError::MatchFailure { piece: i + 1, side })?;
            phi_tilde[i][slot] = root;
        }
    }

    // Rim ordering guard: the trimmed annuli must retain positive height span.
    for j in 0..k - 1 {
        let hi = placements[j].rim(true, phi_tilde[j][1], chart_a, delta_s).height;
        let lo = placements[j + 1].rim(false, phi_tilde[j + 1][0], chart_a, delta_s).height;
        if hi <= lo {
            return Err(DesingError::GuardFailure(format!(
                "wing rims of pieces {} and {} overlap",
                j + 1,
                j + 2
            )));
        }
    }

    // Build all desingularizing pieces.
    let mut mesh = Mesh::new();
    let mut infos: Vec<DesingPieceInfo> = Vec::with_capacity(k);
    for (i, pl) in placements.iter().enumerate() {
        let params = DesingParams {
            phi_minus: phi_tilde[i][0],
            phi_plus: phi_tilde[i][1],
            ..pl.params
        };
        let ctx = BuildContext {
            chart_a,
            delta_s,
            delta_theta,
            collar,
            scale: pl.scale,
            shift: pl.shift,
            piece: (i + 1) as u16,
            resolution: p.resolution,
        };
        infos.push(build_desing_into(&mut mesh, &params, &ctx)?);
    }

    // Annuli between consecutive rims and the two disc caps.
    let n_angle = m as usize * p.resolution.z_per_period;
    for j in 0..k - 1 {
        stitch_annulus(
            &mut mesh,
            &infos[j].plus_rim,
            &infos[j + 1].minus_rim,
            &fitted[j],
            Region::Annulus((j + 1) as u16),
            n_angle,
        )?;
    }
    stitch_disc(&mut mesh, &infos[0].minus_rim, disc_north, Region::Disc(0), n_angle)?;
    stitch_disc(&mut mesh, &infos[k - 1].plus_rim, disc_south, Region::Disc(k as u16), n_angle)?;

    // Boundary orthogonalization.
    apply_boundary_correction(&mut mesh, &infos, collar);

    mesh.recompute_boundary_flags();
    super::piece::orient_consistently(&mut mesh, |m| {
        super::piece::radial_flux(m, |r| matches!(r, Region::Annulus(_) | Region::Disc(_)))
    });

    let (moved, resid) = symmetrize(&mut mesh, m);

    Ok(InitialSurface {
        mesh,
        tau,
        resolved: ResolvedParams {
            delta_theta,
            delta_s,
            eps_prime,
            chart_a,
            collar,
            cbar: CBAR,
            tau,
        },
        phi_tilde,
        fitted_annuli: fitted,
        symmetrization_displacement: moved,
        equivariance_residual: resid,
        piece_scales: placements.iter().map(|pl| pl.scale).collect(),
        config,
    })
}

/// Structured annulus between two rims lying on the same catenoid, sampled at
/// the shared angular positions.
fn stitch_annulus(
    mesh: &mut Mesh,
    rim_hi: &[u32],
    rim_lo: &[u32],
    cat: &CatenoidParams,
    region: Region,
    n_angle: usize,
) -> Result<(), DesingError> {
    if rim_hi.len() != n_angle || rim_lo.len() != n_angle {
        return Err(DesingError::GuardFailure("rim sampling mismatch".into()));
    }
    let h_hi = mesh.vertices[rim_hi[0] as usize].y;
    let h_lo = mesh.vertices[rim_lo[0] as usize].y;
    // t = a sinh((y-b)/a) is the arc-length parameter of the catenary.
    let t_of = |y: f64| cat.a * ((y - cat.b) / cat.a).sinh();
    let y_of = |t: f64| cat.b + cat.a * (t / cat.a).asinh();
    let (t1, t2) = (t_of(h_hi), t_of(h_lo));
    let rho_mid = cat.a * ((0.5 * (h_hi + h_lo) - cat.b) / cat.a).cosh();
    let edge = 2.0 * std::f64::consts::PI * rho_mid / n_angle as f64;
    let rows = (((t1 - t2).abs() / edge).ceil() as usize).clamp(2, 400);
    let mut prev: Vec<u32> = rim_hi.to_vec();
    for l in 1..=rows {
        let cur: Vec<u32> = if l == rows {
            rim_lo.to_vec()
        } else {
            let t = t1 + (t2 - t1) * l as f64 / rows as f64;
            let y = y_of(t);
            let rho = cat.a * ((y - cat.b) / cat.a).cosh();
            (0..n_angle)
                .map(|q| {
                    let w = 2.0 * std::f64::consts::PI * q as f64 / n_angle as f64;
                    mesh.push_vertex(
                        Vector3::new(rho * w.cos(), y, rho * w.sin()),
                        region,
                        false,
                        0.0,
                        1.0,
                    )
                })
                .collect()
        };
        for q in 0..n_angle {
            let qn = (q + 1) % n_angle;
            mesh.triangles.push([prev[q], prev[qn], cur[qn]]);
            mesh.triangles.push([prev[q], cur[qn], cur[q]]);
        }
        prev = cur;
    }
    Ok(())
}

/// Flat disc cap inward from a rim circle: polar rings and a center fan.
fn stitch_disc(
    mesh: &mut Mesh,
    rim: &[u32],
    cap: Circle,
    region: Region,
    n_angle: usize,
) -> Result<(), DesingError> {
    if rim.len() != n_angle {
        return Err(DesingError::GuardFailure("rim sampling mismatch".into()));
    }
    let h = mesh.vertices[rim[0] as usize].y;
    let rho_rim = {
        let v = mesh.vertices[rim[0] as usize];
        v.x.hypot(v.z)
    };
    if (h - cap.height).abs() > 1e-6 {
        return Err(DesingError::GuardFailure(format!(
            "disc rim height {h} away from the cap plane {}",
            cap.height
        )));
    }
    let edge = 2.0 * std::f64::consts::PI * rho_rim / n_angle as f64;
    let r_stop = (0.15 * rho_rim).max(2.5 * edge).min(0.8 * rho_rim);
    let rows = (((rho_rim - r_stop) / edge).ceil() as usize).clamp(2, 400);
    let mut prev: Vec<u32> = rim.to_vec();
    for l in 1..=rows {
        let r = rho_rim + (r_stop - rho_rim) * l as f64 / rows as f64;
        let cur: Vec<u32> = (0..n_angle)
            .map(|q| {
                let w = 2.0 * std::f64::consts::PI * q as f64 / n_angle as f64;
                mesh.push_vertex(Vector3::new(r * w.cos(), h, r * w.sin()), region, false, 0.0, 1.0)
            })
            .collect();
        for q in 0..n_angle {
            let qn = (q + 1) % n_angle;
            mesh.triangles.push([prev[q], prev[qn], cur[qn]]);
            mesh.triangles.push([prev[q], cur[qn], cur[q]]);
        }
        prev = cur;
    }
    let center = mesh.push_vertex(Vector3::new(0.0, h, 0.0), region, false, 0.0, 1.0);
    for q in 0..n_angle {
        let qn = (q + 1) % n_angle;
        mesh.triangles.push([prev[q], prev[qn], center]);
    }
    Ok(())
}

/// Displace the boundary collar along the continuum normal so the surface
/// meets the unit sphere orthogonally.
fn apply_boundary_correction(mesh: &mut Mesh, infos: &[DesingPieceInfo], collar: f64) {
    let cut = Cutoff::new(collar, 0.5 * collar);
    for info in infos {
        for ray in &info.collar_rays {
            let b = ray.verts[0] as usize;
            let x0 = mesh.vertices[b];
            let n0 = ray.normals[0];
            let theta0 = x0.dot(&n0);
            let fac = -theta0 / (1.0 - theta0 * theta0).sqrt();
            for (idx, &v) in ray.verts.iter().enumerate() {
                let rho = ray.rho[idx];
                if rho >= collar {
                    continue;
                }
                let u = rho * fac * cut.eval(rho);
                let n = ray.normals[idx];
                mesh.vertices[v as usize] += u * n;
            }
        }
    }
}

/// Average vertex positions over the dihedral-times-mirror symmetry group.
///
/// Returns the largest single-vertex displacement of the averaging and the
/// residual equivariance defect after it.
pub fn symmetrize(mesh: &mut Mesh, m: u32) -> (f64, f64) {
    let elements = group_elements(m);
    let perms: Vec<Vec<u32>> = elements.iter().map(|g| match_permutation(mesh, g)).collect();

    // Orbits via union-find over all element matchings.
    let n = mesh.vertices.len();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], i: u32) -> u32 {
        let mut i = i;
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    for perm in &perms {
        for v in 0..n as u32 {
            let (a, b) = (find(&mut parent, v), find(&mut parent, perm[v as usize]));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    for v in 0..n as u32 {
        let r = find(&mut parent, v);
        mesh.orbit[v as usize] = r;
    }

    // Orbit averaging: v <- mean over g of g^{-1} x_{perm_g(v)}.
    let mut new_pos = vec![Vector3::zeros(); n];
    for (g, perm) in elements.iter().zip(&perms) {
        let ginv = g.transpose();
        for v in 0..n {
            new_pos[v] += ginv * mesh.vertices[perm[v] as usize];
        }
    }
    let mut moved = 0.0f64;
    for v in 0..n {
        let p = new_pos[v] / elements.len() as f64;
        moved = moved.max((p - mesh.vertices[v]).norm());
        mesh.vertices[v] = p;
    }

    // Residual defect after averaging.
    let mut resid = 0.0f64;
    for (g, perm) in elements.iter().zip(&perms) {
        for v in 0..n {
            resid = resid.max((g * mesh.vertices[v] - mesh.vertices[perm[v] as usize]).norm());
        }
    }
    (moved, resid)
}

/// The 4m elements of the symmetry group: m rotations about the y-axis, m
/// reflections across planes containing it, each optionally composed with the
/// reflection across the xz-plane.
fn group_elements(m: u32) -> Vec<Matrix3<f64>> {
    let mut out = Vec::with_capacity(4 * m as usize);
    let mirror = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
    for l in 0..m {
        let ang = 2.0 * std::f64::consts::PI * l as f64 / m as f64;
        let (s, c) = ang.sin_cos();
        let rot = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c);
        let gam = std::f64::consts::PI * l as f64 / m as f64;
        let (s2, c2) = (2.0 * gam).sin_cos();
        let refl = Matrix3::new(c2, 0.0, s2, 0.0, 1.0, 0.0, s2, 0.0, -c2);
        out.push(rot);
        out.push(mirror * rot);
        out.push(refl);
        out.push(mirror * refl);
    }
    out
}

/// Nearest-vertex permutation under a group element, via a spatial hash.
fn match_permutation(mesh: &Mesh, g: &Matrix3<f64>) -> Vec<u32> {
    use std::collections::HashMap;
    let cell = 1e-3;
    let key = |p: &Vector3<f64>| -> (i64, i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64)
    };
    let mut hash: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
    for (i, p) in mesh.vertices.iter().enumerate() {
        hash.entry(key(p)).or_default().push(i as u32);
    }
    let n = mesh.vertices.len();
    let mut perm = vec![0u32; n];
    for v in 0..n {
        let q = g * mesh.vertices[v];
        let (kx, ky, kz) = key(&q);
        let mut best = (f64::INFINITY, v as u32);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = hash.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &w in list {
                            let d = (mesh.vertices[w as usize] - q).norm_squared();
                            if d < best.0 {
                                best = (d, w);
                            }
                        }
                    }
                }
            }
        }
        perm[v] = best.1;
    }
    perm
}
