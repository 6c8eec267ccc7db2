//! Structured meshing of one desingularizing surface.
//!
//! The half Scherk surface (cut at the yz-plane) is meshed per period as a
//! graph `x = -sin(theta) arcosh(u(y, z))` over the `(y, z)` strip between the
//! two wing interfaces, minus the boundary hole, using a ray grid around the
//! hole; the two wings are structured `(s, z)` grids. One period template is
//! replicated around the bend axis and glued along the periodic seams.

use nalgebra::Vector3;

use super::maps::{bend, rotate_about_bend_axis, Deform, ZyDiffeo};
use super::mesh::{Mesh, Region};
use super::wing::{half_turn_z, reflect_yz, rot_z, WingMap};
use super::DesingError;
use crate::catenary::arcosh;
use crate::scherk::{self, ScherkAngle};

/// Parameter tuple of one desingularizing surface.
#[derive(Debug, Clone, Copy)]
pub struct DesingParams {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub beta: f64,
    pub phi_minus: f64,
    pub phi_plus: f64,
    /// Number of periods; the bending parameter is `tau = 1/m`.
    pub m: u32,
}

impl DesingParams {
    pub fn tau(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Domain constraints on the parameter tuple.
    pub fn validate(&self, delta_theta: f64) -> Result<(), DesingError> {
        let d = delta_theta;
        let fp2 = std::f64::consts::FRAC_PI_2;
        if self.m < 3 {
            return Err(DesingError::ParamRange(format!("m = {} below 3", self.m)));
        }
        if self.alpha_plus < 30.0 * d || self.alpha_plus > fp2 - 30.0 * d {
            return Err(DesingError::ParamRange(format!(
                "alpha_plus = {} outside [30 delta, pi/2 - 30 delta], delta = {d}",
                self.alpha_plus
            )));
        }
        if (self.alpha_plus - self.alpha_minus).abs() > 2.0 * d {
            return Err(DesingError::ParamRange(format!(
                "alpha_plus - alpha_minus = {} exceeds 2 delta_theta = {}",
                self.alpha_plus - self.alpha_minus,
                2.0 * d
            )));
        }
        if self.beta < d || self.beta > std::f64::consts::PI - d {
            return Err(DesingError::ParamRange(format!("beta = {} too close to a pole", self.beta)));
        }
        // The matching angles scale like curvature * chart offset * tau and
        // outgrow the asymptotic delta-sized window at moderate period
        // counts; half the contact-angle margin (15 delta) keeps the rotated
        // wings well clear of the boundary slab and of each other.
        if self.phi_minus.abs().max(self.phi_plus.abs()) > 15.0 * d {
            return Err(DesingError::ParamRange(format!(
                "|phi| = {} exceeds 15 delta_theta = {}",
                self.phi_minus.abs().max(self.phi_plus.abs()),
                15.0 * d
            )));
        }
        Ok(())
    }
}

/// Mesh density knobs.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Resolution {
    pub z_per_period: usize,
    pub s_samples: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { z_per_period: 16, s_samples: 12 }
    }
}

/// Boundary collar ray of the built mesh: vertex ids from the boundary
/// inward, their intrinsic distances to the boundary, and continuum normals.
#[derive(Debug, Clone)]
pub struct CollarRay {
    pub verts: Vec<u32>,
    pub rho: Vec<f64>,
    pub normals: Vec<Vector3<f64>>,
}

/// Everything the assembler needs to know about a built piece.
#[derive(Debug)]
pub struct DesingPieceInfo {
    /// Ring of vertices at `s = 5 delta_s / tau` on the plus wing, ordered by
    /// bend angle.
    pub plus_rim: Vec<u32>,
    pub minus_rim: Vec<u32>,
    pub collar_rays: Vec<CollarRay>,
    pub wing_plus: WingMap,
    pub wing_minus: WingMap,
    pub vertex_range: (u32, u32),
}

/// Geometry configuration shared by standalone and assembled builds.
#[derive(Debug, Clone, Copy)]
pub struct BuildContext {
    pub chart_a: f64,
    pub delta_s: f64,
    pub delta_theta: f64,
    /// Collar depth (in final coordinates) that must be resolved by graded
    /// rings near the boundary.
    pub collar: f64,
    /// Homothety `p -> scale p + shift` applied to every vertex.
    pub scale: f64,
    pub shift: Vector3<f64>,
    pub piece: u16,
    pub resolution: Resolution,
}

struct TemplateVert {
    pos: Vector3<f64>,
    region: Region,
    boundary: bool,
    s: f64,
    /// For vertices on the z = 2 pi seam: the matching z = 0 vertex.
    seam_src: Option<usize>,
}

struct Template {
    verts: Vec<TemplateVert>,
    tris: Vec<[usize; 3]>,
    plus_rim_cols: Vec<usize>,
    minus_rim_cols: Vec<usize>,
    /// Ray vertices (template ids), boundary outward, plus domain points for
    /// normal evaluation.
    rays: Vec<Vec<usize>>,
    ray_domains: Vec<Vec<(f64, f64)>>,
}

/// Graded ring offsets: a fixed number of rings resolving the collar, then
/// geometric growth out to `total`.
fn graded_offsets(total: f64, collar: f64, tail: usize) -> Vec<f64> {
    let c = collar.min(total / 3.0);
    let mut o = vec![0.0, c / 4.0, c / 2.0, 3.0 * c / 4.0, c];
    // Geometric fractions of the remaining span.
    let rem = total - c;
    let r = 1.8f64;
    let denom = r.powi(tail as i32) - 1.0;
    for t in 1..=tail {
        o.push(c + rem * (r.powi(t as i32) - 1.0) / denom);
    }
    o
}

pub(crate) fn core_graph_x(theta: f64, y: f64, z: f64) -> Option<f64> {
    let u = (z.cos() + theta.cos().powi(2) * (y / theta.cos()).cosh()) / theta.sin().powi(2);
    if u < 1.0 - 1e-12 {
        None
    } else {
        Some(-theta.sin() * arcosh(u))
    }
}

/// Build one desingularizing surface into `mesh`.
pub fn build_desing_into(
    mesh: &mut Mesh,
    params: &DesingParams,
    ctx: &BuildContext,
) -> Result<DesingPieceInfo, DesingError> {
    params.validate(ctx.delta_theta)?;
    let res = ctx.resolution;
    if res.z_per_period < 8 {
        return Err(DesingError::ResolutionError(format!(
            "z_per_period = {} below 8",
            res.z_per_period
        )));
    }
    let theta = ScherkAngle::new(params.alpha_plus, ctx.delta_theta)
        .map_err(DesingError::Scherk)?;
    let tau = params.tau();
    let m = params.m as usize;
    let nz = res.z_per_period;
    let ns = res.s_samples.max(6);
    let s_b = 5.0 * ctx.delta_s / tau;
    let da = params.alpha_plus - params.alpha_minus;

    let frame_plus = rot_z(std::f64::consts::FRAC_PI_2 - params.beta) * half_turn_z();
    let frame_minus =
        rot_z(std::f64::consts::FRAC_PI_2 - params.beta) * rot_z(-da) * reflect_yz();
    let wing_plus = WingMap::new(theta, params.phi_plus, frame_plus, tau, ctx.chart_a);
    let wing_minus = WingMap::new(theta, -params.phi_minus, frame_minus, tau, ctx.chart_a);

    let zy = ZyDiffeo::new(da, ctx.delta_theta);
    let deform = Deform::new(params.beta, tau, ctx.delta_theta);
    let rot = rot_z(std::f64::consts::FRAC_PI_2 - params.beta);
    let core_map = |p: Vector3<f64>| -> Vector3<f64> { bend(tau, rot * deform.apply(zy.apply(p))) };
    let final_of = |p: Vector3<f64>| -> Vector3<f64> { ctx.scale * p + ctx.shift };
    let core_point = |y: f64, z: f64| -> Option<Vector3<f64>> {
        core_graph_x(theta.theta, y, z).map(|x| final_of(core_map(Vector3::new(x, y, z))))
    };

    // Wing chart table f_theta(s_i, z_j).
    let zs: Vec<f64> = (0..=nz).map(|j| 2.0 * std::f64::consts::PI * j as f64 / nz as f64).collect();
    let ss: Vec<f64> = (0..=ns).map(|i| s_b * i as f64 / ns as f64).collect();
    let mut f_table = vec![vec![0.0f64; nz + 1]; ns + 1];
    for (i, &s) in ss.iter().enumerate() {
        for (j, &z) in zs.iter().enumerate().take(nz) {
            f_table[i][j] = scherk::wing_graph(theta, ctx.chart_a, s, z)?;
        }
        f_table[i][nz] = f_table[i][0];
    }

    let mut t = Template {
        verts: Vec::new(),
        tris: Vec::new(),
        plus_rim_cols: Vec::new(),
        minus_rim_cols: Vec::new(),
        rays: Vec::new(),
        ray_domains: Vec::new(),
    };

    let push =
        |t: &mut Template, pos: Vector3<f64>, region: Region, boundary: bool, s: f64| -> usize {
            t.verts.push(TemplateVert { pos, region, boundary, s, seam_src: None });
            t.verts.len() - 1
        };

    // Wing grids. Row i = 0 doubles as the core interface.
    let wing_grid = |t: &mut Template, w: &WingMap, region: Region| -> Vec<Vec<usize>> {
        let mut grid = vec![vec![0usize; nz + 1]; ns + 1];
        for i in 0..=ns {
            for j in 0..=nz {
                let p = final_of(w.map_f(ss[i], zs[j], ctx.delta_s, f_table[i][j]));
                grid[i][j] = push(t, p, region, false, ss[i]);
            }
        }
        for i in 0..=ns {
            t.verts[grid[i][nz]].seam_src = Some(grid[i][0]);
        }
        grid
    };
    let gp = wing_grid(&mut t, &wing_plus, Region::WingPlus(ctx.piece));
    let gm = wing_grid(&mut t, &wing_minus, Region::WingMinus(ctx.piece));
    t.plus_rim_cols = (0..nz).map(|j| gp[ns][j]).collect();
    t.minus_rim_cols = (0..nz).map(|j| gm[ns][j]).collect();

    // Quads of the wing grids.
    let emit_grid = |t: &mut Template, g: &Vec<Vec<usize>>| {
        for i in 0..ns {
            for j in 0..nz {
                let (a, b, c, d) = (g[i][j], g[i + 1][j], g[i + 1][j + 1], g[i][j + 1]);
                t.tris.push([a, b, c]);
                t.tris.push([a, c, d]);
            }
        }
    };
    emit_grid(&mut t, &gp);
    emit_grid(&mut t, &gm);

    // Domain interface curves: the wings in Scherk coordinates.
    let iface = |refl: &nalgebra::Matrix3<f64>, j: usize| -> (f64, f64) {
        let dir = std::f64::consts::FRAC_PI_2 - theta.theta;
        let chart = ctx.chart_a * Vector3::from(scherk::e_vec(dir))
            + (theta.b_theta() + f_table[0][j]) * Vector3::from(scherk::e_perp(dir))
            + zs[j] * Vector3::z();
        let p = refl * chart;
        (p.y, p.z)
    };
    let r2 = reflect_yz();
    let r3 = half_turn_z();

    // Outer loop of the cut-open core domain: minus-wing interface (y < 0),
    // cut at z = 2 pi, plus... the minus wing sits at y > 0 (it points toward
    // the previous circle) and the plus wing at y < 0.
    #[derive(Clone, Copy)]
    enum Tag {
        WingMinusIface(usize),
        WingPlusIface(usize),
        Cut { hi: bool, idx: usize },
    }
    let y_m0 = iface(&r2, 0).0;
    let y_p0 = iface(&r3, 0).0;
    let n_cut = ((y_m0 - y_p0).abs() / (2.0 * std::f64::consts::PI) * nz as f64).ceil() as usize;
    let n_cut = n_cut.clamp(2, nz);
    let mut loop_entries: Vec<((f64, f64), Tag)> = Vec::new();
    for j in 0..=nz {
        loop_entries.push((iface(&r2, j), Tag::WingMinusIface(j)));
    }
    for i in 1..=n_cut {
        let f = i as f64 / (n_cut + 1) as f64;
        let ym = iface(&r2, nz).0;
        let yp = iface(&r3, nz).0;
        loop_entries.push(((ym + f * (yp - ym), 2.0 * std::f64::consts::PI), Tag::Cut { hi: true, idx: i }));
    }
    for j in (0..=nz).rev() {
        loop_entries.push((iface(&r3, j), Tag::WingPlusIface(j)));
    }
    for i in 1..=n_cut {
        let f = i as f64 / (n_cut + 1) as f64;
        let yp = iface(&r3, 0).0;
        let ym = iface(&r2, 0).0;
        loop_entries.push(((yp + f * (ym - yp), 0.0), Tag::Cut { hi: false, idx: i }));
    }
    let mray = loop_entries.len();

    // Hole boundary intersection along each ray from the hole center.
    let center = (0.0f64, std::f64::consts::PI);
    let u_of = |y: f64, z: f64| -> f64 {
        (z.cos() + theta.theta.cos().powi(2) * (y / theta.theta.cos()).cosh())
            / theta.theta.sin().powi(2)
    };
    let hole_hit = |o: (f64, f64)| -> (f64, f64) {
        let g = |t: f64| u_of(center.0 + t * (o.0 - center.0), center.1 + t * (o.1 - center.1)) - 1.0;
        let t = crate::numerics::solve_bracketed(g, 1e-12, 1.0, 1e-14).expect("ray exits the hole");
        (center.0 + t * (o.0 - center.0), center.1 + t * (o.1 - center.1))
    };

    // Arc-length table along each ray, to place rings at physical offsets.
    let probe = 64usize;
    let mut ray_tables: Vec<(Vec<f64>, (f64, f64), (f64, f64))> = Vec::with_capacity(mray);
    let mut min_len = f64::INFINITY;
    for (o, _) in &loop_entries {
        let i = hole_hit(*o);
        let mut cum = Vec::with_capacity(probe + 1);
        cum.push(0.0);
        let mut prev = final_of(core_map(Vector3::new(0.0, i.0, i.1)));
        for l in 1..=probe {
            let f = l as f64 / probe as f64;
            let q = (i.0 + f * (o.0 - i.0), i.1 + f * (o.1 - i.1));
            let p = core_point(q.0, q.1).unwrap_or(prev);
            cum.push(cum.last().unwrap() + (p - prev).norm());
            prev = p;
        }
        min_len = min_len.min(*cum.last().unwrap());
        ray_tables.push((cum, i, *o));
    }
    if !(ctx.collar < 0.3 * min_len) {
        return Err(DesingError::GuardFailure(format!(
            "boundary collar {} does not fit inside the core (min ray length {min_len})",
            ctx.collar
        )));
    }
    // Ring count chosen from the median ray length.
    let mut lens: Vec<f64> = ray_tables.iter().map(|(c, _, _)| *c.last().unwrap()).collect();
    lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let med = lens[lens.len() / 2];
    let tail = (((med - ctx.collar) / (0.25 * med)).ceil() as usize).clamp(4, 16);
    let nrings = 5 + tail; // offsets vector length from graded_offsets

    // Core vertices ray by ray.
    let mut core_ids = vec![vec![0usize; nrings]; mray];
    for (ridx, ((_, tag), (cum, ihit, o))) in
        loop_entries.iter().zip(ray_tables.iter()).enumerate()
    {
        let total = *cum.last().unwrap();
        let offsets = graded_offsets(total, ctx.collar, tail);
        debug_assert_eq!(offsets.len(), nrings);
        let mut domains = Vec::with_capacity(nrings);
        for (k, &off) in offsets.iter().enumerate() {
            // Invert the arc-length table.
            let f = if k == 0 {
                0.0
            } else if k + 1 == nrings {
                1.0
            } else {
                let l = cum.partition_point(|&c| c < off).clamp(1, probe);
                let (c0, c1) = (cum[l - 1], cum[l]);
                ((l - 1) as f64 + (off - c0) / (c1 - c0).max(1e-300)) / probe as f64
            };
            let q = (ihit.0 + f * (o.0 - ihit.0), ihit.1 + f * (o.1 - ihit.1));
            domains.push(q);
            if k + 1 == nrings {
                // Outer ring: reuse the wing interface vertices where tagged.
                let id = match tag {
                    Tag::WingMinusIface(j) => gm[0][*j],
                    Tag::WingPlusIface(j) => gp[0][*j],
                    Tag::Cut { .. } => {
                        let p = core_point(q.0, q.1).expect("outer point on surface");
                        push(&mut t, p, Region::Core(ctx.piece), false, 0.0)
                    }
                };
                core_ids[ridx][k] = id;
            } else if k == 0 {
                // The boundary circle lies at x = 0 exactly; constructing it
                // there keeps the sphere residual at roundoff level.
                let p = final_of(core_map(Vector3::new(0.0, q.0, q.1)));
                core_ids[ridx][k] = push(&mut t, p, Region::Core(ctx.piece), true, 0.0);
            } else {
                let p = core_point(q.0, q.1).expect("ring point on surface");
                core_ids[ridx][k] = push(&mut t, p, Region::Core(ctx.piece), false, 0.0);
            }
        }
        t.rays.push(core_ids[ridx][..6.min(nrings)].to_vec());
        t.ray_domains.push(domains[..6.min(nrings)].to_vec());
    }
    // Seam markers for the outer cut samples; interior ring vertices of the
    // cut rays sit strictly inside their own copy and are not shared.
    for (ridx, (_, tag)) in loop_entries.iter().enumerate() {
        if let Tag::Cut { hi: true, idx } = tag {
            // The z = 2 pi cut runs in the opposite y-direction from the
            // z = 0 cut, so sample i pairs with sample n_cut + 1 - i.
            let want = n_cut + 1 - idx;
            let src = loop_entries
                .iter()
                .position(|(_, t2)| matches!(t2, Tag::Cut { hi: false, idx: i2 } if *i2 == want))
                .expect("matching cut sample");
            let v_hi = core_ids[ridx][nrings - 1];
            let v_lo = core_ids[src][nrings - 1];
            t.verts[v_hi].seam_src = Some(v_lo);
        }
    }

    // Core band triangles.
    for r in 0..mray {
        let rn = (r + 1) % mray;
        for k in 0..nrings - 1 {
            let (a, b, c, d) =
                (core_ids[r][k], core_ids[rn][k], core_ids[rn][k + 1], core_ids[r][k + 1]);
            t.tris.push([a, b, c]);
            t.tris.push([a, c, d]);
        }
    }

    // Replicate the template around the bend axis and glue the seams.
    let nverts = t.verts.len();
    let mut compact = vec![usize::MAX; nverts];
    let mut n_compact = 0usize;
    for (i, v) in t.verts.iter().enumerate() {
        if v.seam_src.is_none() {
            compact[i] = n_compact;
            n_compact += 1;
        }
    }
    let base = mesh.vertices.len() as u32;
    let global_id = |copy: usize, local: usize, t: &Template, compact: &[usize]| -> u32 {
        match t.verts[local].seam_src {
            None => base + (copy * n_compact + compact[local]) as u32,
            Some(src) => {
                let c2 = (copy + 1) % m;
                base + (c2 * n_compact + compact[src]) as u32
            }
        }
    };
    for copy in 0..m {
        let angle = 2.0 * std::f64::consts::PI * tau * copy as f64;
        for (i, v) in t.verts.iter().enumerate() {
            if v.seam_src.is_some() {
                continue;
            }
            debug_assert_eq!(mesh.vertices.len() as u32, global_id(copy, i, &t, &compact));
            // Rotation acts before the homothety: p_final = scale * rot(p_pre) + shift,
            // and rot commutes with the final map through the bend axis image.
            let pre = (v.pos - ctx.shift) / ctx.scale;
            let p = ctx.scale * rotate_about_bend_axis(tau, angle, pre) + ctx.shift;
            mesh.push_vertex(p, v.region, v.boundary, v.s, ctx.scale);
        }
        for tri in &t.tris {
            mesh.triangles.push([
                global_id(copy, tri[0], &t, &compact),
                global_id(copy, tri[1], &t, &compact),
                global_id(copy, tri[2], &t, &compact),
            ]);
        }
    }

    // Rims ordered by bend angle: copy by copy, column by column.
    let mut plus_rim = Vec::with_capacity(m * nz);
    let mut minus_rim = Vec::with_capacity(m * nz);
    for copy in 0..m {
        for &col in &t.plus_rim_cols {
            plus_rim.push(global_id(copy, col, &t, &compact));
        }
        for &col in &t.minus_rim_cols {
            minus_rim.push(global_id(copy, col, &t, &compact));
        }
    }

    // Collar rays with continuum normals: surface tangents of the implicit
    // Scherk surface pushed through the ambient composition by central
    // differences. The graph chart is singular at the boundary (the surface
    // meets the yz-plane orthogonally), so the differentials are taken in
    // ambient space instead.
    let full_map = |p: Vector3<f64>| -> Vector3<f64> { final_of(core_map(p)) };
    let fd_normal = |y: f64, z: f64| -> Vector3<f64> {
        let th = theta.theta;
        let x = core_graph_x(th, y, z).expect("collar point on surface");
        let p = Vector3::new(x, y, z);
        let grad = Vector3::new(
            th.sin() * (x / th.sin()).sinh(),
            -th.cos() * (y / th.cos()).sinh(),
            z.sin(),
        );
        let mut t1 = grad.cross(&Vector3::z());
        if t1.norm() < 1e-12 {
            t1 = grad.cross(&Vector3::y());
        }
        let t1 = t1.normalize();
        let t2 = grad.cross(&t1).normalize();
        let h = 1e-5;
        let d1 = (full_map(p + h * t1) - full_map(p - h * t1)) / (2.0 * h);
        let d2 = (full_map(p + h * t2) - full_map(p - h * t2)) / (2.0 * h);
        d1.cross(&d2).normalize()
    };
    let mut collar_rays = Vec::with_capacity(m * mray);
    for copy in 0..m {
        let angle = 2.0 * std::f64::consts::PI * tau * copy as f64;
        let rot_n = |n: Vector3<f64>| {
            let (s, c) = angle.sin_cos();
            Vector3::new(n.x * c - n.z * s, n.y, n.x * s + n.z * c)
        };
        for (ray, domains) in t.rays.iter().zip(t.ray_domains.iter()) {
            let verts: Vec<u32> = ray.iter().map(|&l| global_id(copy, l, &t, &compact)).collect();
            let mut rho = Vec::with_capacity(verts.len());
            let mut acc = 0.0;
            rho.push(0.0);
            for w in verts.windows(2) {
                acc += (mesh.vertices[w[1] as usize] - mesh.vertices[w[0] as usize]).norm();
                rho.push(acc);
            }
            let normals: Vec<Vector3<f64>> =
                domains.iter().map(|&(y, z)| rot_n(fd_normal(y, z))).collect();
            collar_rays.push(CollarRay { verts, rho, normals });
        }
    }

    Ok(DesingPieceInfo {
        plus_rim,
        minus_rim,
        collar_rays,
        wing_plus,
        wing_minus,
        vertex_range: (base, mesh.vertices.len() as u32),
    })
}

/// Orient all triangles consistently by breadth-first propagation across
/// shared edges, then flip globally so that the reference normal direction
/// `want_outward` has positive flux through the mesh.
pub fn orient_consistently(mesh: &mut Mesh, want_outward: impl Fn(&Mesh) -> f64) {
    use std::collections::{HashMap, VecDeque};
    let nt = mesh.triangles.len();
    let mut edge_to_tris: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, t) in mesh.triangles.iter().enumerate() {
        for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            edge_to_tris.entry((e.0.min(e.1), e.0.max(e.1))).or_default().push(i);
        }
    }
    let mut seen = vec![false; nt];
    for start in 0..nt {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let ti = mesh.triangles[i];
            for e in [(ti[0], ti[1]), (ti[1], ti[2]), (ti[2], ti[0])] {
                let key = (e.0.min(e.1), e.0.max(e.1));
                for &j in &edge_to_tris[&key] {
                    if j == i || seen[j] {
                        continue;
                    }
                    let tj = mesh.triangles[j];
                    // j must traverse the shared edge in the opposite order.
                    let same_dir = [(tj[0], tj[1]), (tj[1], tj[2]), (tj[2], tj[0])]
                        .iter()
                        .any(|&d| d == e);
                    if same_dir {
                        mesh.triangles[j] = [tj[0], tj[2], tj[1]];
                    }
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    if want_outward(mesh) < 0.0 {
        for t in &mut mesh.triangles {
            *t = [t[0], t[2], t[1]];
        }
    }
}

/// Signed flux of the position field through the mesh restricted to a region
/// filter; positive when triangle normals point away from the origin there.
pub fn radial_flux(mesh: &Mesh, filter: impl Fn(Region) -> bool) -> f64 {
    let mut flux = 0.0;
    for t in &mesh.triangles {
        let r = mesh.region[t[0] as usize];
        if !filter(r) {
            continue;
        }
        let (a, b, c) = (
            mesh.vertices[t[0] as usize],
            mesh.vertices[t[1] as usize],
            mesh.vertices[t[2] as usize],
        );
        let n = (b - a).cross(&(c - a));
        flux += n.dot(&((a + b + c) / 3.0));
    }
    flux
}

/// Standalone mesh of one desingularizing surface (no homothety, boundary on
/// the model sphere of the bending construction).
pub fn build_desing_mesh(
    params: &DesingParams,
    resolution: Resolution,
    chart_a: f64,
    delta_s: f64,
    delta_theta: f64,
) -> Result<(Mesh, DesingPieceInfo), DesingError> {
    let mut mesh = Mesh::new();
    let collar = 0.05 * delta_s / params.tau(); // mild default grading
    let ctx = BuildContext {
        chart_a,
        delta_s,
        delta_theta,
        collar,
        scale: 1.0,
        shift: Vector3::zeros(),
        piece: 0,
        resolution,
    };
    let info = build_desing_into(&mut mesh, params, &ctx)?;
    // Orient with the plus-wing outward reference: positive flux of the
    // wing-map normal against triangle normals on the plus wing.
    let wp = info.wing_plus.clone();
    let tau = params.tau();
    orient_consistently(&mut mesh, move |m| {
        let mut acc = 0.0;
        for t in &m.triangles {
            if !matches!(m.region[t[0] as usize], Region::WingPlus(_)) {
                continue;
            }
            let (a, b, c) = (
                m.vertices[t[0] as usize],
                m.vertices[t[1] as usize],
                m.vertices[t[2] as usize],
            );
            let n = (b - a).cross(&(c - a));
            // Approximate wing normal at the centroid via the bend-angle of
            // the centroid.
            let g = (a + b + c) / 3.0;
            let z = g.z.atan2(g.x + 1.0 / tau) / tau;
            let sref = m.s_field[t[0] as usize];
            acc += n.dot(&wp.normal(sref, z));
        }
        acc
    });
    Ok((mesh, info))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_params() -> DesingParams {
        DesingParams {
            alpha_minus: 0.74,
            alpha_plus: 0.74,
            beta: std::f64::consts::FRAC_PI_2,
            phi_minus: 0.0,
            phi_plus: 0.0,
            m: 12,
        }
    }

    #[test]
    fn template_mesh_is_manifold() {
        let p = sample_params();
        let (mesh, info) = build_desing_mesh(
            &p,
            Resolution { z_per_period: 10, s_samples: 8 },
            4.0,
            0.05,
            0.02,
        )
        .unwrap();
        let census = mesh.edge_census();
        assert!(census.is_consistent_manifold(), "{census:?}");
        // One boundary circle per period plus the two wing rims.
        assert_eq!(mesh.boundary_component_count(), 12 + 2);
        assert_eq!(info.plus_rim.len(), 12 * 10);
        // Genus zero piece: chi = 2 - 2g - b with g = 0, b = m + 2.
        assert_eq!(mesh.euler_characteristic(), 2 - 14);
    }

    #[test]
    fn boundary_on_model_sphere() {
        let p = sample_params();
        let (mesh, _) = build_desing_mesh(
            &p,
            Resolution { z_per_period: 10, s_samples: 8 },
            4.0,
            0.05,
            0.02,
        )
        .unwrap();
        let tau = p.tau();
        for (i, v) in mesh.vertices.iter().enumerate() {
            if mesh.boundary[i] {
                let r = super::super::maps::sphere_membership(tau, p.beta, *v);
                assert!(r.abs() < 1e-8, "sphere residual {r}");
            }
        }
    }

    #[test]
    fn rims_are_circles_on_wing_catenoid() {
        let p = sample_params();
        let (mesh, info) = build_desing_mesh(
            &p,
            Resolution { z_per_period: 10, s_samples: 8 },
            4.0,
            0.05,
            0.02,
        )
        .unwrap();
        let cat = info.wing_plus.catenoid().unwrap();
        let tau = p.tau();
        for &v in &info.plus_rim {
            let q = mesh.vertices[v as usize];
            let rho = ((q.x + 1.0 / tau).powi(2) + q.z * q.z).sqrt();
            let expect = cat.a * ((q.y - cat.b) / cat.a).cosh();
            assert!((rho - expect).abs() < 1e-9, "{rho} vs {expect}");
        }
    }

    #[test]
    fn periods_related_by_rotation() {
        let p = sample_params();
        let (mesh, info) = build_desing_mesh(
            &p,
            Resolution { z_per_period: 8, s_samples: 6 },
            4.0,
            0.05,
            0.02,
        )
        .unwrap();
        let (lo, hi) = info.vertex_range;
        let per_copy = (hi - lo) as usize / p.m as usize;
        let tau = p.tau();
        let step = 2.0 * std::f64::consts::PI * tau;
        for i in 0..per_copy {
            let a = mesh.vertices[lo as usize + i];
            let b = mesh.vertices[lo as usize + per_copy + i];
            let expect = rotate_about_bend_axis(tau, step, a);
            assert!((b - expect).norm() < 1e-10);
        }
    }
}
