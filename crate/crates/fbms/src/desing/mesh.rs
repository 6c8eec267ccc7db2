//! Indexed triangle mesh with per-vertex region labels, boundary flags and
//! symmetry-orbit identifiers.

use std::collections::HashMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Which construction region a vertex belongs to. Desingularizing pieces and
/// annuli are indexed by their circle index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Core(u16),
    WingPlus(u16),
    WingMinus(u16),
    Annulus(u16),
    Disc(u16),
}

impl Region {
    pub fn group_name(&self) -> String {
        match self {
            Region::Core(i) | Region::WingPlus(i) | Region::WingMinus(i) => format!("desing_{i}"),
            Region::Annulus(j) => format!("annulus_{j}"),
            Region::Disc(j) => format!("disc_{j}"),
        }
    }

    pub fn is_desing(&self) -> bool {
        matches!(self, Region::Core(_) | Region::WingPlus(_) | Region::WingMinus(_))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[u32; 3]>,
    pub region: Vec<Region>,
    pub boundary: Vec<bool>,
    /// Orbit identifier under the imposed symmetry group; vertex index of the
    /// orbit representative. Filled by symmetrization, otherwise identity.
    pub orbit: Vec<u32>,
    /// Wing coordinate `s` transported to the mesh (0 on cores, annuli and
    /// discs).
    pub s_field: Vec<f64>,
    /// Homothety ratio of the piece the vertex came from (1 when unscaled);
    /// multiplying a discrete curvature by this value expresses it at the
    /// desingularizing model scale.
    pub scale: Vec<f64>,
}

impl Mesh {
    pub fn new() -> Self {
        Mesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
            region: Vec::new(),
            boundary: Vec::new(),
            orbit: Vec::new(),
            s_field: Vec::new(),
            scale: Vec::new(),
        }
    }

    pub fn push_vertex(&mut self, p: Vector3<f64>, region: Region, boundary: bool, s: f64, scale: f64) -> u32 {
        let id = self.vertices.len() as u32;
        self.vertices.push(p);
        self.region.push(region);
        self.boundary.push(boundary);
        self.orbit.push(id);
        self.s_field.push(s);
        self.scale.push(scale);
        id
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let f = self.triangles.len() as i64;
        let mut edges = std::collections::HashSet::new();
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((e.0.min(e.1), e.0.max(e.1)));
            }
        }
        v - edges.len() as i64 + f
    }

    /// Directed-edge census: every interior edge must appear once in each
    /// direction, boundary edges exactly once overall.
    pub fn edge_census(&self) -> EdgeCensus {
        let mut dir: HashMap<(u32, u32), u32> = HashMap::new();
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *dir.entry(e).or_insert(0) += 1;
            }
        }
        let mut census = EdgeCensus::default();
        let mut seen = std::collections::HashSet::new();
        for (&(a, b), &n) in &dir {
            if n > 1 {
                census.overused += 1;
            }
            if !seen.insert((a.min(b), a.max(b))) {
                continue;
            }
            let back = dir.get(&(b, a)).copied().unwrap_or(0);
            match (n, back) {
                (1, 1) => census.interior += 1,
                (1, 0) | (0, 1) => census.boundary += 1,
                _ => census.inconsistent += 1,
            }
        }
        census
    }

    /// Boundary edges, each as a directed pair.
    fn boundary_edges(&self) -> Vec<(u32, u32)> {
        let mut dir: HashMap<(u32, u32), u32> = HashMap::new();
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *dir.entry(e).or_insert(0) += 1;
            }
        }
        dir.keys()
            .filter(|&&(a, b)| !dir.contains_key(&(b, a)))
            .copied()
            .collect()
    }

    /// Number of closed boundary loops.
    pub fn boundary_component_count(&self) -> usize {
        let edges = self.boundary_edges();
        let mut next: HashMap<u32, u32> = HashMap::new();
        for (a, b) in &edges {
            next.insert(*a, *b);
        }
        let mut visited = std::collections::HashSet::new();
        let mut loops = 0;
        for (a, _) in &edges {
            if visited.contains(a) {
                continue;
            }
            let mut cur = *a;
            loop {
                if !visited.insert(cur) {
                    break;
                }
                match next.get(&cur) {
                    Some(&n) => cur = n,
                    None => break,
                }
                if cur == *a {
                    loops += 1;
                    break;
                }
            }
        }
        loops
    }

    /// Genus from the Euler characteristic, assuming a connected orientable
    /// surface with `b` boundary components.
    pub fn genus(&self) -> i64 {
        let chi = self.euler_characteristic();
        let b = self.boundary_component_count() as i64;
        (2 - b - chi) / 2
    }

    /// Recompute per-vertex boundary flags from the triangle topology.
    pub fn recompute_boundary_flags(&mut self) {
        for f in self.boundary.iter_mut() {
            *f = false;
        }
        for (a, b) in self.boundary_edges() {
            self.boundary[a as usize] = true;
            self.boundary[b as usize] = true;
        }
    }

    /// Longest edge incident to a boundary vertex.
    pub fn max_boundary_edge_length(&self) -> f64 {
        let mut h = 0.0f64;
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if self.boundary[e.0 as usize] || self.boundary[e.1 as usize] {
                    h = h.max((self.vertices[e.0 as usize] - self.vertices[e.1 as usize]).norm());
                }
            }
        }
        h
    }

    /// Vertex adjacency restricted to boundary vertices, following boundary
    /// edges.
    pub fn boundary_neighbors(&self) -> HashMap<u32, Vec<u32>> {
        let mut adj: HashMap<u32, Vec<u32>> = HashMap::new();
        for (a, b) in self.boundary_edges() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }
}

impl Default for Mesh {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCensus {
    pub interior: usize,
    pub boundary: usize,
    pub inconsistent: usize,
    /// Directed edges used by more than one triangle (orientation or
    /// manifoldness violation).
    pub overused: usize,
}

impl EdgeCensus {
    pub fn is_consistent_manifold(&self) -> bool {
        self.inconsistent == 0 && self.overused == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip() -> Mesh {
        // Two triangles forming a square: one boundary loop, chi = 1.
        let mut m = Mesh::new();
        let r = Region::Disc(0);
        let a = m.push_vertex(Vector3::new(0.0, 0.0, 0.0), r, true, 0.0, 1.0);
        let b = m.push_vertex(Vector3::new(1.0, 0.0, 0.0), r, true, 0.0, 1.0);
        let c = m.push_vertex(Vector3::new(1.0, 1.0, 0.0), r, true, 0.0, 1.0);
        let d = m.push_vertex(Vector3::new(0.0, 1.0, 0.0), r, true, 0.0, 1.0);
        m.triangles.push([a, b, c]);
        m.triangles.push([a, c, d]);
        m
    }

    #[test]
    fn square_topology() {
        let m = strip();
        assert_eq!(m.euler_characteristic(), 1);
        assert_eq!(m.boundary_component_count(), 1);
        assert_eq!(m.genus(), 0);
        let census = m.edge_census();
        assert!(census.is_consistent_manifold());
        assert_eq!(census.interior, 1);
        assert_eq!(census.boundary, 4);
    }

    #[test]
    fn flipped_triangle_detected() {
        let mut m = strip();
        let t = m.triangles[1];
        m.triangles[1] = [t[0], t[2], t[1]];
        assert!(!m.edge_census().is_consistent_manifold());
    }
}
