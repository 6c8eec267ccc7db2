//! Wavefront OBJ export with region groups and a sidecar JSON carrying the
//! per-vertex flags the format cannot hold.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::mesh::Mesh;
use super::DesingError;

#[derive(Serialize)]
struct Sidecar<'a> {
    boundary: &'a [bool],
    orbit: &'a [u32],
    s_field: &'a [f64],
    region: Vec<String>,
}

/// Write the mesh as OBJ (17 significant digits) plus `<path>.json` with the
/// boundary flags, orbit ids and wing coordinates.
pub fn export_obj(mesh: &Mesh, path: &Path) -> Result<(), DesingError> {
    if mesh.vertices.is_empty() || mesh.triangles.is_empty() {
        return Err(DesingError::GuardFailure("refusing to export an empty mesh".into()));
    }
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "# {} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len())?;
    for v in &mesh.vertices {
        writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
    }
    // Faces grouped by the region of their first vertex.
    let mut by_group: std::collections::BTreeMap<String, Vec<&[u32; 3]>> =
        std::collections::BTreeMap::new();
    for t in &mesh.triangles {
        by_group
            .entry(mesh.region[t[0] as usize].group_name())
            .or_default()
            .push(t);
    }
    for (name, tris) in &by_group {
        writeln!(out, "g {name}")?;
        for t in tris {
            writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
        }
    }
    out.flush()?;

    let sidecar = Sidecar {
        boundary: &mesh.boundary,
        orbit: &mesh.orbit,
        s_field: &mesh.s_field,
        region: mesh.region.iter().map(|r| r.group_name()).collect(),
    };
    let json = serde_json::to_string(&sidecar).expect("serializable sidecar");
    std::fs::write(path.with_extension("obj.json"), json)?;
    Ok(())
}

/// Read vertex positions back from an OBJ file (for round-trip checks).
pub fn import_obj_vertices(path: &Path) -> Result<Vec<nalgebra::Vector3<f64>>, DesingError> {
    let text = std::fs::read_to_string(path)?;
    let mut verts = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("v ") {
            let mut it = rest.split_whitespace().map(|t| t.parse::<f64>().unwrap());
            verts.push(nalgebra::Vector3::new(
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ));
        }
    }
    Ok(verts)
}

#[cfg(test)]
mod tests {
    use super::super::mesh::Region;
    use super::*;
    use nalgebra::Vector3;

    #[test]
    fn round_trip_and_groups() {
        let mut m = Mesh::new();
        let a = m.push_vertex(Vector3::new(0.1234567890123456, 0.0, 1.0), Region::Disc(0), true, 0.0, 1.0);
        let b = m.push_vertex(Vector3::new(1.0, 2.0f64.sqrt(), 0.0), Region::Disc(0), true, 0.0, 1.0);
        let c = m.push_vertex(Vector3::new(0.0, 1.0, 3.0), Region::Annulus(1), false, 0.5, 1.0);
        m.triangles.push([a, b, c]);
        let dir = std::env::temp_dir().join("fbms_obj_test.obj");
        export_obj(&m, &dir).unwrap();
        let back = import_obj_vertices(&dir).unwrap();
        for (v, w) in m.vertices.iter().zip(&back) {
            assert_eq!(v, w, "17 significant digits round-trip bit-exactly");
        }
        let text = std::fs::read_to_string(&dir).unwrap();
        assert!(text.contains("g annulus_1"));
        assert!(std::fs::metadata(dir.with_extension("obj.json")).unwrap().len() > 0);
    }

    #[test]
    fn empty_mesh_rejected() {
        let m = Mesh::new();
        let dir = std::env::temp_dir().join("fbms_obj_empty.obj");
        assert!(export_obj(&m, &dir).is_err());
    }
}
