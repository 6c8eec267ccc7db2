//! Catenoidal configurations in the unit ball, desingularizing surface
//! meshes, and numerical certification of their geometric properties.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! configuration  ->  desing (meshing)  ->  verify (reports)
//!       |                 |
//!   catenary           scherk            spectral (certificates)
//! ```
//!
//! `catenary` and `configuration` solve for the piecewise-catenoidal
//! free-boundary configurations; `scherk` charts the singly periodic Scherk
//! surfaces used to desingularize their circles; `desing` assembles triangle
//! meshes of the glued surfaces; `spectral` certifies non-degeneracy of the
//! Jacobi operator on each configuration piece; `verify` measures discrete
//! mean curvature, boundary conditions and distances on the meshes.

pub mod catenary;
pub mod configuration;
pub mod desing;
pub mod numerics;
pub mod scherk;
pub mod spectral;
pub mod verify;
