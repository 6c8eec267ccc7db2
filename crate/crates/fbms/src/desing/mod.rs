//! Triangle meshes of the desingularizing surfaces and the assembled initial
//! surfaces: bending maps, bent wings, boundary adjustment, annulus fitting,
//! matching angles, boundary orthogonalization and symmetrization.

pub mod assemble;
pub mod maps;
pub mod mesh;
pub mod obj;
pub mod piece;
pub mod wing;

pub use assemble::{assemble_initial_surface, InitialSurface, InitialSurfaceParams};
pub use mesh::{Mesh, Region};
pub use piece::{build_desing_mesh, BuildContext, DesingParams, DesingPieceInfo, Resolution};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DesingError {
    #[error("parameter outside its admissible range: {0}")]
    ParamRange(String),
    #[error("mesh resolution too coarse: {0}")]
    ResolutionError(String),
    #[error("matching angle root left the admissible window on piece {piece} ({side} wing)")]
    MatchFailure { piece: usize, side: char },
    #[error("geometric guard failed: {0}")]
    GuardFailure(String),
    #[error(transparent)]
    Scherk(#[from] crate::scherk::ScherkError),
    #[error(transparent)]
    Config(#[from] crate::configuration::ConfigError),
    #[error(transparent)]
    Root(#[from] crate::numerics::RootError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
