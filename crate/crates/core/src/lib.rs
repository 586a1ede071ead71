//! Exact tools for orthogonal polyhedra: surface meshes, angle analysis,
//! orthogonality testing, reconstruction from labeled graphs and a gallery of
//! reference solids.

pub mod angles;
pub mod cli;
pub mod gallery;
pub mod geom;
pub mod mesh;
pub mod orthotest;
pub mod reconstruct;
