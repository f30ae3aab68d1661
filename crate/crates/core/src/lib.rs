//! Piecewise-flat curvature and Ricci flow on simplicial 3-manifolds.
//!
//! Edge lengths on a closed triangulated 3-manifold determine deficit angles at every edge.
//! From those and a dual tessellation this crate computes scalar curvature at vertices,
//! sectional and Ricci curvature along edges, integrates the resulting Ricci flow on edge
//! lengths, and generates test triangulations of smooth manifolds with known curvature.
//!
//! The geometric kernels are generic over [`Real`]; the aliases below fix them to `f64`.

pub mod clip;
pub mod complex;
pub mod curvature;
pub mod dual;
mod error;
pub mod flow;
pub mod io;
mod scalar;
pub mod simplex;
pub mod suite;
pub mod vec3;

pub use complex::{QuotientLabeling, SimplicialComplex3};
pub use curvature::{CurvatureOptions, CurvatureReport};
pub use dual::{DualScheme, EdgeVolumeMethod};
pub use error::{Error, Result};
pub use flow::{FlowConfig, FlowTrajectory, Integrator};
pub use io::MeshFile;
pub use scalar::Real;

pub type EdgeLengthMetric = complex::EdgeLengthMetric<f64>;
pub type MeshGeometry = complex::MeshGeometry<f64>;
pub type TetLengths = simplex::TetLengths<f64>;
pub type TriLengths = simplex::TriLengths<f64>;
pub type DualVolumeTable = dual::DualVolumeTable<f64>;
pub type Report = curvature::CurvatureReport<f64>;
pub type Trajectory = flow::FlowTrajectory<f64>;
