//! Supersymmetric operator calculus on finite directed graphs.
//!
//! The incidence operator `d: H₀ → H₁` of a directed graph, its adjoint, the
//! graph and edge Laplacians, the Dirac operator `D = [[0, d*], [d, 0]]` and
//! the N=2 supercharges are built as sparse maps with exact Gaussian-integer
//! entries. On top of that sit exact checks of the superalgebra and grading
//! relations, exact kernel dimensions, dense spectral analysis (pairing,
//! polar decomposition, eigenvector transport) and the cycle space.

pub mod cycles;
pub mod error;
pub mod exact;
pub mod exec;
pub mod gauss;
pub mod generate;
pub mod graph;
pub mod linmap;
pub mod operators;
pub mod report;
pub mod spectral;
pub mod susy;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gauss::GaussInt;
pub use graph::{DirectedGraph, Mode};
pub use linmap::{LinearMap, SpaceTag, StateVector};
