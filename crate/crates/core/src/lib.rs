//! Zipped finite elements on star-shaped polygons.
//!
//! Every polygonal cell is fanned into triangles around a kernel point. A
//! standard Lagrange space of order `k` lives on that fan; the polygon's
//! shape functions keep the boundary and a few interior nodes as degrees of
//! freedom and slave the remaining ("virtual") nodes to them through a
//! minimum-norm weight matrix chosen so that every polynomial of degree `k`
//! is reproduced exactly.
//!
//! Module map:
//!
//! - [`geometry`]: points, polygons, star centers, fan sub-triangulations, meshes.
//! - [`reference`]: Lagrange basis on the reference triangle and quadrature.
//! - [`basis`]: fine/coarse/virtual nodes, weights, local zipped basis.
//! - [`assembly`]: DOF map, global assembly, Dirichlet lifting, SPD solve, error norms.
//! - [`meshgen`]: mesh families, polygon gallery and the mesh text format.
//! - [`harness`]: polynomial-reproduction and convergence studies with CSV output.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod meshgen;
pub mod reference;

pub use error::{Error, Result};
pub use geometry::{Mesh, Point2, Polygon};

/// Number of polynomials of total degree `<= k` in two variables.
///
/// Negative orders give zero, so `dim_p(k - 3)` is the interior DOF count
/// for every `k`.
pub fn dim_p(k: isize) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 1) * (k + 2) / 2
    }
}
