//! Global discretization: DOF numbering, assembly, boundary conditions,
//! the linear solve and error norms.

mod coefficients;
mod dofmap;
mod solution;
mod solver;
mod system;

pub use coefficients::{Coefficients, ExactSolution, PolynomialProblem, Tensor, VariableDiffusion};
pub use dofmap::{build_dof_map, DofMap};
pub use solution::{compute_errors, DiscreteSolution};
pub use solver::{mat_vec, pcg, solve_spd, SolveOutcome, SolverMethod, RESIDUAL_TARGET};
pub use system::{apply_dirichlet, assemble, build_bases, element_system, ReducedSystem, SymmetricSystem};
