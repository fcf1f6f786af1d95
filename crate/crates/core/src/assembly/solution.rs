use super::{DofMap, ExactSolution};
use crate::basis::LocalBasis;
use crate::geometry::{Mesh, Point2};
use crate::reference::quadrature_rule;
use crate::Result;
use rayon::prelude::*;

/// Global coefficient vector together with what is needed to evaluate it.
#[derive(Clone, Debug)]
pub struct DiscreteSolution<'a> {
    pub mesh: &'a Mesh,
    pub bases: &'a [LocalBasis],
    pub dofs: &'a DofMap,
    pub values: Vec<f64>,
}

impl<'a> DiscreteSolution<'a> {
    pub fn new(mesh: &'a Mesh, bases: &'a [LocalBasis], dofs: &'a DofMap, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), dofs.len());
        Self { mesh, bases, dofs, values }
    }

    pub fn local_coefficients(&self, cell: usize) -> Vec<f64> {
        self.dofs.cell_dofs(cell).iter().map(|&i| self.values[i]).collect()
    }

    /// Value and gradient of `u_h` restricted to `cell` at `x`.
    pub fn eval_in_cell(&self, cell: usize, x: Point2) -> Result<(f64, Point2)> {
        let (phi, dphi) = self.bases[cell].eval(x)?;
        let c = self.local_coefficients(cell);
        let v = phi.iter().zip(&c).map(|(p, c)| p * c).sum();
        let g = dphi.iter().zip(&c).fold(Point2::default(), |acc, (d, c)| acc + *d * *c);
        Ok((v, g))
    }
}

/// `(||u - u_h||_L2, ||grad u - grad u_h||_L2)` by quadrature of the given
/// degree on every fan triangle.
pub fn compute_errors(sol: &DiscreteSolution, exact: &impl ExactSolution, quad_degree: usize) -> Result<(f64, f64)> {
    let rule = quadrature_rule(quad_degree)?;
    let parts: Vec<(f64, f64)> = (0..sol.bases.len())
        .into_par_iter()
        .map(|c| {
            let coeffs = sol.local_coefficients(c);
            sol.bases[c].squared_errors(&coeffs, |x| exact.value(x), |x| exact.gradient(x), &rule)
        })
        .collect();
    let (e0, e1) = parts.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    Ok((e0.sqrt(), e1.sqrt()))
}
