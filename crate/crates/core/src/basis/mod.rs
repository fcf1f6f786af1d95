//! Zipped shape functions on a star-shaped polygon.
//!
//! `phi_i = Psi_i + sum_j omega_ij Psi_j` where `Psi` is the Lagrange basis
//! of the fan sub-triangulation, `i` runs over coarse nodes and `j` over
//! virtual nodes. The weights are the minimum-norm solution of
//! `D W = V`, which puts every polynomial of degree `k` in the span.

mod fine;
mod monomials;
mod select;
mod weights;

pub use fine::{enumerate_fine_nodes, fine_node_count, FineNodeSet, NodeKind};
pub use monomials::ScaledMonomials;
pub use select::{distribute, select_coarse_nodes, unisolvence_margin, verify_unisolvence, NodeClassification};
pub use weights::{build_constraint_matrices, solve_weights, WeightMatrix};

use crate::geometry::{build_subtriangulation, star_center_lp, Point2, Polygon, StarCenter, SubTriangulation};
use crate::reference::{quadrature_rule, QuadratureRule, RefBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

/// Normalized reproduction error `err_{I,0} / sqrt(|E|)` above which the
/// heuristic node selection is considered to have failed.
pub const SELF_TEST_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Coarse(usize),
    Virtual(usize),
}

/// Per-element diagnostic record.
#[derive(Clone, Debug, Serialize)]
pub struct ElementDebug {
    pub cell: Option<usize>,
    pub order: usize,
    pub num_vertices: usize,
    pub num_fine: usize,
    pub num_dofs: usize,
    pub num_virtual: usize,
    pub center: Point2,
    pub radius: f64,
    pub coarse: Vec<usize>,
    pub virtual_nodes: Vec<usize>,
    pub interior_per_triangle: Vec<usize>,
    pub weight_shape: (usize, usize),
    pub constraint_residual: f64,
    pub promotions: usize,
}

#[derive(Clone, Debug)]
pub struct LocalBasis {
    order: usize,
    polygon: Polygon,
    sub: SubTriangulation,
    fine: FineNodeSet,
    cls: NodeClassification,
    mono: ScaledMonomials,
    weights: WeightMatrix,
    ref_basis: RefBasis,
    roles: Vec<Role>,
    constraint_residual: f64,
}

impl LocalBasis {
    /// Builds the basis around the Chebyshev center of the kernel.
    pub fn new(polygon: &Polygon, k: usize) -> Result<Self> {
        Self::with_center(polygon, star_center_lp(polygon)?, k)
    }

    /// Builds the basis around a given kernel point. If the heuristic coarse
    /// nodes leave `D` rank deficient, or the element fails the polynomial
    /// reproduction self-test, virtual nodes are promoted one at a time.
    pub fn with_center(polygon: &Polygon, center: StarCenter, k: usize) -> Result<Self> {
        let ref_basis = RefBasis::new(k)?;
        let sub = build_subtriangulation(polygon, center)?;
        let fine = enumerate_fine_nodes(&sub, k)?;
        let mono = ScaledMonomials::new(center.center, polygon.diameter(), k);
        let mut cls = select_coarse_nodes(&fine, k);
        loop {
            let (d, v) = build_constraint_matrices(&fine, &cls, &mono);
            let solved = if cls.virtual_nodes.is_empty() {
                Ok(WeightMatrix::empty(cls.num_dofs()))
            } else {
                solve_weights(&d, &v)
            };
            match solved {
                Ok(weights) => {
                    let constraint_residual = weights.constraint_residual(&d, &v);
                    let basis = Self::from_parts(k, polygon, &sub, &fine, &cls, &mono, weights, &ref_basis, constraint_residual);
                    if cls.virtual_nodes.is_empty() || basis.passes_self_test() {
                        return Ok(basis);
                    }
                }
                Err(Error::RankDeficient { .. }) if !cls.virtual_nodes.is_empty() => {}
                Err(e) => return Err(e),
            }
            let pick = best_promotion(&fine, &cls, &mono, &d);
            cls.promote(pick);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        order: usize,
        polygon: &Polygon,
        sub: &SubTriangulation,
        fine: &FineNodeSet,
        cls: &NodeClassification,
        mono: &ScaledMonomials,
        weights: WeightMatrix,
        ref_basis: &RefBasis,
        constraint_residual: f64,
    ) -> Self {
        let mut roles = vec![Role::Virtual(0); fine.len()];
        for (i, &c) in cls.coarse.iter().enumerate() {
            roles[c] = Role::Coarse(i);
        }
        for (j, &v) in cls.virtual_nodes.iter().enumerate() {
            roles[v] = Role::Virtual(j);
        }
        Self {
            order,
            polygon: polygon.clone(),
            sub: sub.clone(),
            fine: fine.clone(),
            cls: cls.clone(),
            mono: mono.clone(),
            weights,
            ref_basis: ref_basis.clone(),
            roles,
            constraint_residual,
        }
    }

    fn passes_self_test(&self) -> bool {
        let rule = quadrature_rule((2 * self.order).max(1)).expect("degree within table");
        let (err0, _) = self.reproduction_errors_with(&rule);
        err0 / self.polygon.area().sqrt() <= SELF_TEST_TOLERANCE
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn subtriangulation(&self) -> &SubTriangulation {
        &self.sub
    }

    pub fn center(&self) -> StarCenter {
        self.sub.center
    }

    pub fn fine_nodes(&self) -> &FineNodeSet {
        &self.fine
    }

    pub fn classification(&self) -> &NodeClassification {
        &self.cls
    }

    pub fn monomials(&self) -> &ScaledMonomials {
        &self.mono
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn ref_basis(&self) -> &RefBasis {
        &self.ref_basis
    }

    pub fn num_dofs(&self) -> usize {
        self.cls.num_dofs()
    }

    /// Coarse indices below this bound are the boundary lattice.
    pub fn num_boundary_dofs(&self) -> usize {
        self.fine.num_boundary()
    }

    pub fn coarse_points(&self) -> Vec<Point2> {
        self.cls.coarse.iter().map(|&c| self.fine.nodes()[c]).collect()
    }

    pub fn virtual_points(&self) -> Vec<Point2> {
        self.cls.virtual_nodes.iter().map(|&c| self.fine.nodes()[c]).collect()
    }

    pub fn constraint_residual(&self) -> f64 {
        self.constraint_residual
    }

    /// `dof_i(f) = f(x_i)`.
    pub fn interpolate(&self, f: impl Fn(Point2) -> f64) -> Vec<f64> {
        self.cls.coarse.iter().map(|&c| f(self.fine.nodes()[c])).collect()
    }

    /// Values at every fine node of the function with the given coarse
    /// coefficients: coarse nodes carry their coefficient, virtual node `j`
    /// carries `sum_i omega_ij c_i`.
    pub fn fine_coefficients(&self, coarse: &[f64]) -> Vec<f64> {
        assert_eq!(coarse.len(), self.num_dofs());
        let w = self.weights.matrix();
        self.roles
            .iter()
            .map(|&role| match role {
                Role::Coarse(i) => coarse[i],
                Role::Virtual(j) => w.column(j).iter().zip(coarse).map(|(a, b)| a * b).sum(),
            })
            .collect()
    }

    /// `Z` with `phi_i = sum_n Z(i, n) Psi_n`.
    pub fn expansion(&self) -> DMatrix<f64> {
        let mut z = DMatrix::zeros(self.num_dofs(), self.fine.len());
        let w = self.weights.matrix();
        for (n, &role) in self.roles.iter().enumerate() {
            match role {
                Role::Coarse(i) => z[(i, n)] = 1.0,
                Role::Virtual(j) => z.column_mut(n).copy_from(&w.column(j)),
            }
        }
        z
    }

    fn locate(&self, x: Point2) -> Result<(usize, Point2)> {
        let tol = 1e-10 * self.polygon.diameter();
        if !self.polygon.contains(x, tol) {
            return Err(Error::PointOutsideElement { x: x.x, y: x.y });
        }
        self.sub.locate(x).ok_or(Error::PointOutsideElement { x: x.x, y: x.y })
    }

    /// Values and gradients of all `phi_i` at `x`. Points on an internal
    /// fan edge use the lower-indexed triangle.
    pub fn eval(&self, x: Point2) -> Result<(Vec<f64>, Vec<Point2>)> {
        let (t, xh) = self.locate(x)?;
        let tri = &self.sub.triangles[t];
        let (vals, grads) = self.ref_basis.eval_with_grad(xh);
        let w = self.weights.matrix();
        let mut phi = vec![0.0; self.num_dofs()];
        let mut dphi = vec![Point2::default(); self.num_dofs()];
        for (l, &n) in self.fine.triangle_nodes(t).iter().enumerate() {
            let g = tri.push_gradient(grads[l]);
            match self.roles[n] {
                Role::Coarse(i) => {
                    phi[i] += vals[l];
                    dphi[i] = dphi[i] + g;
                }
                Role::Virtual(j) => {
                    for (i, &wij) in w.column(j).iter().enumerate() {
                        phi[i] += wij * vals[l];
                        dphi[i] = dphi[i] + g * wij;
                    }
                }
            }
        }
        Ok((phi, dphi))
    }

    /// Squared L2 errors `||u - v||^2` and `||grad u - grad v||^2` over the
    /// element, where `v` has coarse coefficients `coarse`.
    pub fn squared_errors(
        &self,
        coarse: &[f64],
        u: impl Fn(Point2) -> f64,
        grad_u: impl Fn(Point2) -> Point2,
        rule: &QuadratureRule,
    ) -> (f64, f64) {
        let fine = self.fine_coefficients(coarse);
        let tables: Vec<(Vec<f64>, Vec<Point2>)> = rule.points.iter().map(|&p| self.ref_basis.eval_with_grad(p)).collect();
        let (mut e0, mut e1) = (0.0, 0.0);
        for (t, tri) in self.sub.triangles.iter().enumerate() {
            let ids = self.fine.triangle_nodes(t);
            for ((&p, &w), (vals, grads)) in rule.points.iter().zip(&rule.weights).zip(&tables) {
                let x = tri.map(p);
                let mut v = 0.0;
                let mut g = Point2::default();
                for (l, &n) in ids.iter().enumerate() {
                    v += fine[n] * vals[l];
                    g = g + grads[l] * fine[n];
                }
                let g = tri.push_gradient(g);
                let jw = w * tri.det;
                e0 += jw * (u(x) - v).powi(2);
                let dg = grad_u(x) - g;
                e1 += jw * dg.dot(dg);
            }
        }
        (e0, e1)
    }

    /// `max_alpha ||m_alpha - I m_alpha||` in L2 and in the gradient L2 norm.
    pub fn reproduction_errors(&self, quad_degree: usize) -> Result<(f64, f64)> {
        let rule = quadrature_rule(quad_degree)?;
        Ok(self.reproduction_errors_with(&rule))
    }

    fn reproduction_errors_with(&self, rule: &QuadratureRule) -> (f64, f64) {
        let mono = &self.mono;
        (0..mono.len())
            .map(|a| {
                let coeffs = self.interpolate(|x| mono.eval_one(a, x));
                let (e0, e1) = self.squared_errors(&coeffs, |x| mono.eval_one(a, x), |x| mono.grad_one(a, x), rule);
                (e0.sqrt(), e1.sqrt())
            })
            .fold((0.0, 0.0), |(a, b), (c, d)| (f64::max(a, c), f64::max(b, d)))
    }

    pub fn debug_record(&self, cell: Option<usize>) -> ElementDebug {
        ElementDebug {
            cell,
            order: self.order,
            num_vertices: self.polygon.num_vertices(),
            num_fine: self.fine.len(),
            num_dofs: self.num_dofs(),
            num_virtual: self.cls.num_virtual(),
            center: self.sub.center.center,
            radius: self.sub.center.radius,
            coarse: self.cls.coarse.clone(),
            virtual_nodes: self.cls.virtual_nodes.clone(),
            interior_per_triangle: self.cls.interior_per_triangle.clone(),
            weight_shape: (self.weights.num_dofs(), self.weights.num_virtual()),
            constraint_residual: self.constraint_residual,
            promotions: self.cls.promoted,
        }
    }
}

/// Virtual node whose promotion maximizes the smallest singular value of
/// the augmented coarse Vandermonde matrix.
fn best_promotion(fine: &FineNodeSet, cls: &NodeClassification, mono: &ScaledMonomials, d: &DMatrix<f64>) -> usize {
    let mut best = (f64::NEG_INFINITY, 0);
    for (pos, &node) in cls.virtual_nodes.iter().enumerate() {
        let mut aug = d.clone().insert_column(d.ncols(), 0.0);
        for (r, v) in mono.eval(fine.nodes()[node]).into_iter().enumerate() {
            aug[(r, d.ncols())] = v;
        }
        let smin = aug.singular_values().min();
        if smin > best.0 {
            best = (smin, pos);
        }
    }
    best.1
}
