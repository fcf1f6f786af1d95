use super::{Coefficients, DofMap};
use crate::basis::LocalBasis;
use crate::geometry::{Mesh, Point2};
use crate::reference::{quadrature_rule, QuadratureRule};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use sprs::CsMat;

/// Reference basis values and gradients at the points of a rule.
struct RefTables {
    rule: QuadratureRule,
    values: DMatrix<f64>,
    grads: Vec<Vec<Point2>>,
}

impl RefTables {
    fn new(basis: &LocalBasis, rule: QuadratureRule) -> Self {
        let rb = basis.ref_basis();
        let mut values = DMatrix::zeros(rb.len(), rule.len());
        let mut grads = Vec::with_capacity(rule.len());
        for (q, &p) in rule.points.iter().enumerate() {
            let (v, g) = rb.eval_with_grad(p);
            values.column_mut(q).copy_from_slice(&v);
            grads.push(g);
        }
        Self { rule, values, grads }
    }
}

/// Element stiffness-plus-mass matrix and load vector.
pub fn element_system(basis: &LocalBasis, coeffs: &impl Coefficients, quad_degree: usize) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let tables = RefTables::new(basis, quadrature_rule(quad_degree)?);
    Ok(element_system_with(basis, coeffs, &tables))
}

fn element_system_with(basis: &LocalBasis, coeffs: &impl Coefficients, tables: &RefTables) -> (DMatrix<f64>, DVector<f64>) {
    let n = basis.num_dofs();
    let nq = tables.rule.len();
    let nr = tables.values.nrows();
    let z = basis.expansion();
    let fine = basis.fine_nodes();
    let mut k = DMatrix::zeros(n, n);
    let mut f = DVector::zeros(n);
    let mut gx = DMatrix::zeros(nr, nq);
    let mut gy = DMatrix::zeros(nr, nq);
    for (t, tri) in basis.subtriangulation().triangles.iter().enumerate() {
        let zt = z.select_columns(fine.triangle_nodes(t));
        for q in 0..nq {
            for (l, &g) in tables.grads[q].iter().enumerate() {
                let g = tri.push_gradient(g);
                gx[(l, q)] = g.x;
                gy[(l, q)] = g.y;
            }
        }
        let phi = &zt * &tables.values;
        let px = &zt * &gx;
        let py = &zt * &gy;
        let mut ax = DMatrix::zeros(n, nq);
        let mut ay = DMatrix::zeros(n, nq);
        let mut am = DMatrix::zeros(n, nq);
        let mut wf = DVector::zeros(nq);
        for (q, (&p, &w)) in tables.rule.points.iter().zip(&tables.rule.weights).enumerate() {
            let x = tri.map(p);
            let jw = w * tri.det;
            let d = coeffs.diffusion(x);
            let gamma = coeffs.reaction(x);
            for i in 0..n {
                let (dx, dy) = (px[(i, q)], py[(i, q)]);
                ax[(i, q)] = jw * (d[0][0] * dx + d[0][1] * dy);
                ay[(i, q)] = jw * (d[1][0] * dx + d[1][1] * dy);
                am[(i, q)] = jw * gamma * phi[(i, q)];
            }
            wf[q] = jw * coeffs.load(x);
        }
        k += &ax * px.transpose() + &ay * py.transpose() + &am * phi.transpose();
        f += &phi * &wf;
    }
    let sym = (&k + k.transpose()) * 0.5;
    (sym, f)
}

/// Globally assembled `B u = F` before boundary conditions.
#[derive(Clone, Debug)]
pub struct SymmetricSystem {
    pub matrix: CsMat<f64>,
    pub load: Vec<f64>,
}

impl SymmetricSystem {
    /// `max |B_ij - B_ji| / max |B_ij|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.matrix.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for (&v, (i, j)) in self.matrix.iter() {
            let other = self.matrix.get(j, i).copied().unwrap_or(0.0);
            worst = worst.max((v - other).abs());
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }
}

/// Builds one basis per cell, in parallel.
pub fn build_bases(mesh: &Mesh, k: usize) -> Result<Vec<LocalBasis>> {
    mesh.polygons().par_iter().map(|p| LocalBasis::new(p, k)).collect()
}

/// Element integrals run in parallel; the merge into the global matrix is
/// sequential in cell order, so the result does not depend on scheduling.
pub fn assemble(mesh: &Mesh, bases: &[LocalBasis], dofs: &DofMap, coeffs: &impl Coefficients, quad_degree: usize) -> Result<SymmetricSystem> {
    assert_eq!(mesh.num_cells(), bases.len());
    let k = dofs.order();
    if quad_degree < 2 * k {
        return Err(Error::invalid(format!("quadrature degree {quad_degree} is below 2k = {}", 2 * k)));
    }
    let tables = match bases.first() {
        Some(b) => RefTables::new(b, quadrature_rule(quad_degree)?),
        None => return Ok(SymmetricSystem { matrix: CsMat::zero((dofs.len(), dofs.len())), load: vec![0.0; dofs.len()] }),
    };
    let locals: Vec<(DMatrix<f64>, DVector<f64>)> = bases.par_iter().map(|b| element_system_with(b, coeffs, &tables)).collect();

    let n = dofs.len();
    let mut pattern: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..bases.len() {
        let ids = dofs.cell_dofs(c);
        for &i in ids {
            pattern[i].extend_from_slice(ids);
        }
    }
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::new();
    indptr.push(0);
    for row in &mut pattern {
        row.sort_unstable();
        row.dedup();
        indices.extend_from_slice(row);
        indptr.push(indices.len());
    }
    let mut data = vec![0.0; indices.len()];
    let mut load = vec![0.0; n];
    for (c, (ke, fe)) in locals.iter().enumerate() {
        let ids = dofs.cell_dofs(c);
        for (a, &i) in ids.iter().enumerate() {
            load[i] += fe[a];
            let row = &indices[indptr[i]..indptr[i + 1]];
            for (b, &j) in ids.iter().enumerate() {
                let pos = row.binary_search(&j).expect("entry in pattern");
                data[indptr[i] + pos] += ke[(a, b)];
            }
        }
    }
    Ok(SymmetricSystem { matrix: CsMat::new((n, n), indptr, indices, data), load })
}

/// System on the free DOFs after eliminating the boundary.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub matrix: CsMat<f64>,
    pub rhs: Vec<f64>,
    /// Reduced index -> global DOF.
    pub free: Vec<usize>,
    /// Full-length vector holding the prescribed boundary values.
    pub lift: Vec<f64>,
}

impl ReducedSystem {
    /// Global coefficient vector from a solution on the free DOFs.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut full = self.lift.clone();
        for (&g, &v) in self.free.iter().zip(reduced) {
            full[g] = v;
        }
        full
    }
}

/// Eliminates the boundary DOFs: `F_I -= B_IB g_B`.
pub fn apply_dirichlet(system: &SymmetricSystem, dofs: &DofMap, g: impl Fn(Point2) -> f64) -> ReducedSystem {
    let n = dofs.len();
    let mut lift = vec![0.0; n];
    let mut reduced_index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for i in 0..n {
        if dofs.is_boundary(i) {
            lift[i] = g(dofs.coords()[i]);
        } else {
            reduced_index[i] = free.len();
            free.push(i);
        }
    }
    let mut indptr = vec![0];
    let mut indices = Vec::new();
    let mut data = Vec::new();
    let mut rhs = Vec::with_capacity(free.len());
    for &i in &free {
        let row = system.matrix.outer_view(i).expect("row in range");
        let mut r = system.load[i];
        for (j, &v) in row.iter() {
            if dofs.is_boundary(j) {
                r -= v * lift[j];
            } else {
                indices.push(reduced_index[j]);
                data.push(v);
            }
        }
        rhs.push(r);
        indptr.push(indices.len());
    }
    let m = free.len();
    ReducedSystem { matrix: CsMat::new((m, m), indptr, indices, data), rhs, free, lift }
}
