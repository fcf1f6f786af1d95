use super::fine::FineNodeSet;
use super::monomials::ScaledMonomials;
use super::select::NodeClassification;
use crate::{Error, Result};
use nalgebra::DMatrix;

/// `D(alpha, i) = m_alpha(x_i)` over coarse nodes and
/// `V(alpha, j) = m_alpha(p_j)` over virtual nodes.
pub fn build_constraint_matrices(
    fine: &FineNodeSet,
    cls: &NodeClassification,
    mono: &ScaledMonomials,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let eval_columns = |ids: &[usize]| {
        let mut m = DMatrix::zeros(mono.len(), ids.len());
        for (c, &id) in ids.iter().enumerate() {
            for (r, v) in mono.eval(fine.nodes()[id]).into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    };
    (eval_columns(&cls.coarse), eval_columns(&cls.virtual_nodes))
}

/// Virtual-node weights: column `n` holds `omega_{i, n}` for every coarse `i`.
#[derive(Clone, Debug)]
pub struct WeightMatrix(DMatrix<f64>);

impl WeightMatrix {
    pub(crate) fn empty(num_dofs: usize) -> Self {
        WeightMatrix(DMatrix::zeros(num_dofs, 0))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn num_dofs(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_virtual(&self) -> usize {
        self.0.ncols()
    }

    /// `max_n || D W(:, n) - V(:, n) ||_inf`.
    pub fn constraint_residual(&self, d: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
        if v.ncols() == 0 {
            return 0.0;
        }
        (d * &self.0 - v).amax()
    }
}

/// Minimum-norm solution of `D w = v` for every column `v` of `V`.
///
/// `w = D^T (D D^T)^-1 v`: the small Gram matrix `G = D D^T` is factored
/// once by Cholesky and every column costs two triangular solves and one
/// product with `D^T`.
pub fn solve_weights(d: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<WeightMatrix> {
    let n = d.nrows();
    assert_eq!(v.nrows(), n, "D and V must have the same number of rows");
    let gram = d * d.transpose();
    let l = cholesky(&gram)?;
    let mut w = DMatrix::zeros(d.ncols(), v.ncols());
    let mut y = vec![0.0; n];
    for col in 0..v.ncols() {
        for i in 0..n {
            let s: f64 = (0..i).map(|j| l[(i, j)] * y[j]).sum();
            y[i] = (v[(i, col)] - s) / l[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| l[(j, i)] * y[j]).sum();
            y[i] = (y[i] - s) / l[(i, i)];
        }
        for r in 0..d.ncols() {
            w[(r, col)] = (0..n).map(|a| d[(a, r)] * y[a]).sum();
        }
    }
    Ok(WeightMatrix(w))
}

/// Lower Cholesky factor; fails when a pivot drops below `1e-12 ||G||_max`.
fn cholesky(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let scale = g.amax();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let pivot = g[(j, j)] - (0..j).map(|p| l[(j, p)] * l[(j, p)]).sum::<f64>();
        // NaN pivots are rejected too
        if pivot.partial_cmp(&(1e-12 * scale)) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::RankDeficient { pivot, scale });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|p| l[(i, p)] * l[(j, p)]).sum();
            l[(i, j)] = (g[(i, j)] - s) / d;
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
        DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn square_case_is_plain_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = random(&mut rng, 6, 6) + DMatrix::identity(6, 6) * 3.0;
        let v = random(&mut rng, 6, 4);
        let w = solve_weights(&d, &v).unwrap();
        let direct = d.clone().lu().solve(&v).unwrap();
        assert!((w.matrix() - direct).amax() < 1e-12);
        assert!(w.constraint_residual(&d, &v) < 1e-13);
    }

    #[test]
    fn consistency_with_own_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random(&mut rng, 5, 12);
        let v = d.columns(2, 1).into_owned();
        let w = solve_weights(&d, &v).unwrap();
        assert!(w.constraint_residual(&d, &v) < 1e-13);
        // minimum norm is not the unit vector
        assert!(w.matrix().norm() < 1.0);
    }

    #[test]
    fn matches_svd_pseudo_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = random(&mut rng, 5, 12);
        let v = random(&mut rng, 5, 9);
        let w = solve_weights(&d, &v).unwrap();
        let oracle = d.clone().pseudo_inverse(1e-14).unwrap() * &v;
        assert!((w.matrix() - oracle).amax() < 1e-10);
    }

    #[test]
    fn adding_null_space_vectors_increases_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = random(&mut rng, 6, 15);
        let v = random(&mut rng, 6, 3);
        let w = solve_weights(&d, &v).unwrap();
        // projector onto null(D)
        let pinv = d.clone().pseudo_inverse(1e-14).unwrap();
        let proj = DMatrix::identity(15, 15) - &pinv * &d;
        for col in 0..3 {
            let base = w.matrix().column(col).into_owned();
            for _ in 0..20 {
                let z = &proj * random(&mut rng, 15, 1);
                let alt = &base + &z;
                assert!((&d * &alt - v.column(col)).amax() < 1e-10);
                assert!(base.norm() <= alt.norm() + 1e-14);
            }
            // column lies in the row space of D
            assert!((&proj * &base).amax() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_rows_are_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut d = random(&mut rng, 4, 8);
        let row = d.row(0).into_owned();
        d.set_row(3, &(row * 2.0));
        let v = random(&mut rng, 4, 2);
        assert!(matches!(solve_weights(&d, &v), Err(Error::RankDeficient { .. })));
    }
}
