use crate::{Error, Result};
use sprs::{CsMat, FillInReduction};
use sprs_ldl::Ldl;

/// Relative residual `||B u - F|| / ||F||` the solver must reach.
pub const RESIDUAL_TARGET: f64 = 1e-11;
const REFINEMENT_STEPS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMethod {
    /// Sparse `LDL^T` with reverse Cuthill-McKee ordering plus iterative refinement.
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    Pcg,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub solution: Vec<f64>,
    pub relative_residual: f64,
    pub method: SolverMethod,
    pub iterations: usize,
}

pub fn mat_vec(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    a.outer_iterator().map(|row| row.iter().map(|(j, &v)| v * x[j]).sum()).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn residual(a: &CsMat<f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    mat_vec(a, x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Solves `A x = b` for symmetric positive definite `A` in CSR form.
pub fn solve_spd(a: &CsMat<f64>, b: &[f64]) -> Result<SolveOutcome> {
    let n = b.len();
    assert_eq!(a.rows(), n);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(SolveOutcome { solution: vec![0.0; n], relative_residual: 0.0, method: SolverMethod::Direct, iterations: 0 });
    }
    let a = if a.is_csr() { a.clone() } else { a.to_csr() };
    if n == 1 {
        let d = a.get(0, 0).copied().unwrap_or(0.0);
        if d <= 0.0 {
            return Err(Error::SolverBreakdown(format!("non-positive 1x1 matrix {d:e}")));
        }
        return Ok(SolveOutcome { solution: vec![b[0] / d], relative_residual: 0.0, method: SolverMethod::Direct, iterations: 0 });
    }
    let factor = Ldl::new().fill_in_reduction(FillInReduction::ReverseCuthillMcKee).numeric(a.view());
    let start = match factor {
        Ok(ldl) if ldl.d().iter().all(|&d| d > 0.0 && d.is_finite()) => {
            let mut x = ldl.solve(b.to_vec());
            let mut r = residual(&a, &x, b);
            let mut rel = norm(&r) / bnorm;
            let mut steps = 0;
            while rel > 0.1 * RESIDUAL_TARGET && steps < REFINEMENT_STEPS {
                let dx = ldl.solve(r);
                x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
                r = residual(&a, &x, b);
                let next = norm(&r) / bnorm;
                steps += 1;
                if next >= rel {
                    rel = next;
                    break;
                }
                rel = next;
            }
            if rel <= RESIDUAL_TARGET {
                return Ok(SolveOutcome { solution: x, relative_residual: rel, method: SolverMethod::Direct, iterations: steps });
            }
            x
        }
        Ok(_) => return Err(Error::SolverBreakdown("non-positive pivot in LDL^T factorization".into())),
        Err(_) => vec![0.0; n],
    };
    pcg(&a, b, start, 20 * n.max(10))
}

/// Jacobi-preconditioned CG from `x`.
pub fn pcg(a: &CsMat<f64>, b: &[f64], mut x: Vec<f64>, max_iter: usize) -> Result<SolveOutcome> {
    let bnorm = norm(b);
    let diag: Vec<f64> = (0..b.len()).map(|i| a.get(i, i).copied().unwrap_or(0.0)).collect();
    if let Some(i) = diag.iter().position(|&d| d <= 0.0) {
        return Err(Error::SolverBreakdown(format!("non-positive diagonal entry at row {i}")));
    }
    let mut r = residual(a, &x, b);
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        let rel = norm(&r) / bnorm;
        if rel <= 0.1 * RESIDUAL_TARGET {
            return Ok(SolveOutcome { solution: x, relative_residual: rel, method: SolverMethod::Pcg, iterations: it });
        }
        let ap = mat_vec(a, &p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::SolverBreakdown(format!("p^T A p = {pap:e} at iteration {it}")));
        }
        let alpha = rz / pap;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        z = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    // the recurrence drifts; judge by the true residual
    let rel = norm(&residual(a, &x, b)) / bnorm;
    if rel <= RESIDUAL_TARGET {
        Ok(SolveOutcome { solution: x, relative_residual: rel, method: SolverMethod::Pcg, iterations: max_iter })
    } else {
        Err(Error::NonConvergence { residual: rel })
    }
}
