//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use zfem::assembly::{apply_dirichlet, assemble, build_bases, build_dof_map, compute_errors, solve_spd, DiscreteSolution, ExactSolution, PolynomialProblem, VariableDiffusion};
use zfem::basis::{enumerate_fine_nodes, select_coarse_nodes, solve_weights, unisolvence_margin, LocalBasis};
use zfem::geometry::{build_subtriangulation, star_center_lp, Mesh, Point2, Polygon};
use zfem::harness::{eoc, run_convergence, ConvergenceOptions, EocReport, Family};
use zfem::meshgen::{gallery, gen_cartesian, gen_distorted_quads, gen_structured_concave, parse_mesh, GALLERY_NAMES};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn voronoi(n: usize) -> Mesh {
    let path = format!("{}/fixtures/voronoi/voronoi_{n:04}.mesh", env!("CARGO_MANIFEST_DIR"));
    parse_mesh(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn fixture_meshes() -> Vec<(&'static str, Mesh)> {
    vec![
        ("cartesian", gen_cartesian(4)),
        ("distorted", gen_distorted_quads(4, 1, 0.2).unwrap()),
        ("concave", gen_structured_concave(2)),
        ("voronoi16", voronoi(16)),
        ("voronoi64", voronoi(64)),
    ]
}

fn reproduction() -> Outcome {
    let (mut w0, mut w1) = (0.0f64, 0.0f64);
    for name in GALLERY_NAMES {
        let p = gallery(name).unwrap();
        for k in 1..=6 {
            let (e0, e1) = LocalBasis::new(&p, k).and_then(|b| b.reproduction_errors(2 * k + 4)).map_err(|e| format!("{name} k={k}: {e}"))?;
            w0 = w0.max(e0);
            w1 = w1.max(e1);
        }
    }
    check(w0 <= 1e-9 && w1 <= 1e-7, format!("worst err0 {w0:.2e} (<= 1e-9), worst errgrad {w1:.2e} (<= 1e-7)"))
}

fn patch_problem(k: u32, rng: &mut ChaCha8Rng) -> PolynomialProblem {
    let mut terms = Vec::new();
    for a in 0..=k {
        for b in 0..=(k - a) {
            terms.push((rng.random_range(-1.0..1.0), a, b));
        }
    }
    PolynomialProblem { diffusion: [[1.5, 0.4], [0.4, 0.8]], terms }
}

fn patch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for (name, mesh) in fixture_meshes() {
        for k in 1..=4 {
            let problem = patch_problem(k as u32, &mut rng);
            let run = || -> zfem::Result<f64> {
                let bases = build_bases(&mesh, k)?;
                let dofs = build_dof_map(&mesh, &bases)?;
                let sys = assemble(&mesh, &bases, &dofs, &problem, 2 * k + 2)?;
                let red = apply_dirichlet(&sys, &dofs, |x| problem.value(x));
                let out = solve_spd(&red.matrix, &red.rhs)?;
                let sol = DiscreteSolution::new(&mesh, &bases, &dofs, red.expand(&out.solution));
                Ok(compute_errors(&sol, &problem, 2 * k + 2)?.1)
            };
            let e = run().map_err(|e| format!("{name} k={k}: {e}"))?;
            if e > 1e-8 {
                return Err(format!("{name} k={k}: errgrad {e:.2e} > 1e-8"));
            }
            worst = worst.max(e);
        }
    }
    check(true, format!("worst errgrad {worst:.2e} over cartesian/distorted/concave/voronoi, k=1..4"))
}

fn study(family: &Family, k: usize, levels: usize) -> Result<EocReport, String> {
    let records = run_convergence(family, &ConvergenceOptions { k, levels, quad_degree: None }, |_, _| Ok(())).map_err(|e| format!("{} k={k}: {e}", family.name()))?;
    eoc(&records).map_err(|e| e.to_string())
}

fn eoc_windows(family: Family, orders: std::ops::RangeInclusive<usize>, levels: usize, window: impl Fn(usize) -> ((f64, f64), (f64, f64))) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in orders {
        let r = study(&family, k, levels)?;
        let ((l0, h0), (l1, h1)) = window(k);
        let pass = (l0..=h0).contains(&r.eoc0) && (l1..=h1).contains(&r.eocgrad);
        ok &= pass;
        parts.push(format!("k={k}: {:.2}/{:.2}{}", r.eoc0, r.eocgrad, if pass { "" } else { " (out of window)" }));
    }
    check(ok, format!("EOC_0/EOC_grad {}", parts.join(", ")))
}

fn standard_window(k: usize) -> ((f64, f64), (f64, f64)) {
    let k = k as f64;
    ((k + 1.0 - 0.3, k + 1.0 + 0.6), (k - 0.3, k + 0.5))
}

fn min_norm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let nk = [3, 6, 10, 15][trial % 4];
        let ndof = rng.random_range(nk..=3 * nk);
        let nv = rng.random_range(1..=2 * nk);
        let d = DMatrix::from_fn(nk, ndof, |_, _| rng.random_range(-1.0..1.0));
        let v = DMatrix::from_fn(nk, nv, |_, _| rng.random_range(-1.0..1.0));
        let w = solve_weights(&d, &v).map_err(|e| format!("trial {trial}: {e}"))?;
        let oracle = d.clone().svd(true, true).pseudo_inverse(1e-14).unwrap() * &v;
        for c in 0..nv {
            let err = (w.matrix().column(c) - oracle.column(c)).amax();
            worst = worst.max(err);
        }
    }
    check(worst <= 1e-10, format!("100 random systems, worst column deviation from SVD pseudo-inverse {worst:.2e}"))
}

fn polygon_invariants(name: &str, p: &Polygon, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let center = star_center_lp(p).map_err(|e| format!("{name}: {e}"))?;
    // no sampled kernel point beats the Chebyshev center
    let (lo, hi) = p.vertices().iter().fold((Point2::new(f64::MAX, f64::MAX), Point2::new(f64::MIN, f64::MIN)), |(lo, hi), v| {
        (Point2::new(lo.x.min(v.x), lo.y.min(v.y)), Point2::new(hi.x.max(v.x), hi.y.max(v.y)))
    });
    for _ in 0..2000 {
        let x = Point2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if p.kernel_depth(x).min(p.diameter()) > center.radius + 1e-12 * p.diameter() {
            return Err(format!("{name}: sampled kernel point deeper than the LP center"));
        }
    }
    for k in 1..=6 {
        let b = LocalBasis::new(p, k).map_err(|e| format!("{name} k={k}: {e}"))?;
        for (i, &x) in b.coarse_points().iter().enumerate() {
            let (phi, _) = b.eval(x).map_err(|e| e.to_string())?;
            for (j, &v) in phi.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (v - expected).abs() > 1e-9 {
                    return Err(format!("{name} k={k}: phi_{j}(x_{i}) = {v}"));
                }
            }
        }
        for _ in 0..20 {
            let x = center.center + Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * (0.9 * center.radius / 2f64.sqrt());
            let (phi, dphi) = b.eval(x).map_err(|e| e.to_string())?;
            let s: f64 = phi.iter().sum();
            let g = dphi.iter().fold(Point2::default(), |a, d| a + *d);
            if (s - 1.0).abs() > 1e-10 || g.norm() > 1e-8 / p.diameter() {
                return Err(format!("{name} k={k}: partition of unity off by {:.2e}", (s - 1.0).abs()));
            }
        }
        let margin = unisolvence_margin(&b.coarse_points(), k);
        if margin <= 1e-10 {
            return Err(format!("{name} k={k}: coarse nodes not unisolvent (margin {margin:.2e})"));
        }
    }
    Ok(())
}

fn mesh_invariants(name: &str, mesh: &Mesh, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 1..=3 {
        let bases = build_bases(mesh, k).map_err(|e| format!("{name} k={k}: {e}"))?;
        let dofs = build_dof_map(mesh, &bases).map_err(|e| format!("{name} k={k}: {e}"))?;
        let sys = assemble(mesh, &bases, &dofs, &VariableDiffusion, 2 * k + 2).map_err(|e| e.to_string())?;
        if sys.asymmetry() > 1e-12 {
            return Err(format!("{name} k={k}: asymmetry {:.2e}", sys.asymmetry()));
        }
        let values = (0..dofs.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sol = DiscreteSolution::new(mesh, &bases, &dofs, values);
        for (c, cell) in mesh.cells().iter().enumerate() {
            for j in 0..cell.len() {
                let (a, b) = (cell[j], cell[(j + 1) % cell.len()]);
                let Some(other) = mesh.neighbor(a, b) else { continue };
                for s in 1..=5 {
                    let x = mesh.vertices()[a].lerp(mesh.vertices()[b], s as f64 / 6.0);
                    let u1 = sol.eval_in_cell(c, x).map_err(|e| e.to_string())?.0;
                    let u2 = sol.eval_in_cell(other, x).map_err(|e| e.to_string())?.0;
                    if (u1 - u2).abs() > 1e-9 {
                        return Err(format!("{name} k={k}: trace jump {:.2e} between cells {c} and {other}", (u1 - u2).abs()));
                    }
                }
            }
        }
    }
    Ok(())
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for name in GALLERY_NAMES {
        polygon_invariants(name, &gallery(name).unwrap(), &mut rng)?;
    }
    let meshes = fixture_meshes();
    for (name, mesh) in &meshes {
        mesh_invariants(name, mesh, &mut rng)?;
    }
    Ok(format!("{} gallery polygons (k=1..6), {} fixture meshes (k=1..3)", GALLERY_NAMES.len(), meshes.len()))
}

fn table_one() -> Outcome {
    let pts: Vec<Point2> = (0..8)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 8.0;
            Point2::new(t.cos(), t.sin())
        })
        .collect();
    let p = Polygon::new(pts).unwrap();
    let sub = build_subtriangulation(&p, star_center_lp(&p).unwrap()).unwrap();
    let rows: [(usize, [usize; 8]); 4] = [
        (4, [1, 0, 0, 0, 1, 0, 0, 0]),
        (5, [1, 1, 1, 0, 1, 0, 1, 0]),
        (6, [2, 1, 1, 1, 1, 1, 1, 1]),
        (7, [2, 2, 2, 2, 2, 2, 1, 1]),
    ];
    for (k, expected) in rows {
        let fine = enumerate_fine_nodes(&sub, k).unwrap();
        let got = select_coarse_nodes(&fine, k).interior_per_triangle;
        if got != expected {
            return Err(format!("k={k}: got {got:?}, expected {expected:?}"));
        }
    }
    Ok("k=4..7 rows match".into())
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 polynomial reproduction", Box::new(reproduction)),
        ("2 patch test", Box::new(patch)),
        ("3 EOC distorted k=1..4", Box::new(|| eoc_windows(Family::Distorted { seed: 1, amplitude: 0.2 }, 1..=4, 4, standard_window))),
        ("4 EOC concave k=1..3", Box::new(|| eoc_windows(Family::Concave, 1..=3, 4, standard_window))),
        (
            "5 EOC distorted k=5,6",
            Box::new(|| {
                eoc_windows(Family::Distorted { seed: 1, amplitude: 0.2 }, 5..=6, 3, |k| {
                    let k = k as f64;
                    ((k + 1.0 - 0.7, k + 1.0 + 0.7), (k - 0.7, k + 0.7))
                })
            }),
        ),
        ("6 min-norm oracle", Box::new(min_norm_oracle)),
        ("7 invariant suites", Box::new(invariants)),
        ("8 Table 1 regression", Box::new(table_one)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
