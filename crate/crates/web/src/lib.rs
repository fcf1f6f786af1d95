//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Polygons cross the boundary as flat `[x0, y0, x1, y1, ...]` arrays and
//! structured results as JSON strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zfem::basis::LocalBasis;
use zfem::geometry::{Point2, Polygon};
use zfem::harness::{eoc, solve_model_problem, ConvergenceRecord, EocReport, Family};
use zfem::meshgen::gallery;

fn polygon_from(coords: &[f64]) -> zfem::Result<Polygon> {
    if !coords.len().is_multiple_of(2) {
        return Err(zfem::Error::Validation(vec!["odd number of coordinates".into()]));
    }
    Polygon::new(coords.chunks(2).map(|c| Point2::new(c[0], c[1])).collect())
}

fn js(e: zfem::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
pub struct ElementView {
    pub vertices: Vec<Point2>,
    pub center: Point2,
    pub radius: f64,
    pub triangles: Vec<[Point2; 3]>,
    pub coarse: Vec<Point2>,
    pub virtual_nodes: Vec<Point2>,
    pub ndof: usize,
    pub err0: f64,
    pub errgrad: f64,
}

/// Kernel center, fan and node classification of a polygon at order `k`.
pub fn element_view(coords: &[f64], k: usize) -> zfem::Result<ElementView> {
    let polygon = polygon_from(coords)?;
    let basis = LocalBasis::new(&polygon, k)?;
    let (err0, errgrad) = basis.reproduction_errors(2 * k + 4)?;
    let center = basis.center();
    Ok(ElementView {
        vertices: basis.polygon().vertices().to_vec(),
        center: center.center,
        radius: center.radius,
        triangles: basis.subtriangulation().triangles.iter().map(|t| t.vertices).collect(),
        coarse: basis.coarse_points(),
        virtual_nodes: basis.virtual_points(),
        ndof: basis.num_dofs(),
        err0,
        errgrad,
    })
}

/// Values of shape function `dof` on an `nx x ny` grid over the bounding
/// box, row by row from the bottom; NaN outside the polygon.
pub fn basis_samples(coords: &[f64], k: usize, dof: usize, nx: usize, ny: usize) -> zfem::Result<Vec<f64>> {
    let polygon = polygon_from(coords)?;
    let basis = LocalBasis::new(&polygon, k)?;
    if dof >= basis.num_dofs() {
        return Err(zfem::Error::Validation(vec![format!("dof {dof} out of range 0..{}", basis.num_dofs())]));
    }
    let v = polygon.vertices();
    let (lo, hi) = v.iter().fold((v[0], v[0]), |(lo, hi), p| (Point2::new(lo.x.min(p.x), lo.y.min(p.y)), Point2::new(hi.x.max(p.x), hi.y.max(p.y))));
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let x = Point2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / nx as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / ny as f64,
            );
            out.push(basis.eval(x).map(|(phi, _)| phi[dof]).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
pub struct StudyView {
    pub records: Vec<ConvergenceRecord>,
    pub eoc: Option<EocReport>,
}

/// Small convergence study for the variable-coefficient model problem.
/// Wall time is not measured, the browser build has no clock.
pub fn study(family: &str, k: usize, levels: usize, seed: u64) -> zfem::Result<StudyView> {
    let family = family.parse::<Family>()?.with_seed(seed);
    let mut records = Vec::new();
    for level in 0..levels {
        let mesh = family.mesh(level)?;
        let r = solve_model_problem(&mesh, k, 2 * k + 2)?;
        records.push(ConvergenceRecord {
            family: family.name().to_string(),
            k,
            level,
            h: mesh.h(),
            ndof: r.ndof,
            err0: r.err0,
            errgrad: r.errgrad,
            seconds: 0.0,
        });
    }
    let eoc = eoc(&records).ok();
    Ok(StudyView { records, eoc })
}

#[wasm_bindgen]
pub fn gallery_polygon(name: &str) -> Result<Vec<f64>, JsError> {
    let p = gallery(name).map_err(js)?;
    Ok(p.vertices().iter().flat_map(|v| [v.x, v.y]).collect())
}

#[wasm_bindgen]
pub fn analyze_polygon(coords: &[f64], k: usize) -> Result<String, JsError> {
    let view = element_view(coords, k).map_err(js)?;
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

#[wasm_bindgen]
pub fn sample_basis(coords: &[f64], k: usize, dof: usize, nx: usize, ny: usize) -> Result<Vec<f64>, JsError> {
    basis_samples(coords, k, dof, nx, ny).map_err(js)
}

#[wasm_bindgen]
pub fn run_study(family: &str, k: usize, levels: usize, seed: u64) -> Result<String, JsError> {
    let view = study(family, k, levels, seed).map_err(js)?;
    Ok(serde_json::to_string(&view).expect("view serializes"))
}
