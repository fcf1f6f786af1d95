use super::polygon::point_segment_distance;
use super::{build_subtriangulation, star_center_lp, twice_signed_area, Point2, Polygon};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// An immutable conforming polygonal mesh.
///
/// A vertex lying inside another cell's edge (a hanging node) is inserted
/// into that cell's vertex list on construction, so afterwards every
/// interior edge is shared by exactly two cells with matching endpoints.
#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Point2>,
    cells: Vec<Vec<usize>>,
    polygons: Vec<Polygon>,
    boundary_vertex: Vec<bool>,
    /// Directed edge `(a, b)` of some cell -> owning cell.
    edge_owner: HashMap<(usize, usize), usize>,
    h: f64,
    reoriented: Vec<usize>,
}

impl Mesh {
    pub fn new(vertices: Vec<Point2>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut problems = Vec::new();
        for (i, p) in vertices.iter().enumerate() {
            if !p.is_finite() {
                problems.push(format!("vertex {i} is not finite"));
            }
        }
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                problems.push(format!("cell {c} has {} vertices", cell.len()));
            }
            if let Some(&bad) = cell.iter().find(|&&i| i >= vertices.len()) {
                problems.push(format!("cell {c} references missing vertex {bad}"));
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                problems.push(format!("cell {c} repeats vertex {}", w[0]));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }

        let mut cells = cells;
        let mut reoriented = Vec::new();
        for (c, cell) in cells.iter_mut().enumerate() {
            let pts: Vec<Point2> = cell.iter().map(|&i| vertices[i]).collect();
            if twice_signed_area(&pts) < 0.0 {
                cell.reverse();
                reoriented.push(c);
            }
        }

        insert_hanging_vertices(&vertices, &mut cells);

        let mut edge_owner = HashMap::new();
        for (c, cell) in cells.iter().enumerate() {
            for (a, b) in cell_edges(cell) {
                if let Some(other) = edge_owner.insert((a, b), c) {
                    problems.push(format!("cells {other} and {c} overlap along edge ({a}, {b})"));
                }
            }
        }
        let mut polygons = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            match Polygon::new(cell.iter().map(|&i| vertices[i]).collect()) {
                Ok(p) => polygons.push(p),
                Err(e) => problems.push(format!("cell {c}: {e}")),
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }

        let mut boundary_vertex = vec![false; vertices.len()];
        for &(a, b) in edge_owner.keys() {
            if !edge_owner.contains_key(&(b, a)) {
                boundary_vertex[a] = true;
                boundary_vertex[b] = true;
            }
        }
        let h = polygons.iter().map(Polygon::diameter).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            cells,
            polygons,
            boundary_vertex,
            edge_owner,
            h,
            reoriented,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn polygon(&self, cell: usize) -> &Polygon {
        &self.polygons[cell]
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// Maximum cell diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    /// Cells whose input ordering was clockwise and got reversed.
    pub fn reoriented_cells(&self) -> &[usize] {
        &self.reoriented
    }

    /// True if the directed edge `(a, b)` of some cell has no neighbor.
    pub fn is_boundary_edge(&self, a: usize, b: usize) -> bool {
        self.edge_owner.contains_key(&(a, b)) && !self.edge_owner.contains_key(&(b, a))
    }

    /// The cell on the other side of the directed edge `(a, b)`.
    pub fn neighbor(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_owner.get(&(b, a)).copied()
    }

    pub fn total_area(&self) -> f64 {
        self.polygons.iter().map(Polygon::area).sum()
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        self.vertices.iter().fold(
            (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), p| (Point2::new(lo.x.min(p.x), lo.y.min(p.y)), Point2::new(hi.x.max(p.x), hi.y.max(p.y))),
        )
    }
}

fn cell_edges(cell: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..cell.len()).map(move |i| (cell[i], cell[(i + 1) % cell.len()]))
}

/// Splits unmatched edges at vertices of other unmatched edges lying on them.
fn insert_hanging_vertices(vertices: &[Point2], cells: &mut [Vec<usize>]) {
    let mut directed = std::collections::HashSet::new();
    for cell in cells.iter() {
        directed.extend(cell_edges(cell));
    }
    let unmatched: Vec<(usize, usize)> = directed.iter().copied().filter(|&(a, b)| !directed.contains(&(b, a))).collect();
    if unmatched.is_empty() {
        return;
    }
    let mut candidates: Vec<usize> = unmatched.iter().flat_map(|&(a, b)| [a, b]).collect();
    candidates.sort_unstable();
    candidates.dedup();

    for cell in cells.iter_mut() {
        let mut out = Vec::with_capacity(cell.len());
        for (a, b) in cell_edges(cell) {
            out.push(a);
            if directed.contains(&(b, a)) {
                continue;
            }
            let (pa, pb) = (vertices[a], vertices[b]);
            let len = pa.distance(pb);
            let mut inner: Vec<(f64, usize)> = candidates
                .iter()
                .filter(|&&c| c != a && c != b)
                .filter_map(|&c| {
                    let p = vertices[c];
                    let t = (p - pa).dot(pb - pa) / (len * len);
                    (t > 1e-10 && t < 1.0 - 1e-10 && point_segment_distance(p, pa, pb) <= 1e-10 * len).then_some((t, c))
                })
                .collect();
            inner.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(inner.into_iter().map(|(_, c)| c));
        }
        *cell = out;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub cell: usize,
    pub num_vertices: usize,
    /// `min_e |e| / h_E`.
    pub edge_ratio: f64,
    /// `r_E / h_E`, zero when the cell is not star-shaped.
    pub radius_ratio: f64,
    /// Worst fan-triangle mean-ratio quality, zero without a fan.
    pub min_triangle_quality: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeshReport {
    pub rho: f64,
    pub cells: Vec<CellReport>,
    /// `|sum of cell areas - bounding box area| / bounding box area`.
    pub coverage_error: f64,
    pub reoriented: Vec<usize>,
    pub passed: bool,
}

impl MeshReport {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| !c.passed)
    }

    pub fn worst_edge_ratio(&self) -> f64 {
        self.cells.iter().map(|c| c.edge_ratio).fold(f64::INFINITY, f64::min)
    }

    pub fn worst_radius_ratio(&self) -> f64 {
        self.cells.iter().map(|c| c.radius_ratio).fold(f64::INFINITY, f64::min)
    }
}

/// Checks `|e| >= rho h_E` and `r_E >= rho h_E` for every cell.
pub fn validate_mesh_assumptions(mesh: &Mesh, rho: f64) -> MeshReport {
    let cells: Vec<CellReport> = mesh
        .polygons()
        .iter()
        .enumerate()
        .map(|(cell, p)| {
            let h = p.diameter();
            let edge_ratio = p.edges().iter().map(|e| e.length / h).fold(f64::INFINITY, f64::min);
            let (radius_ratio, min_triangle_quality) = match star_center_lp(p) {
                Ok(c) => {
                    let q = build_subtriangulation(p, c)
                        .map(|s| s.triangles.iter().map(|t| t.quality()).fold(f64::INFINITY, f64::min))
                        .unwrap_or(0.0);
                    (c.radius / h, q)
                }
                Err(_) => (0.0, 0.0),
            };
            CellReport {
                cell,
                num_vertices: p.num_vertices(),
                edge_ratio,
                radius_ratio,
                min_triangle_quality,
                passed: edge_ratio >= rho && radius_ratio >= rho,
            }
        })
        .collect();
    let (lo, hi) = mesh.bounding_box();
    let box_area = (hi.x - lo.x) * (hi.y - lo.y);
    let coverage_error = (mesh.total_area() - box_area).abs() / box_area;
    let passed = cells.iter().all(|c| c.passed) && coverage_error <= 1e-10;
    MeshReport {
        rho,
        cells,
        coverage_error,
        reoriented: mesh.reoriented_cells().to_vec(),
        passed,
    }
}
