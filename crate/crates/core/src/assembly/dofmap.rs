use crate::basis::LocalBasis;
use crate::geometry::{Mesh, Point2};
use crate::{Error, Result};
use std::collections::HashMap;

/// Global numbering of the coarse degrees of freedom.
///
/// Vertex DOFs are keyed by mesh vertex, edge DOFs by the unordered vertex
/// pair plus position counted from the lower-numbered endpoint, and the
/// remaining DOFs of each element are private to it.
#[derive(Clone, Debug)]
pub struct DofMap {
    order: usize,
    cells: Vec<Vec<usize>>,
    coords: Vec<Point2>,
    boundary: Vec<bool>,
}

impl DofMap {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Local coarse index -> global id for one cell.
    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        &self.cells[cell]
    }

    pub fn coords(&self) -> &[Point2] {
        &self.coords
    }

    pub fn is_boundary(&self, dof: usize) -> bool {
        self.boundary[dof]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn num_boundary(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }
}

pub fn build_dof_map(mesh: &Mesh, bases: &[LocalBasis]) -> Result<DofMap> {
    assert_eq!(mesh.num_cells(), bases.len());
    let k = bases.first().map_or(1, LocalBasis::order);
    let tol = 1e-10 * mesh.h();
    let mut coords: Vec<Point2> = Vec::new();
    let mut boundary: Vec<bool> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut vertex_ids: HashMap<usize, usize> = HashMap::new();
    let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cells = Vec::with_capacity(bases.len());

    let mut fresh = |p: Point2, on_boundary: bool, cell: usize| {
        coords.push(p);
        boundary.push(on_boundary);
        owner.push(cell);
        coords.len() - 1
    };

    for (c, (cell, basis)) in mesh.cells().iter().zip(bases).enumerate() {
        if basis.order() != k {
            return Err(Error::invalid(format!("cell {c} has order {} but cell 0 has order {k}", basis.order())));
        }
        let points = basis.coarse_points();
        let nv = cell.len();
        let mut ids = Vec::with_capacity(points.len());
        for j in 0..nv {
            let (a, b) = (cell[j], cell[(j + 1) % nv]);
            let id = match vertex_ids.get(&a) {
                Some(&id) => id,
                None => {
                    let id = fresh(points[j * k], mesh.is_boundary_vertex(a), c);
                    vertex_ids.insert(a, id);
                    id
                }
            };
            ids.push(id);
            if k == 1 {
                continue;
            }
            let key = (a.min(b), a.max(b));
            let base = match edge_ids.get(&key) {
                Some(&base) => base,
                None => {
                    let on_boundary = mesh.is_boundary_edge(a, b);
                    let mut base = usize::MAX;
                    for p in 1..k {
                        let local = if a < b { p } else { k - p };
                        base = base.min(fresh(points[j * k + local], on_boundary, c));
                    }
                    edge_ids.insert(key, base);
                    base
                }
            };
            for p in 1..k {
                let offset = if a < b { p - 1 } else { k - 1 - p };
                ids.push(base + offset);
            }
        }
        for &p in &points[nv * k..] {
            ids.push(fresh(p, false, c));
        }
        cells.push(ids);
    }
    for (c, (ids, basis)) in cells.iter().zip(bases).enumerate() {
        for (&id, p) in ids.iter().zip(basis.coarse_points()) {
            let distance = coords[id].distance(p);
            if distance > tol {
                return Err(Error::EdgeMismatch { first: owner[id], second: c, distance });
            }
        }
    }
    Ok(DofMap { order: k, cells, coords, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::build_bases;
    use crate::meshgen::{gen_cartesian, gen_structured_concave};

    fn two_squares() -> Mesh {
        let v = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0)];
        Mesh::new(v.iter().map(|&p| p.into()).collect(), vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]]).unwrap()
    }

    fn dof_map(mesh: &Mesh, k: usize) -> DofMap {
        build_dof_map(mesh, &build_bases(mesh, k).unwrap()).unwrap()
    }

    #[test]
    fn counts_on_two_squares() {
        let mesh = two_squares();
        assert_eq!(dof_map(&mesh, 1).len(), 6);
        let m2 = dof_map(&mesh, 2);
        assert_eq!(m2.len(), 13);
        assert_eq!(m2.num_boundary(), 12);
        // k=3: 6 vertices, 7 edges with 2 points, 1 interior per cell
        assert_eq!(dof_map(&mesh, 3).len(), 6 + 14 + 2);
    }

    #[test]
    fn single_octagon_k4() {
        let pts: Vec<Point2> = (0..8)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / 8.0;
                Point2::new(t.cos(), t.sin())
            })
            .collect();
        let mesh = Mesh::new(pts, vec![(0..8).collect()]).unwrap();
        let map = dof_map(&mesh, 4);
        assert_eq!(map.len(), 35);
        assert_eq!(map.num_boundary(), 32);
    }

    #[test]
    fn shared_dofs_coincide_geometrically() {
        for mesh in [gen_cartesian(3), gen_structured_concave(2)] {
            for k in 1..=4 {
                let bases = build_bases(&mesh, k).unwrap();
                let map = build_dof_map(&mesh, &bases).unwrap();
                let mut seen = vec![0usize; map.len()];
                for (c, b) in bases.iter().enumerate() {
                    for (&id, p) in map.cell_dofs(c).iter().zip(b.coarse_points()) {
                        assert!(map.coords()[id].distance(p) < 1e-12);
                        seen[id] += 1;
                    }
                }
                for (id, &n) in seen.iter().enumerate() {
                    if !map.is_boundary(id) {
                        assert!(n >= 1);
                    }
                }
                // Euler-type count for quads: vertices + (k-1) edges + interior
                if mesh.cells().iter().all(|c| c.len() == 4) {
                    let n = 3usize;
                    let edges = 2 * n * (n + 1);
                    let interior = crate::dim_p(k as isize - 3) * n * n;
                    assert_eq!(map.len(), (n + 1) * (n + 1) + (k - 1) * edges + interior, "k={k}");
                }
            }
        }
    }

    #[test]
    fn hanging_vertex_dofs_are_shared() {
        // big square on the left, two small squares on the right
        let v = [(0.0, 0.0), (1.0, 0.0), (1.5, 0.0), (0.0, 1.0), (1.0, 1.0), (1.5, 1.0), (1.0, 0.5), (1.5, 0.5)];
        let cells = vec![vec![0, 1, 4, 3], vec![1, 2, 7, 6], vec![6, 7, 5, 4]];
        let mesh = Mesh::new(v.iter().map(|&p| p.into()).collect(), cells).unwrap();
        let map = dof_map(&mesh, 2);
        // 8 vertices + 10 edges
        assert_eq!(map.len(), 18);
        assert!(!map.is_boundary(map.cell_dofs(0)[4]));
    }

    #[test]
    fn mismatched_lattice_is_reported() {
        let mesh = two_squares();
        let mut bases = build_bases(&mesh, 2).unwrap();
        let shifted = crate::geometry::Polygon::new(vec![
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0 + 1e-6),
        ])
        .unwrap();
        bases[1] = LocalBasis::new(&shifted, 2).unwrap();
        assert!(matches!(build_dof_map(&mesh, &bases), Err(Error::EdgeMismatch { first: 0, second: 1, .. })));
    }
}
