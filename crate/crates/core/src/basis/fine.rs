use crate::geometry::{Point2, SubTriangulation};
use crate::reference::ref_nodes;
use crate::{dim_p, Result};

/// Where a fine node sits in the fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// Polygon vertex `j`.
    Vertex(usize),
    /// Point `position / k` of the way along boundary edge `j -> j+1`.
    Edge { edge: usize, position: usize },
    /// The kernel center `x_E`.
    Center,
    /// Point `position / k` of the way from `x_E` to vertex `vertex`.
    Spoke { vertex: usize, position: usize },
    /// Strict interior of fan triangle `triangle`; `local` is the reference node index.
    Interior { triangle: usize, local: usize },
}

impl NodeKind {
    pub fn on_boundary(self) -> bool {
        matches!(self, NodeKind::Vertex(_) | NodeKind::Edge { .. })
    }
}

/// The glued Lagrange nodes of the whole fan.
///
/// Numbering: boundary lattice in vertex order (vertex `j` followed by the
/// `k-1` inner points of edge `j`), then `x_E`, then the `k-1` inner points
/// of each spoke, then the interior points of each fan triangle.
#[derive(Clone, Debug)]
pub struct FineNodeSet {
    order: usize,
    num_vertices: usize,
    nodes: Vec<Point2>,
    kinds: Vec<NodeKind>,
    /// Per fan triangle: reference node index -> fine index.
    triangle_nodes: Vec<Vec<usize>>,
}

impl FineNodeSet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn triangle_nodes(&self, triangle: usize) -> &[usize] {
        &self.triangle_nodes[triangle]
    }

    pub fn num_boundary(&self) -> usize {
        self.num_vertices * self.order
    }

    pub fn center_index(&self) -> usize {
        self.num_boundary()
    }

    /// Fine indices of the strict interior of fan triangle `t`, in
    /// reference order.
    pub fn triangle_interior(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        let k = self.order;
        self.triangle_nodes[t][3 * k..].iter().copied()
    }
}

/// Expected fine node count `[(2k - 1) + n_{k-3}] N_v + 1`.
pub fn fine_node_count(num_vertices: usize, k: usize) -> usize {
    (2 * k - 1 + dim_p(k as isize - 3)) * num_vertices + 1
}

pub fn enumerate_fine_nodes(sub: &SubTriangulation, k: usize) -> Result<FineNodeSet> {
    let layout = ref_nodes(k)?;
    let nv = sub.len();
    let verts: Vec<Point2> = sub.triangles.iter().map(|t| t.vertices[1]).collect();
    let center = sub.center.center;
    let kf = k as f64;

    let mut nodes = Vec::with_capacity(fine_node_count(nv, k));
    let mut kinds = Vec::with_capacity(nodes.capacity());
    for j in 0..nv {
        nodes.push(verts[j]);
        kinds.push(NodeKind::Vertex(j));
        for p in 1..k {
            nodes.push(verts[j].lerp(verts[(j + 1) % nv], p as f64 / kf));
            kinds.push(NodeKind::Edge { edge: j, position: p });
        }
    }
    nodes.push(center);
    kinds.push(NodeKind::Center);
    let spoke_start = nodes.len();
    for (j, &v) in verts.iter().enumerate() {
        for p in 1..k {
            nodes.push(center.lerp(v, p as f64 / kf));
            kinds.push(NodeKind::Spoke { vertex: j, position: p });
        }
    }
    let boundary = |j: usize, p: usize| j * k + p;
    let spoke = |j: usize, p: usize| spoke_start + j * (k - 1) + (p - 1);

    let mut triangle_nodes = Vec::with_capacity(nv);
    for (t, tri) in sub.triangles.iter().enumerate() {
        let next = (t + 1) % nv;
        let mut map = Vec::with_capacity(layout.len());
        map.push(nv * k);
        map.push(boundary(t, 0));
        map.push(boundary(next, 0));
        // reference edge (0,0)->(1,0) runs from x_E to v_t
        map.extend((1..k).map(|i| spoke(t, i)));
        // reference edge (1,0)->(0,1) is the polygon edge v_t -> v_t+1
        map.extend((1..k).map(|i| boundary(t, i)));
        // reference edge (0,1)->(0,0) runs from v_t+1 back to x_E
        map.extend((1..k).map(|i| spoke(next, k - i)));
        for local in layout.interior() {
            map.push(nodes.len());
            nodes.push(tri.map(layout.nodes()[local]));
            kinds.push(NodeKind::Interior { triangle: t, local });
        }
        triangle_nodes.push(map);
    }
    debug_assert_eq!(nodes.len(), fine_node_count(nv, k));
    Ok(FineNodeSet {
        order: k,
        num_vertices: nv,
        nodes,
        kinds,
        triangle_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_subtriangulation, star_center_lp, Polygon};

    fn fan(pts: &[(f64, f64)]) -> SubTriangulation {
        let p = Polygon::new(pts.iter().map(|&q| q.into()).collect()).unwrap();
        build_subtriangulation(&p, star_center_lp(&p).unwrap()).unwrap()
    }

    fn octagon() -> SubTriangulation {
        let pts: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 8.0;
                (t.cos(), t.sin())
            })
            .collect();
        fan(&pts)
    }

    /// Counts distinct lattice points of the fan by brute force.
    fn distinct_lattice_points(sub: &SubTriangulation, k: usize) -> usize {
        let layout = ref_nodes(k).unwrap();
        let mut pts: Vec<Point2> = Vec::new();
        for t in &sub.triangles {
            for &r in layout.nodes() {
                let x = t.map(r);
                if !pts.iter().any(|q| q.distance(x) < 1e-10) {
                    pts.push(x);
                }
            }
        }
        pts.len()
    }

    #[test]
    fn counts_match_formula_and_brute_force() {
        let tri = fan(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(enumerate_fine_nodes(&tri, 1).unwrap().len(), 4);
        let oct = octagon();
        // (2k - 1 + n_1) N_v + 1 = (7 + 3) 8 + 1
        assert_eq!(fine_node_count(8, 4), 81);
        assert_eq!(enumerate_fine_nodes(&oct, 4).unwrap().len(), 81);
        assert_eq!(distinct_lattice_points(&oct, 4), 81);
        let sq = fan(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let f = enumerate_fine_nodes(&sq, 2).unwrap();
        assert_eq!(f.len(), 13);
        assert_eq!(f.kinds().iter().filter(|k| matches!(k, NodeKind::Edge { .. })).count(), 4);
        assert_eq!(f.kinds().iter().filter(|k| matches!(k, NodeKind::Spoke { .. })).count(), 4);
        for k in 1..=7 {
            assert_eq!(distinct_lattice_points(&sq, k), enumerate_fine_nodes(&sq, k).unwrap().len());
        }
    }

    #[test]
    fn shared_nodes_are_glued() {
        let sub = octagon();
        for k in 1..=6 {
            let f = enumerate_fine_nodes(&sub, k).unwrap();
            let layout = ref_nodes(k).unwrap();
            for (t, tri) in sub.triangles.iter().enumerate() {
                for (local, &r) in layout.nodes().iter().enumerate() {
                    let fine = f.triangle_nodes(t)[local];
                    assert!(tri.map(r).distance(f.nodes()[fine]) < 1e-14, "k={k} t={t} local={local}");
                }
            }
        }
    }

    #[test]
    fn boundary_flags() {
        let f = enumerate_fine_nodes(&octagon(), 3).unwrap();
        assert_eq!(f.kinds().iter().filter(|k| k.on_boundary()).count(), 24);
        assert!(f.kinds()[..24].iter().all(|k| k.on_boundary()));
        assert_eq!(f.kinds()[f.center_index()], NodeKind::Center);
    }
}
