use super::fine::{FineNodeSet, NodeKind};
use super::monomials::ScaledMonomials;
use crate::dim_p;
use crate::geometry::Point2;
use nalgebra::DMatrix;

/// Split of the fine nodes into DOF-bearing (coarse) and slaved (virtual)
/// nodes. Coarse order: the boundary lattice, then `x_E` (k >= 3), then the
/// selected triangle-interior nodes, then any promoted nodes.
#[derive(Clone, Debug)]
pub struct NodeClassification {
    pub coarse: Vec<usize>,
    pub virtual_nodes: Vec<usize>,
    /// Heuristic interior coarse nodes per fan triangle (excluding `x_E`).
    pub interior_per_triangle: Vec<usize>,
    /// Virtual nodes moved to the coarse set after the heuristic.
    pub promoted: usize,
}

impl NodeClassification {
    pub fn num_dofs(&self) -> usize {
        self.coarse.len()
    }

    pub fn num_virtual(&self) -> usize {
        self.virtual_nodes.len()
    }

    /// Moves `virtual_nodes[position]` to the end of the coarse list.
    pub fn promote(&mut self, position: usize) {
        let node = self.virtual_nodes.remove(position);
        self.coarse.push(node);
        self.promoted += 1;
    }
}

/// Group-interleave distribution of `count` items over `slots` slots.
///
/// With `count >= slots` every slot gets `count / slots` and the first
/// `count % slots` get one more. Otherwise the slots are cut into `count`
/// contiguous groups, the last `slots % count` of them one longer, and the
/// first slot of every group gets one item.
pub fn distribute(count: usize, slots: usize) -> Vec<usize> {
    let mut out = vec![0; slots];
    if count == 0 || slots == 0 {
        return out;
    }
    if count >= slots {
        let (q, r) = (count / slots, count % slots);
        for (i, o) in out.iter_mut().enumerate() {
            *o = q + usize::from(i < r);
        }
    } else {
        let (q, r) = (slots / count, slots % count);
        let mut start = 0;
        for g in 0..count {
            out[start] = 1;
            start += if g < count - r { q } else { q + 1 };
        }
    }
    out
}

/// Heuristic coarse-node selection: the whole boundary lattice, `x_E` for
/// `k >= 3`, and `n_{k-3} - 1` more interior nodes spread over the fan
/// triangles and, inside each triangle, over its interior lattice.
pub fn select_coarse_nodes(fine: &FineNodeSet, k: usize) -> NodeClassification {
    let nt = fine.num_vertices();
    let mut coarse: Vec<usize> = (0..fine.num_boundary()).collect();
    let n_interior = dim_p(k as isize - 3);
    let mut interior_per_triangle = vec![0; nt];
    if k >= 3 {
        coarse.push(fine.center_index());
        interior_per_triangle = distribute(n_interior - 1, nt);
        for (t, &m) in interior_per_triangle.iter().enumerate() {
            let candidates: Vec<usize> = fine.triangle_interior(t).collect();
            let picks = distribute(m.min(candidates.len()), candidates.len());
            coarse.extend(candidates.iter().zip(&picks).filter(|(_, &p)| p > 0).map(|(&c, _)| c));
        }
    }
    let mut is_coarse = vec![false; fine.len()];
    for &c in &coarse {
        is_coarse[c] = true;
    }
    let virtual_nodes = (0..fine.len()).filter(|&i| !is_coarse[i]).collect();
    debug_assert!(fine.kinds().iter().zip(&is_coarse).all(|(kind, &c)| !kind.on_boundary() || c));
    debug_assert!(k < 3 || fine.kinds()[coarse[fine.num_boundary()]] == NodeKind::Center);
    NodeClassification {
        coarse,
        virtual_nodes,
        interior_per_triangle,
        promoted: 0,
    }
}

/// Smallest singular value of the column-normalized Vandermonde matrix of
/// `points` against the scaled monomials of degree `<= k`.
pub fn unisolvence_margin(points: &[Point2], k: usize) -> f64 {
    let n = dim_p(k as isize);
    if points.len() < n {
        return 0.0;
    }
    let mono = ScaledMonomials::fitted(points, k);
    let mut vander = DMatrix::from_fn(points.len(), n, |r, c| mono.eval(points[r])[c]);
    for mut col in vander.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    vander.singular_values().min()
}

/// True iff the values at `points` determine a polynomial of degree `<= k`.
pub fn verify_unisolvence(points: &[Point2], k: usize) -> bool {
    unisolvence_margin(points, k) > 1e-10
}
