use super::{Point2, Polygon};
use crate::{Error, Result};
use serde::Serialize;

/// A kernel point `center` together with the radius of a disk around it
/// that lies in the kernel of the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarCenter {
    pub center: Point2,
    pub radius: f64,
}

/// Chebyshev center of the polygon kernel: maximize `r` subject to
/// `n_e . x + r <= b_e` for every edge and `r <= h_E`.
///
/// The LP has three unknowns, so every vertex of the feasible set is the
/// solution of three active constraints; all triples are enumerated and the
/// feasible one with the largest `r` wins. Ties go to the lexicographically
/// smallest `(x, y)`.
pub fn star_center_lp(polygon: &Polygon) -> Result<StarCenter> {
    let h = polygon.diameter();
    // work relative to the vertex centroid, scaled by h, for conditioning
    let origin = polygon.vertex_centroid();
    let mut rows: Vec<[f64; 4]> = polygon
        .edges()
        .iter()
        .map(|e| {
            let b = (e.offset - e.normal.dot(origin)) / h;
            [e.normal.x, e.normal.y, 1.0, b]
        })
        .collect();
    rows.push([0.0, 0.0, 1.0, 1.0]);

    let feas_tol = 1e-12;
    let tie_tol = 1e-12;
    let mut best: Option<[f64; 3]> = None;
    let m = rows.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let Some(cand) = solve3(&rows[i], &rows[j], &rows[l]) else {
                    continue;
                };
                if !rows.iter().all(|r| r[0] * cand[0] + r[1] * cand[1] + r[2] * cand[2] <= r[3] + feas_tol) {
                    continue;
                }
                best = Some(match best {
                    None => cand,
                    Some(b) if cand[2] > b[2] + tie_tol => cand,
                    Some(b) if (cand[2] - b[2]).abs() <= tie_tol && (cand[0], cand[1]) < (b[0], b[1]) => cand,
                    Some(b) => b,
                });
            }
        }
    }
    let radius = best.map_or(0.0, |b| b[2] * h);
    match best {
        Some(b) if radius > 1e-10 * h => Ok(StarCenter {
            center: origin + Point2::new(b[0], b[1]) * h,
            radius,
        }),
        _ => Err(Error::NotStarShaped { radius, diameter: h }),
    }
}

/// Alternative center: the point minimizing the sum of squared fan-triangle
/// areas, written as an affine combination of the vertices.
///
/// The area of the fan triangle on edge `(v_j, v_j+1)` is affine in the
/// center `x`, `2 A_j(x) = v_j x v_j+1 - x . g_j` with `g_j = (dy, -dx)`, so
/// the minimizer solves 2x2 normal equations.
pub fn star_center_area_weights(polygon: &Polygon) -> Result<StarCenter> {
    let h = polygon.diameter();
    let origin = polygon.vertex_centroid();
    let v: Vec<Point2> = polygon.vertices().iter().map(|&p| (p - origin) * (1.0 / h)).collect();
    let n = v.len();
    let (mut a11, mut a12, mut a22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for j in 0..n {
        let (p, q) = (v[j], v[(j + 1) % n]);
        let d = q - p;
        let g = Point2::new(d.y, -d.x);
        let c = p.cross(q);
        a11 += g.x * g.x;
        a12 += g.x * g.y;
        a22 += g.y * g.y;
        r1 += c * g.x;
        r2 += c * g.y;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() <= 1e-14 * (a11 * a22).abs().max(1e-300) {
        return Err(Error::NotStarShaped { radius: 0.0, diameter: h });
    }
    let local = Point2::new((r1 * a22 - r2 * a12) / det, (a11 * r2 - a12 * r1) / det);
    let center = origin + local * h;
    let radius = polygon.kernel_depth(center).min(h);
    if radius <= 1e-10 * h {
        return Err(Error::NotStarShaped { radius, diameter: h });
    }
    Ok(StarCenter { center, radius })
}

fn solve3(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let base = [[a[0], a[1], a[2]], [b[0], b[1], b[2]], [c[0], c[1], c[2]]];
    let d = det(base);
    if d.abs() < 1e-12 {
        return None;
    }
    let rhs = [a[3], b[3], c[3]];
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut m = base;
        for row in 0..3 {
            m[row][col] = rhs[row];
        }
        *o = det(m) / d;
    }
    Some(out)
}
