use super::{twice_signed_area, Point2};
use crate::{Error, Result};

/// A polygon edge with its unit outward normal `normal` and offset `offset`,
/// so that `normal . x <= offset` is the inner half-plane.
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub start: Point2,
    pub end: Point2,
    pub normal: Point2,
    pub offset: f64,
    pub length: f64,
}

/// A simple polygon with counterclockwise vertices.
///
/// Collinear vertices are kept: a hanging node is an ordinary vertex here.
#[derive(Clone, Debug)]
pub struct Polygon {
    vertices: Vec<Point2>,
    edges: Vec<Edge>,
    diameter: f64,
    area: f64,
    reversed: bool,
}

impl Polygon {
    /// Validates and builds a polygon. Clockwise input is reversed and the
    /// fact is recorded in [`Polygon::was_reversed`].
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::invalid(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("non-finite vertex ({}, {})", p.x, p.y)));
        }
        let diameter = diameter_of(&vertices);
        if diameter <= 0.0 {
            return Err(Error::invalid("polygon has zero diameter"));
        }
        for i in 0..n {
            if vertices[i].distance(vertices[(i + 1) % n]) <= 1e-14 * diameter {
                return Err(Error::invalid(format!("consecutive vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        let twice_area = twice_signed_area(&vertices);
        if twice_area.abs() <= 1e-14 * diameter * diameter {
            return Err(Error::invalid("polygon has zero area"));
        }
        let reversed = twice_area < 0.0;
        if reversed {
            vertices.reverse();
        }
        if let Some((a, b)) = first_self_intersection(&vertices, diameter) {
            return Err(Error::invalid(format!("edges {a} and {b} intersect")));
        }
        let edges = (0..n)
            .map(|i| {
                let start = vertices[i];
                let end = vertices[(i + 1) % n];
                let d = end - start;
                let length = d.norm();
                let normal = Point2::new(d.y / length, -d.x / length);
                // average both endpoints so the offset is symmetric in them
                let offset = 0.5 * (normal.dot(start) + normal.dot(end));
                Edge { start, end, normal, offset, length }
            })
            .collect();
        Ok(Self {
            vertices,
            edges,
            diameter,
            area: 0.5 * twice_area.abs(),
            reversed,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn was_reversed(&self) -> bool {
        self.reversed
    }

    pub fn vertex_centroid(&self) -> Point2 {
        let s = self.vertices.iter().fold(Point2::default(), |acc, &p| acc + p);
        s * (1.0 / self.vertices.len() as f64)
    }

    /// Signed distance from `x` to the nearest edge line, positive inside
    /// the kernel: `min_e (b_e - n_e . x)`.
    pub fn kernel_depth(&self, x: Point2) -> f64 {
        self.edges
            .iter()
            .map(|e| e.offset - e.normal.dot(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// True if every vertex has a left turn (collinear vertices allowed).
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[(i + n - 1) % n];
            let b = self.vertices[i];
            let c = self.vertices[(i + 1) % n];
            (b - a).cross(c - b) >= -1e-14 * self.diameter * self.diameter
        })
    }

    /// Even-odd point containment; boundary points count as inside within `tol`.
    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        if self.edges.iter().any(|e| point_segment_distance(x, e.start, e.end) <= tol) {
            return true;
        }
        let mut inside = false;
        for e in &self.edges {
            let (a, b) = (e.start, e.end);
            if (a.y > x.y) != (b.y > x.y) {
                let t = (x.y - a.y) / (b.y - a.y);
                if x.x < a.x + t * (b.x - a.x) {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub fn diameter_of(points: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            d = d.max(p.distance(q));
        }
    }
    d
}

pub(crate) fn point_segment_distance(x: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    let t = if len2 > 0.0 { ((x - a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    x.distance(a + d * t)
}

fn first_self_intersection(v: &[Point2], diameter: f64) -> Option<(usize, usize)> {
    let n = v.len();
    let tol = 1e-13 * diameter;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // adjacent edges may only share their common vertex; reject fold-backs
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = p - shared;
                let w = q - shared;
                if u.cross(w).abs() <= tol * (u.norm() + w.norm()) && u.dot(w) > 0.0 {
                    return Some((i, j));
                }
                continue;
            }
            if segments_touch(a, b, c, d, tol) {
                return Some((i, j));
            }
        }
    }
    None
}

fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
        || point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
}
