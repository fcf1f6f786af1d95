use super::{Point2, Polygon, StarCenter};
use crate::{Error, Result};

/// Triangle `(x_E, v_j, v_j+1)` of the fan, with the affine map
/// `x = x_E + A x_hat` from the reference triangle `(0,0), (1,0), (0,1)`.
#[derive(Clone, Copy, Debug)]
pub struct FanTriangle {
    pub vertices: [Point2; 3],
    /// Columns of `A`: `v_j - x_E` and `v_j+1 - x_E`.
    pub jacobian: [Point2; 2],
    pub det: f64,
    /// Rows of `A^-1`.
    inverse: [Point2; 2],
}

impl FanTriangle {
    fn new(vertices: [Point2; 3]) -> Self {
        let e1 = vertices[1] - vertices[0];
        let e2 = vertices[2] - vertices[0];
        let det = e1.cross(e2);
        let inverse = [Point2::new(e2.y / det, -e2.x / det), Point2::new(-e1.y / det, e1.x / det)];
        Self {
            vertices,
            jacobian: [e1, e2],
            det,
            inverse,
        }
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det
    }

    /// Barycentric form, so reference vertices land exactly on the vertices.
    pub fn map(&self, xh: Point2) -> Point2 {
        let [a, b, c] = self.vertices;
        a * (1.0 - xh.x - xh.y) + b * xh.x + c * xh.y
    }

    pub fn inverse_map(&self, x: Point2) -> Point2 {
        let d = x - self.vertices[0];
        Point2::new(self.inverse[0].dot(d), self.inverse[1].dot(d))
    }

    /// Pushes a reference gradient forward: `A^-T g`.
    pub fn push_gradient(&self, g: Point2) -> Point2 {
        Point2::new(
            self.inverse[0].x * g.x + self.inverse[1].x * g.y,
            self.inverse[0].y * g.x + self.inverse[1].y * g.y,
        )
    }

    /// Mean-ratio quality in (0, 1], 1 for equilateral triangles.
    pub fn quality(&self) -> f64 {
        let [a, b, c] = self.vertices;
        let s = a.distance(b).powi(2) + b.distance(c).powi(2) + c.distance(a).powi(2);
        4.0 * 3f64.sqrt() * self.area() / s
    }
}

#[derive(Clone, Debug)]
pub struct SubTriangulation {
    pub center: StarCenter,
    pub triangles: Vec<FanTriangle>,
    diameter: f64,
}

impl SubTriangulation {
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Index of the first triangle containing `x` (within a relative
    /// tolerance), together with the reference coordinates of `x`.
    pub fn locate(&self, x: Point2) -> Option<(usize, Point2)> {
        let tol = 1e-10;
        self.triangles.iter().enumerate().find_map(|(j, t)| {
            let xh = t.inverse_map(x);
            (xh.x >= -tol && xh.y >= -tol && xh.x + xh.y <= 1.0 + tol).then_some((j, xh))
        })
    }
}

/// Fans the polygon around `center`: triangle `j` is `(x_E, v_j, v_j+1)`
/// with wrap-around.
pub fn build_subtriangulation(polygon: &Polygon, center: StarCenter) -> Result<SubTriangulation> {
    let v = polygon.vertices();
    let n = v.len();
    let h = polygon.diameter();
    let triangles: Vec<FanTriangle> = (0..n)
        .map(|j| FanTriangle::new([center.center, v[j], v[(j + 1) % n]]))
        .collect();
    if let Some((index, t)) = triangles.iter().enumerate().find(|(_, t)| t.area() < 1e-14 * h * h) {
        return Err(Error::DegenerateTriangle { index, area: t.area() });
    }
    Ok(SubTriangulation {
        center,
        triangles,
        diameter: h,
    })
}
