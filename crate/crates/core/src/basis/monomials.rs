use crate::dim_p;
use crate::geometry::Point2;

/// `m_alpha(x) = ((x - x_E) / h_E)^alpha` ordered by total degree, then by
/// decreasing power of `x`: `1, x, y, x^2, xy, y^2, ...`.
#[derive(Clone, Debug)]
pub struct ScaledMonomials {
    center: Point2,
    diameter: f64,
    exponents: Vec<(u32, u32)>,
}

impl ScaledMonomials {
    pub fn new(center: Point2, diameter: f64, k: usize) -> Self {
        let mut exponents = Vec::with_capacity(dim_p(k as isize));
        for d in 0..=k as u32 {
            for a in (0..=d).rev() {
                exponents.push((a, d - a));
            }
        }
        Self { center, diameter, exponents }
    }

    /// Centered at the point average, scaled by the point-set diameter.
    pub fn fitted(points: &[Point2], k: usize) -> Self {
        let n = points.len().max(1) as f64;
        let center = points.iter().fold(Point2::default(), |a, &p| a + p) * (1.0 / n);
        let diameter = crate::geometry::polygon_diameter(points).max(f64::MIN_POSITIVE);
        Self::new(center, diameter, k)
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn eval(&self, x: Point2) -> Vec<f64> {
        let s = (x - self.center) * (1.0 / self.diameter);
        self.exponents.iter().map(|&(a, b)| s.x.powi(a as i32) * s.y.powi(b as i32)).collect()
    }

    pub fn eval_one(&self, alpha: usize, x: Point2) -> f64 {
        let (a, b) = self.exponents[alpha];
        let s = (x - self.center) * (1.0 / self.diameter);
        s.x.powi(a as i32) * s.y.powi(b as i32)
    }

    pub fn grad_one(&self, alpha: usize, x: Point2) -> Point2 {
        let (a, b) = self.exponents[alpha];
        let s = (x - self.center) * (1.0 / self.diameter);
        let px = |e: u32| if e == 0 { 0.0 } else { e as f64 * s.x.powi(e as i32 - 1) };
        let py = |e: u32| if e == 0 { 0.0 } else { e as f64 * s.y.powi(e as i32 - 1) };
        Point2::new(px(a) * s.y.powi(b as i32), s.x.powi(a as i32) * py(b)) * (1.0 / self.diameter)
    }
}
