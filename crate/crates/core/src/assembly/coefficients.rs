use crate::geometry::Point2;
use std::f64::consts::PI;

pub type Tensor = [[f64; 2]; 2];

/// Data of `-div(D grad u) + gamma u = f`.
pub trait Coefficients: Sync {
    /// Symmetric, uniformly positive definite.
    fn diffusion(&self, x: Point2) -> Tensor;
    /// Non-negative.
    fn reaction(&self, x: Point2) -> f64;
    fn load(&self, x: Point2) -> f64;
}

/// A field with known value and gradient, used for boundary data and
/// error measurement.
pub trait ExactSolution: Sync {
    fn value(&self, x: Point2) -> f64;
    fn gradient(&self, x: Point2) -> Point2;
}

/// `D = [[1 + y^2, -xy], [-xy, 1 + x^2]]`, `gamma = xy`, with exact
/// solution `u = sin(2 pi x) sin(2 pi y)` on the unit square.
#[derive(Clone, Copy, Debug, Default)]
pub struct VariableDiffusion;

impl Coefficients for VariableDiffusion {
    fn diffusion(&self, p: Point2) -> Tensor {
        [[1.0 + p.y * p.y, -p.x * p.y], [-p.x * p.y, 1.0 + p.x * p.x]]
    }

    fn reaction(&self, p: Point2) -> f64 {
        p.x * p.y
    }

    fn load(&self, p: Point2) -> f64 {
        let (x, y) = (p.x, p.y);
        let (s, c) = ((2.0 * PI * x).sin_cos(), (2.0 * PI * y).sin_cos());
        let u = s.0 * c.0;
        let ux = 2.0 * PI * s.1 * c.0;
        let uy = 2.0 * PI * s.0 * c.1;
        let uxx = -4.0 * PI * PI * u;
        let uyy = uxx;
        let uxy = 4.0 * PI * PI * s.1 * c.1;
        let div = (1.0 + y * y) * uxx + (1.0 + x * x) * uyy - 2.0 * x * y * uxy - y * uy - x * ux;
        -div + x * y * u
    }
}

impl ExactSolution for VariableDiffusion {
    fn value(&self, p: Point2) -> f64 {
        (2.0 * PI * p.x).sin() * (2.0 * PI * p.y).sin()
    }

    fn gradient(&self, p: Point2) -> Point2 {
        let (s, c) = ((2.0 * PI * p.x).sin_cos(), (2.0 * PI * p.y).sin_cos());
        Point2::new(2.0 * PI * s.1 * c.0, 2.0 * PI * s.0 * c.1)
    }
}

/// `u = sum c x^a y^b` with constant `D` and no reaction; the load is
/// `-div(D grad u)`.
#[derive(Clone, Debug)]
pub struct PolynomialProblem {
    pub diffusion: Tensor,
    pub terms: Vec<(f64, u32, u32)>,
}

fn pow(x: f64, e: u32, d: u32) -> f64 {
    // d-th derivative of x^e
    if d > e {
        return 0.0;
    }
    let factor: f64 = (0..d).map(|i| (e - i) as f64).product();
    factor * x.powi((e - d) as i32)
}

impl PolynomialProblem {
    fn derivative(&self, p: Point2, dx: u32, dy: u32) -> f64 {
        self.terms.iter().map(|&(c, a, b)| c * pow(p.x, a, dx) * pow(p.y, b, dy)).sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|&(_, a, b)| a + b).max().unwrap_or(0)
    }
}

impl Coefficients for PolynomialProblem {
    fn diffusion(&self, _: Point2) -> Tensor {
        self.diffusion
    }

    fn reaction(&self, _: Point2) -> f64 {
        0.0
    }

    fn load(&self, p: Point2) -> f64 {
        let d = self.diffusion;
        -(d[0][0] * self.derivative(p, 2, 0) + (d[0][1] + d[1][0]) * self.derivative(p, 1, 1) + d[1][1] * self.derivative(p, 0, 2))
    }
}

impl ExactSolution for PolynomialProblem {
    fn value(&self, p: Point2) -> f64 {
        self.derivative(p, 0, 0)
    }

    fn gradient(&self, p: Point2) -> Point2 {
        Point2::new(self.derivative(p, 1, 0), self.derivative(p, 0, 1))
    }
}
