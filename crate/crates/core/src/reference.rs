//! Lagrange elements of order `k` on the reference triangle
//! `(0,0), (1,0), (0,1)` with equispaced nodes, and triangle quadrature.
//!
//! Lattice point `(a, b)` sits at `(a/k, b/k)`; with barycentric
//! coordinates `l1 = x`, `l2 = y`, `l3 = 1 - x - y` and `c = k - a - b` the
//! basis function is `P_a(l1) P_b(l2) P_c(l3)` where
//! `P_j(t) = prod_{m<j} (k t - m) / (j - m)`.
//!
//! Node order: the three vertices `(0,0), (1,0), (0,1)`, then the `k-1`
//! inner points of edge `(0,0)->(1,0)`, of edge `(1,0)->(0,1)` and of edge
//! `(0,1)->(0,0)`, each in traversal order, then the interior points row by
//! row (`b` ascending, then `a` ascending).

use crate::geometry::Point2;
use crate::{dim_p, Error, Result};

pub const MAX_ORDER: usize = 10;
pub const MAX_QUADRATURE_DEGREE: usize = 25;

#[derive(Clone, Debug)]
pub struct RefNodeLayout {
    order: usize,
    lattice: Vec<(usize, usize)>,
    nodes: Vec<Point2>,
}

impl RefNodeLayout {
    pub fn order(&self) -> usize {
        self.order
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

    pub fn lattice(&self) -> &[(usize, usize)] {
        &self.lattice
    }

    /// Node indices along reference edge `e` (0: bottom, 1: hypotenuse,
    /// 2: left), endpoints included, in traversal order.
    pub fn edge(&self, e: usize) -> Vec<usize> {
        let k = self.order;
        let (first, last) = [(0, 1), (1, 2), (2, 0)][e];
        let mut out = Vec::with_capacity(k + 1);
        out.push(first);
        out.extend((0..k - 1).map(|i| 3 + e * (k - 1) + i));
        out.push(last);
        out
    }

    /// Indices of the strictly interior nodes.
    pub fn interior(&self) -> std::ops::Range<usize> {
        3 * self.order..self.nodes.len()
    }
}

pub fn ref_nodes(k: usize) -> Result<RefNodeLayout> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::UnsupportedOrder(k));
    }
    let mut lattice = vec![(0, 0), (k, 0), (0, k)];
    lattice.extend((1..k).map(|i| (i, 0)));
    lattice.extend((1..k).map(|i| (k - i, i)));
    lattice.extend((1..k).map(|i| (0, k - i)));
    for b in 1..k {
        for a in 1..k - b {
            lattice.push((a, b));
        }
    }
    debug_assert_eq!(lattice.len(), dim_p(k as isize));
    let kf = k as f64;
    let nodes = lattice.iter().map(|&(a, b)| Point2::new(a as f64 / kf, b as f64 / kf)).collect();
    Ok(RefNodeLayout { order: k, lattice, nodes })
}

/// Lagrange basis on the reference triangle.
#[derive(Clone, Debug)]
pub struct RefBasis {
    layout: RefNodeLayout,
}

impl RefBasis {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self { layout: ref_nodes(k)? })
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    pub fn layout(&self) -> &RefNodeLayout {
        &self.layout
    }

    /// `P_j(t)` and `P_j'(t)` for `j = 0..=k`.
    fn factors(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let k = self.layout.order;
        let kf = k as f64;
        let mut p = vec![1.0; k + 1];
        let mut dp = vec![0.0; k + 1];
        for j in 1..=k {
            let jf = j as f64;
            let f = (kf * t - (jf - 1.0)) / jf;
            p[j] = p[j - 1] * f;
            dp[j] = dp[j - 1] * f + p[j - 1] * kf / jf;
        }
        (p, dp)
    }

    pub fn eval(&self, xh: Point2) -> Vec<f64> {
        let k = self.layout.order;
        let (p1, _) = self.factors(xh.x);
        let (p2, _) = self.factors(xh.y);
        let (p3, _) = self.factors(1.0 - xh.x - xh.y);
        self.layout.lattice.iter().map(|&(a, b)| p1[a] * p2[b] * p3[k - a - b]).collect()
    }

    /// Reference gradients by exact differentiation of the product formula.
    pub fn grad(&self, xh: Point2) -> Vec<Point2> {
        self.eval_with_grad(xh).1
    }

    pub fn eval_with_grad(&self, xh: Point2) -> (Vec<f64>, Vec<Point2>) {
        let k = self.layout.order;
        let (p1, d1) = self.factors(xh.x);
        let (p2, d2) = self.factors(xh.y);
        let (p3, d3) = self.factors(1.0 - xh.x - xh.y);
        let mut values = Vec::with_capacity(self.len());
        let mut grads = Vec::with_capacity(self.len());
        for &(a, b) in &self.layout.lattice {
            let c = k - a - b;
            values.push(p1[a] * p2[b] * p3[c]);
            let dl3 = p1[a] * p2[b] * d3[c];
            grads.push(Point2::new(d1[a] * p2[b] * p3[c] - dl3, p1[a] * d2[b] * p3[c] - dl3));
        }
        (values, grads)
    }
}

/// Quadrature rule on the reference triangle (weights sum to 1/2).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// A positive-weight rule exact for polynomials of degree `<= d`.
///
/// Degrees 1, 2 and up to 5 use the classical centroid, 3-point and 7-point
/// symmetric rules; above that a collapsed (Duffy) Gauss-Legendre product
/// rule is used.
pub fn quadrature_rule(d: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_QUADRATURE_DEGREE).contains(&d) {
        return Err(Error::UnsupportedOrder(d));
    }
    let rule = match d {
        1 => QuadratureRule {
            points: vec![Point2::new(1.0 / 3.0, 1.0 / 3.0)],
            weights: vec![0.5],
            degree: 1,
        },
        2 => QuadratureRule {
            points: vec![
                Point2::new(1.0 / 6.0, 1.0 / 6.0),
                Point2::new(2.0 / 3.0, 1.0 / 6.0),
                Point2::new(1.0 / 6.0, 2.0 / 3.0),
            ],
            weights: vec![1.0 / 6.0; 3],
            degree: 2,
        },
        3..=5 => radon_seven_point(),
        _ => collapsed_gauss(d),
    };
    Ok(rule)
}

fn radon_seven_point() -> QuadratureRule {
    let s15 = 15f64.sqrt();
    let a1 = (6.0 - s15) / 21.0;
    let a2 = (6.0 + s15) / 21.0;
    let w1 = (155.0 - s15) / 2400.0;
    let w2 = (155.0 + s15) / 2400.0;
    let mut points = vec![Point2::new(1.0 / 3.0, 1.0 / 3.0)];
    let mut weights = vec![9.0 / 80.0];
    for (a, w) in [(a1, w1), (a2, w2)] {
        points.extend([Point2::new(a, a), Point2::new(1.0 - 2.0 * a, a), Point2::new(a, 1.0 - 2.0 * a)]);
        weights.extend([w; 3]);
    }
    QuadratureRule { points, weights, degree: 5 }
}

fn collapsed_gauss(d: usize) -> QuadratureRule {
    // x = u (1 - v), y = v, dx dy = (1 - v) du dv; the integrand has degree d
    // in u and d + 1 in v
    let n = (d + 3) / 2;
    let (nodes, gw) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&v, &wv) in nodes.iter().zip(&gw) {
        for (&u, &wu) in nodes.iter().zip(&gw) {
            points.push(Point2::new(u * (1.0 - v), v));
            weights.push(wu * wv * (1.0 - v));
        }
    }
    QuadratureRule { points, weights, degree: d }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
