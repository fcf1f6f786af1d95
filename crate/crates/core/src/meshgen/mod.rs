//! Built-in mesh families, the polygon gallery and the mesh text format.

mod gallery;
mod io;

pub use gallery::{gallery, GALLERY_NAMES};
pub use io::{parse_mesh, read_mesh, write_mesh, write_mesh_string};

use crate::geometry::{validate_mesh_assumptions, Mesh, Point2};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum shape-regularity ratio every distorted mesh must satisfy.
pub const DISTORTED_RHO: f64 = 0.1;
/// Minimum ratio documented for the structured concave family.
pub const CONCAVE_RHO: f64 = 0.05;

const MAX_DISTORTION_ATTEMPTS: u64 = 32;

fn lattice_index(n: usize) -> impl Fn(usize, usize) -> usize {
    move |i, j| j * (n + 1) + i
}

/// `n x n` grid of squares on the unit square.
pub fn gen_cartesian(n: usize) -> Mesh {
    gen_perturbed(n, |_, _| Point2::default())
}

fn gen_perturbed(n: usize, mut offset: impl FnMut(usize, usize) -> Point2) -> Mesh {
    assert!(n >= 1, "need at least one cell per side");
    let nf = n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let base = Point2::new(i as f64 / nf, j as f64 / nf);
            let interior = i > 0 && i < n && j > 0 && j < n;
            vertices.push(if interior { base + offset(i, j) } else { base });
        }
    }
    let id = lattice_index(n);
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::new(vertices, cells).expect("grid connectivity is valid")
}

/// Cartesian grid with interior vertices moved by uniform noise in
/// `[-a/n, a/n]^2`. A realization failing the `rho = 0.1` shape check is
/// redrawn from the next stream of the same seed.
pub fn gen_distorted_quads(n: usize, seed: u64, amplitude: f64) -> Result<Mesh> {
    if !(0.0..0.5).contains(&amplitude) {
        return Err(Error::invalid(format!("distortion amplitude {amplitude} outside [0, 0.5)")));
    }
    let scale = amplitude / n as f64;
    for attempt in 0..MAX_DISTORTION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let mesh = gen_perturbed(n, |_, _| {
            if scale == 0.0 {
                Point2::default()
            } else {
                Point2::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale))
            }
        });
        if validate_mesh_assumptions(&mesh, DISTORTED_RHO).passed {
            return Ok(mesh);
        }
    }
    Err(Error::invalid(format!(
        "no valid distorted mesh after {MAX_DISTORTION_ATTEMPTS} draws (n = {n}, amplitude = {amplitude})"
    )))
}

/// Each Cartesian cell is cut along the zigzag `(0,0) -> A -> M -> B -> (1,1)`
/// (cell-local coordinates, `M` the cell center, `B` the reflection of `A`
/// through `M`) into two congruent non-convex octagons. Cell edge midpoints
/// are vertices, so neighboring cells match.
pub fn gen_structured_concave(n: usize) -> Mesh {
    assert!(n >= 1, "need at least one cell per side");
    const A: (f64, f64) = (0.55, 0.3);
    const B: (f64, f64) = (0.45, 0.7);
    let nf = n as f64;
    let m = 2 * n;
    // half-step lattice holds corners, edge midpoints and cell centers
    let half = lattice_index(m);
    let mut vertices: Vec<Point2> = (0..=m)
        .flat_map(|j| (0..=m).map(move |i| Point2::new(i as f64 / (2.0 * nf), j as f64 / (2.0 * nf))))
        .collect();
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let at = |di: usize, dj: usize| half(2 * i + di, 2 * j + dj);
            let local = |p: (f64, f64)| Point2::new((i as f64 + p.0) / nf, (j as f64 + p.1) / nf);
            let a = vertices.len();
            vertices.push(local(A));
            let b = vertices.len();
            vertices.push(local(B));
            let center = at(1, 1);
            cells.push(vec![at(0, 0), at(1, 0), at(2, 0), at(2, 1), at(2, 2), b, center, a]);
            cells.push(vec![at(0, 0), a, center, b, at(2, 2), at(1, 2), at(0, 2), at(0, 1)]);
        }
    }
    Mesh::new(vertices, cells).expect("concave tiling is valid")
}
