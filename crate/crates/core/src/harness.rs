//! Polynomial-reproduction tables and convergence studies.

use crate::assembly::{apply_dirichlet, assemble, build_bases, build_dof_map, compute_errors, solve_spd, DiscreteSolution, ExactSolution, VariableDiffusion};
use crate::basis::{ElementDebug, LocalBasis};
use crate::geometry::Mesh;
use crate::meshgen::{gallery, gen_cartesian, gen_distorted_quads, gen_structured_concave, read_mesh, GALLERY_NAMES};
use crate::reference::MAX_QUADRATURE_DEGREE;
use crate::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

pub const MAX_HARNESS_ORDER: usize = 6;
pub const DEFAULT_AMPLITUDE: f64 = 0.2;
/// Coarsest refinement of the built-in families; level `l` has `4 * 2^l`
/// cells per side.
pub const BASE_CELLS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyRecord {
    pub polygon: String,
    pub k: usize,
    pub num_vertices: usize,
    pub ndof: usize,
    pub err0: f64,
    pub errgrad: f64,
}

/// Resolves `all` or a comma-separated list of gallery names.
pub fn parse_polygon_list(spec: &str) -> Result<Vec<String>> {
    if spec == "all" {
        return Ok(GALLERY_NAMES.iter().map(|s| s.to_string()).collect());
    }
    spec.split(',')
        .map(|name| {
            let name = name.trim();
            if GALLERY_NAMES.contains(&name) {
                Ok(name.to_string())
            } else {
                Err(Error::UnknownName(name.to_string()))
            }
        })
        .collect()
}

/// Accepts `3`, `1..6` (inclusive) or `1,2,5`.
pub fn parse_orders(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid(format!("cannot parse orders `{spec}`"));
    let orders: Vec<usize> = if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if orders.is_empty() || orders.iter().any(|&k| k == 0 || k > MAX_HARNESS_ORDER) {
        return Err(Error::invalid(format!("orders must lie in 1..={MAX_HARNESS_ORDER}, got `{spec}`")));
    }
    Ok(orders)
}

/// `max_alpha ||m_alpha - I m_alpha||` on each gallery polygon, quadrature
/// degree `2k + 4`.
pub fn reproduce_poly(orders: &[usize], polygons: &[String]) -> Result<(Vec<PolyRecord>, Vec<ElementDebug>)> {
    let mut records = Vec::new();
    let mut debug = Vec::new();
    for name in polygons {
        let polygon = gallery(name)?;
        for &k in orders {
            let basis = LocalBasis::new(&polygon, k)?;
            let (err0, errgrad) = basis.reproduction_errors(2 * k + 4)?;
            records.push(PolyRecord { polygon: name.clone(), k, num_vertices: polygon.num_vertices(), ndof: basis.num_dofs(), err0, errgrad });
            debug.push(basis.debug_record(None));
        }
    }
    Ok((records, debug))
}

pub fn poly_csv(records: &[PolyRecord]) -> String {
    let mut out = String::from("polygon,k,nv,ndof,err0,errgrad\n");
    for r in records {
        writeln!(out, "{},{},{},{},{:e},{:e}", r.polygon, r.k, r.num_vertices, r.ndof, r.err0, r.errgrad).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Cartesian,
    Distorted { seed: u64, amplitude: f64 },
    Concave,
    /// One mesh file per level, coarsest first.
    Files(Vec<PathBuf>),
}

impl FromStr for Family {
    type Err = Error;

    /// `cartesian`, `distorted`, `concave` or `file:<a>,<b>,...`. The seed
    /// of the distorted family is set separately.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(Family::Cartesian),
            "distorted" => Ok(Family::Distorted { seed: 1, amplitude: DEFAULT_AMPLITUDE }),
            "concave" => Ok(Family::Concave),
            _ => match s.strip_prefix("file:") {
                Some(list) if !list.is_empty() => Ok(Family::Files(list.split(',').map(PathBuf::from).collect())),
                _ => Err(Error::UnknownName(s.to_string())),
            },
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cartesian => "cartesian",
            Family::Distorted { .. } => "distorted",
            Family::Concave => "concave",
            Family::Files(_) => "file",
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            Family::Distorted { amplitude, .. } => Family::Distorted { seed, amplitude },
            other => other,
        }
    }

    /// Levels available without an explicit count.
    pub fn default_levels(&self) -> usize {
        match self {
            Family::Files(paths) => paths.len(),
            _ => 4,
        }
    }

    pub fn mesh(&self, level: usize) -> Result<Mesh> {
        let n = BASE_CELLS << level;
        match self {
            Family::Cartesian => Ok(gen_cartesian(n)),
            Family::Distorted { seed, amplitude } => gen_distorted_quads(n, *seed, *amplitude),
            Family::Concave => Ok(gen_structured_concave(n)),
            Family::Files(paths) => match paths.get(level) {
                Some(p) => read_mesh(p),
                None => Err(Error::invalid(format!("level {level} requested but only {} mesh files given", paths.len()))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub family: String,
    pub k: usize,
    pub level: usize,
    pub h: f64,
    pub ndof: usize,
    pub err0: f64,
    pub errgrad: f64,
    pub seconds: f64,
}

pub const CONVERGENCE_HEADER: &str = "family,k,level,h,ndof,err0,errgrad,seconds";

impl ConvergenceRecord {
    /// One CSV line without the newline. With `timing` off the wall time is
    /// written as 0 so that repeated runs are byte-identical.
    pub fn csv_line(&self, timing: bool) -> String {
        let seconds = if timing { self.seconds } else { 0.0 };
        format!("{},{},{},{:e},{},{:e},{:e},{:.3}", self.family, self.k, self.level, self.h, self.ndof, self.err0, self.errgrad, seconds)
    }
}

pub fn convergence_csv(records: &[ConvergenceRecord], timing: bool) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in records {
        out.push_str(&r.csv_line(timing));
        out.push('\n');
    }
    out
}

/// Result of solving the variable-coefficient model problem on one mesh.
#[derive(Clone, Debug)]
pub struct LevelResult {
    pub ndof: usize,
    pub err0: f64,
    pub errgrad: f64,
    pub debug: Vec<ElementDebug>,
}

/// Default assembly quadrature degree for order `k`.
pub fn default_quad_degree(k: usize) -> usize {
    2 * k + 2
}

/// Solves `-div(D grad u) + gamma u = f` with the manufactured solution
/// `sin(2 pi x) sin(2 pi y)` on `mesh`. Errors are integrated two degrees
/// above the assembly rule.
pub fn solve_model_problem(mesh: &Mesh, k: usize, quad_degree: usize) -> Result<LevelResult> {
    let bases = build_bases(mesh, k)?;
    let dofs = build_dof_map(mesh, &bases)?;
    let system = assemble(mesh, &bases, &dofs, &VariableDiffusion, quad_degree)?;
    let reduced = apply_dirichlet(&system, &dofs, |x| VariableDiffusion.value(x));
    let outcome = solve_spd(&reduced.matrix, &reduced.rhs)?;
    let solution = DiscreteSolution::new(mesh, &bases, &dofs, reduced.expand(&outcome.solution));
    let (err0, errgrad) = compute_errors(&solution, &VariableDiffusion, (quad_degree + 2).min(MAX_QUADRATURE_DEGREE))?;
    let debug = bases.iter().enumerate().map(|(c, b)| b.debug_record(Some(c))).collect();
    Ok(LevelResult { ndof: dofs.len(), err0, errgrad, debug })
}

#[derive(Clone, Debug)]
pub struct ConvergenceOptions {
    pub k: usize,
    pub levels: usize,
    pub quad_degree: Option<usize>,
}

/// Runs the refinement ladder, handing each record to `on_record` as soon as
/// it is available. On failure the records produced so far have already
/// been delivered.
pub fn run_convergence(
    family: &Family,
    opts: &ConvergenceOptions,
    mut on_record: impl FnMut(&ConvergenceRecord, &LevelResult) -> Result<()>,
) -> Result<Vec<ConvergenceRecord>> {
    if opts.k == 0 || opts.k > MAX_HARNESS_ORDER {
        return Err(Error::invalid(format!("order must lie in 1..={MAX_HARNESS_ORDER}, got {}", opts.k)));
    }
    let quad = opts.quad_degree.unwrap_or_else(|| default_quad_degree(opts.k));
    let mut records: Vec<ConvergenceRecord> = Vec::new();
    for level in 0..opts.levels {
        let start = Instant::now();
        let mesh = family.mesh(level)?;
        if let Some(prev) = records.last() {
            if mesh.h() >= prev.h {
                return Err(Error::invalid(format!("mesh size does not decrease at level {level}: {} >= {}", mesh.h(), prev.h)));
            }
        }
        let result = solve_model_problem(&mesh, opts.k, quad)?;
        let record = ConvergenceRecord {
            family: family.name().to_string(),
            k: opts.k,
            level,
            h: mesh.h(),
            ndof: result.ndof,
            err0: result.err0,
            errgrad: result.errgrad,
            seconds: start.elapsed().as_secs_f64(),
        };
        on_record(&record, &result)?;
        records.push(record);
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EocReport {
    pub family: String,
    pub k: usize,
    pub levels: usize,
    pub eoc0: f64,
    pub eocgrad: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fitted slopes of `log err` against `log h`; needs at least three levels.
pub fn eoc(records: &[ConvergenceRecord]) -> Result<EocReport> {
    if records.len() < 3 {
        return Err(Error::invalid(format!("EOC needs at least 3 levels, got {}", records.len())));
    }
    let lh: Vec<f64> = records.iter().map(|r| r.h.ln()).collect();
    let l0: Vec<f64> = records.iter().map(|r| r.err0.ln()).collect();
    let l1: Vec<f64> = records.iter().map(|r| r.errgrad.ln()).collect();
    Ok(EocReport {
        family: records[0].family.clone(),
        k: records[0].k,
        levels: records.len(),
        eoc0: least_squares_slope(&lh, &l0),
        eocgrad: least_squares_slope(&lh, &l1),
    })
}
