use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zfem::geometry::validate_mesh_assumptions;
use zfem::harness::{
    eoc, parse_orders, parse_polygon_list, poly_csv, reproduce_poly, run_convergence, ConvergenceOptions, Family, CONVERGENCE_HEADER,
    MAX_HARNESS_ORDER,
};
use zfem::meshgen::read_mesh;
use zfem::reference::MAX_QUADRATURE_DEGREE;
use zfem::Error;

/// Zipped finite elements on polygonal meshes.
#[derive(Parser, Debug)]
#[command(name = "zfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a mesh file against the shape-regularity assumption.
    Validate {
        #[arg(long)]
        mesh: PathBuf,
        /// Minimum admissible chunkiness ratio.
        #[arg(long, default_value_t = 0.1)]
        rho: f64,
        /// Print the full per-cell report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Polynomial reproduction errors on the gallery polygons.
    Poly {
        /// `K`, `A..B` (inclusive) or a comma list.
        #[arg(long, default_value = "1..6")]
        orders: String,
        /// `all` or a comma list of gallery names.
        #[arg(long, default_value = "all")]
        polygons: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        debug: DebugDump,
    },
    /// Convergence study for the variable-coefficient model problem.
    Converge {
        /// cartesian, distorted, concave or file:<mesh1>,<mesh2>,...
        #[arg(long)]
        family: String,
        #[arg(long)]
        order: usize,
        /// Number of refinement levels (default: 4, or one per mesh file).
        #[arg(long)]
        levels: Option<usize>,
        /// Seed of the distorted family.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Assembly quadrature degree (default 2k+2).
        #[arg(long)]
        quad_degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write 0 in the seconds column so repeated runs give identical files.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        debug: DebugDump,
    },
}

#[derive(Args, Debug)]
struct DebugDump {
    /// Write per-element diagnostic records as JSON lines (stderr if no file is given).
    #[arg(long, num_args = 0..=1, value_name = "FILE")]
    dump_element_debug: Option<Option<PathBuf>>,
}

impl DebugDump {
    fn sink(&self) -> io::Result<Option<Box<dyn Write>>> {
        Ok(match &self.dump_element_debug {
            None => None,
            Some(None) => Some(Box::new(io::stderr())),
            Some(Some(path)) => Some(Box::new(BufWriter::new(File::create(path)?))),
        })
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout()),
    })
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// A failure either in the library or in the command line itself.
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotStarShaped { .. } | Error::DegenerateTriangle { .. } | Error::EdgeMismatch { .. } | Error::Validation(_) => EXIT_VALIDATION,
        Error::Parse { .. } | Error::Io(_) | Error::UnknownName(_) | Error::UnsupportedOrder(_) => EXIT_USAGE,
        Error::RankDeficient { .. } | Error::PointOutsideElement { .. } | Error::SolverBreakdown(_) | Error::NonConvergence { .. } => EXIT_NUMERICAL,
    }
}

fn validate(mesh: &Path, rho: f64, json: bool) -> Result<u8, Failure> {
    let mesh = read_mesh(mesh)?;
    let report = validate_mesh_assumptions(&mesh, rho);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!(
            "cells {} rho {} worst edge ratio {:.4} worst radius ratio {:.4} coverage error {:.2e}",
            report.cells.len(),
            rho,
            report.worst_edge_ratio(),
            report.worst_radius_ratio(),
            report.coverage_error
        );
        for c in report.failed_cells() {
            println!("cell {} fails: edge ratio {:.4} radius ratio {:.4}", c.cell, c.edge_ratio, c.radius_ratio);
        }
        if !report.reoriented.is_empty() {
            println!("reoriented cells: {:?}", report.reoriented);
        }
        println!("{}", if report.passed { "valid" } else { "invalid" });
    }
    Ok(if report.passed { 0 } else { EXIT_VALIDATION })
}

fn poly(orders: &str, polygons: &str, out: Option<&Path>, debug: &DebugDump) -> Result<u8, Failure> {
    let orders = parse_orders(orders).map_err(usage)?;
    let polygons = parse_polygon_list(polygons).map_err(usage)?;
    let mut sink = debug.sink()?;
    let (records, dbg) = reproduce_poly(&orders, &polygons)?;
    output(out)?.write_all(poly_csv(&records).as_bytes())?;
    if let Some(s) = sink.as_mut() {
        for d in &dbg {
            writeln!(s, "{}", serde_json::to_string(d).expect("record serializes"))?;
        }
        s.flush()?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn converge(
    family: &str,
    k: usize,
    levels: Option<usize>,
    seed: u64,
    quad_degree: Option<usize>,
    out: Option<&Path>,
    no_timing: bool,
    debug: &DebugDump,
) -> Result<u8, Failure> {
    let family = family.parse::<Family>().map_err(usage)?.with_seed(seed);
    if k == 0 || k > MAX_HARNESS_ORDER {
        return Err(Failure::Usage(format!("order must lie in 1..={MAX_HARNESS_ORDER}, got {k}")));
    }
    if let Some(q) = quad_degree {
        if q < 2 * k || q > MAX_QUADRATURE_DEGREE {
            return Err(Failure::Usage(format!("quadrature degree must lie in {}..={MAX_QUADRATURE_DEGREE}, got {q}", 2 * k)));
        }
    }
    if levels == Some(0) {
        return Err(Failure::Usage("need at least one level".into()));
    }
    let levels = levels.unwrap_or_else(|| family.default_levels());
    let mut csv = output(out)?;
    let mut sink = debug.sink()?;
    writeln!(csv, "{CONVERGENCE_HEADER}")?;
    csv.flush()?;
    let opts = ConvergenceOptions { k, levels, quad_degree };
    let records = run_convergence(&family, &opts, |record, result| {
        writeln!(csv, "{}", record.csv_line(!no_timing))?;
        csv.flush()?;
        if let Some(s) = sink.as_mut() {
            for d in &result.debug {
                writeln!(s, "{}", serde_json::json!({ "level": record.level, "element": d }))?;
            }
            s.flush()?;
        }
        Ok(())
    })?;
    match eoc(&records) {
        Ok(r) => eprintln!("eoc family={} k={} levels={} eoc0={:.3} eocgrad={:.3}", r.family, r.k, r.levels, r.eoc0, r.eocgrad),
        Err(_) => eprintln!("eoc skipped: {} level(s), at least 3 needed", records.len()),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { mesh, rho, json } => validate(mesh, *rho, *json),
        Command::Poly { orders, polygons, out, debug } => poly(orders, polygons, out.as_deref(), debug),
        Command::Converge { family, order, levels, seed, quad_degree, out, no_timing, debug } => {
            converge(family, *order, *levels, *seed, *quad_degree, out.as_deref(), *no_timing, debug)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
