//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for malformed input or failed validation,
//! 2 when a numerical residual exceeds the tolerance.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::coords::{mutate, random_generic, validate_generic, CoordinateTuple, Sampling};
use crate::develop::{develop, develop_patch, extract_coordinates, monodromy, verify_equivariance};
use crate::mobius::trace_squared;
use crate::render::{render_patch, RenderOptions};
use crate::surface::{canonical_triangulation, validate_raw, Signature, Triangulation, TriangulationData};
use crate::thurston::grafting_data;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Structural(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Structural(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Structural(_) => "structural",
            CliError::Numerical(_) => "numerical",
        }
    }
}

fn structural(e: impl std::fmt::Display) -> CliError {
    CliError::Structural(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "holonomy", version, about = "Pleated planes and framed monodromy from cross-ratio coordinates")]
pub struct Cli {
    /// Residual tolerance.
    #[arg(long, global = true, env = "HOLONOMY_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SignatureArgs {
    #[arg(long)]
    pub genus: usize,
    /// Pole orders, one per boundary component.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub poles: Vec<usize>,
}

impl SignatureArgs {
    fn signature(&self) -> Result<Signature, CliError> {
        Signature::new(self.genus, self.poles.clone()).map_err(structural)
    }
}

#[derive(Debug, Args)]
pub struct CoordSource {
    /// Coordinate file; when absent a random tuple is drawn.
    #[arg(long)]
    pub coords: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bound on `|ln|x_a||` for random tuples.
    #[arg(long, default_value_t = 1.6)]
    pub bound: f64,
    /// Draw positive real coordinates.
    #[arg(long)]
    pub positive: bool,
}

impl CoordSource {
    fn load(&self, tri: &Triangulation) -> Result<CoordinateTuple, CliError> {
        let c = match &self.coords {
            Some(p) => read_json::<CoordinateTuple>(p)?,
            None => {
                if !(self.bound > 0.0 && self.bound.is_finite()) {
                    return Err(structural("--bound must be positive"));
                }
                random_generic(tri, self.seed, self.bound, sampling(self.positive))
            }
        };
        validate_generic(&c, tri).map_err(|v| {
            structural(
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok(c)
    }
}

fn sampling(positive: bool) -> Sampling {
    if positive {
        Sampling::PositiveReal
    } else {
        Sampling::Complex
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a triangulation file (or just a signature) against a signature.
    Validate {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// Emit the canonical triangulation of a signature.
    Generate {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Develop a coordinate tuple and emit the grafting witness.
    Develop {
        #[arg(long)]
        triangulation: PathBuf,
        #[command(flatten)]
        source: CoordSource,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Flip an arc and transport the coordinates by mutation.
    Flip {
        #[arg(long)]
        triangulation: PathBuf,
        #[command(flatten)]
        source: CoordSource,
        #[arg(long)]
        arc: usize,
        /// Where to write the flipped triangulation.
        #[arg(long)]
        output_triangulation: Option<PathBuf>,
        /// Where to write the mutated coordinates.
        #[arg(long)]
        output_coords: Option<PathBuf>,
    },
    /// Report the worst round-trip and equivariance errors over many seeds.
    Roundtrip {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 1.6)]
        bound: f64,
    },
    /// Check that positive tuples give real flags and traces.
    Fuchsian {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
        #[arg(long, default_value_t = 1.6)]
        bound: f64,
    },
    /// Draw a developed patch as SVG.
    Render {
        #[arg(long)]
        triangulation: PathBuf,
        #[command(flatten)]
        source: CoordSource,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = crate::develop::DEFAULT_PATCH_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| structural(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| structural(format!("{}: {e}", path.display())))
}

fn read_triangulation(path: &Path) -> Result<Triangulation, CliError> {
    let data: TriangulationData = read_json(path)?;
    Triangulation::new(data).map_err(|e| structural(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| structural(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text.trim_end());
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("outputs serialize");
    emit(&text, output)
}

fn check(what: &str, value: f64, tol: f64) -> Result<(), CliError> {
    if value < tol {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{what} {value:e} exceeds tolerance {tol:e}")))
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(structural("tolerance must be positive"));
    }
    match &cli.command {
        Command::Validate { sig, triangulation } => {
            let Some(path) = triangulation else {
                let s = sig.signature()?;
                return emit_json(
                    &json!({
                        "valid": true,
                        "signature": s.to_string(),
                        "interior_arcs": s.interior_arc_count(),
                        "triangles": s.triangle_count(),
                        "free_rank": s.free_rank(),
                    }),
                    None,
                );
            };
            let data: TriangulationData = read_json(path)?;
            let report = validate_raw(&data, sig.genus, &sig.poles);
            let valid = report.is_valid();
            emit_json(
                &json!({
                    "valid": valid,
                    "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "triangles": report.triangles,
                    "interior_arcs": report.interior_arcs,
                    "boundary_arcs": report.boundary_arcs,
                    "vertices": report.vertices,
                    "free_rank": report.free_rank,
                }),
                None,
            )?;
            if valid {
                Ok(())
            } else {
                Err(structural(
                    report
                        .violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                ))
            }
        }
        Command::Generate { sig, output } => {
            let tri = canonical_triangulation(&sig.signature()?).map_err(structural)?;
            emit_json(tri.data(), output.as_deref())
        }
        Command::Develop {
            triangulation,
            source,
            output,
        } => {
            let tri = read_triangulation(triangulation)?;
            let coords = source.load(&tri)?;
            let witness = grafting_data(&tri, &coords).map_err(structural)?;
            emit_json(&witness, output.as_deref())?;
            check("equivariance residual", witness.residuals.equivariance, tol)?;
            check("round-trip error", witness.residuals.round_trip, tol)
        }
        Command::Flip {
            triangulation,
            source,
            arc,
            output_triangulation,
            output_coords,
        } => {
            let tri = read_triangulation(triangulation)?;
            let coords = source.load(&tri)?;
            let (flipped, mutated) = mutate(&coords, &tri, *arc).map_err(structural)?;
            match (output_triangulation, output_coords) {
                (None, None) => emit_json(
                    &json!({ "triangulation": flipped.data(), "coords": mutated }),
                    None,
                ),
                (t, c) => {
                    if let Some(t) = t {
                        emit_json(flipped.data(), Some(t))?;
                    }
                    if let Some(c) = c {
                        emit_json(&mutated, Some(c))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Roundtrip { sig, seeds, bound } => {
            let tri = canonical_triangulation(&sig.signature()?).map_err(structural)?;
            let (mut round_trip, mut equivariance) = (0.0f64, 0.0f64);
            for seed in 0..*seeds {
                let c = random_generic(&tri, seed, *bound, Sampling::Complex);
                let dev = develop(&tri, &c).map_err(structural)?;
                let back = extract_coordinates(&dev).map_err(structural)?;
                round_trip = round_trip.max(back.max_relative_error(&c));
                equivariance = equivariance.max(verify_equivariance(&dev));
            }
            emit_json(
                &json!({
                    "signature": sig.signature()?.to_string(),
                    "seeds": seeds,
                    "max_round_trip_error": round_trip,
                    "max_equivariance_residual": equivariance,
                }),
                None,
            )?;
            check("round-trip error", round_trip, tol)?;
            check("equivariance residual", equivariance, tol)
        }
        Command::Fuchsian { sig, seeds, bound } => {
            let tri = canonical_triangulation(&sig.signature()?).map_err(structural)?;
            let (mut flag_im, mut trace_im) = (0.0f64, 0.0f64);
            for seed in 0..*seeds {
                let c = random_generic(&tri, seed, *bound, Sampling::PositiveReal);
                let dev = develop(&tri, &c).map_err(structural)?;
                for p in dev.flags().iter().flatten() {
                    if let Some(z) = p.affine(1e-12) {
                        flag_im = flag_im.max(z.im.abs());
                    }
                }
                for g in monodromy(&dev).generators {
                    trace_im = trace_im.max(trace_squared(&g.matrix).im.abs());
                }
            }
            emit_json(
                &json!({
                    "signature": sig.signature()?.to_string(),
                    "seeds": seeds,
                    "max_flag_imaginary_part": flag_im,
                    "max_trace_squared_imaginary_part": trace_im,
                }),
                None,
            )?;
            check("flag imaginary part", flag_im, tol)?;
            check("trace imaginary part", trace_im, tol)
        }
        Command::Render {
            triangulation,
            source,
            depth,
            budget,
            size,
            radius,
            output,
        } => {
            if !(*radius > 0.0 && radius.is_finite()) || *size == 0 {
                return Err(structural("--size and --radius must be positive"));
            }
            let tri = read_triangulation(triangulation)?;
            let coords = source.load(&tri)?;
            let patch = develop_patch(&tri, &coords, *depth, *budget).map_err(structural)?;
            let svg = render_patch(
                &tri,
                &coords,
                &patch,
                &RenderOptions {
                    size: *size,
                    radius: *radius,
                },
            );
            emit(&svg, output.as_deref())
        }
    }
}

/// Parses arguments, runs, and reports failures on stderr. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            e.exit_code()
        }
    }
}
