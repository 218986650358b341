//! The `oped` command line.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 tolerance failure, 4 format
//! or I/O error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{OpedError, Result};
use crate::io;
use crate::phantoms::{Phantom, DEFAULT_JUMP_BAND};
use crate::quadrature::{cheb2_point_rule, cylinder_axis_rule, gauss_symmetric_jacobi};
use crate::radon2d::{sinogram_acquire, Scheme, Source};
use crate::recon2d::{error_metrics, rasterize, reconstruct, RasterGrid, RasterSpec};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_FORMAT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "oped", version, about = "Reconstruction from attenuated Radon projections")]
pub struct Cli {
    /// Worker threads; falls back to OPED_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Gauss,
    Cheb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Gauss,
    Cheb2,
    Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageArg {
    Pgm16,
    F64raw,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a phantom description.
    Phantom {
        /// The two-annulus ring phantom.
        #[arg(long, conflicts_with = "constant")]
        ring: bool,
        /// A constant phantom on the disk.
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long, default_value = "phantom.json")]
        out: PathBuf,
    },
    /// Sample the projections of a phantom.
    Sinogram {
        #[arg(long)]
        mu: f64,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        order: usize,
        /// Phantom file; the ring phantom when omitted.
        #[arg(long)]
        phantom: Option<PathBuf>,
        #[arg(long, default_value = "sino.json")]
        out: PathBuf,
        /// Store the data in a raw `.f64` file next to the JSON.
        #[arg(long)]
        sidecar: bool,
    },
    /// Reconstruct expansion coefficients from a sinogram.
    Reconstruct {
        #[arg(long = "in", default_value = "sino.json")]
        input: PathBuf,
        #[arg(long, default_value = "coef.json")]
        out: PathBuf,
    },
    /// Evaluate coefficients on a pixel grid.
    Raster {
        #[arg(long, num_args = 2, value_names = ["W", "H"])]
        size: Vec<usize>,
        #[arg(long = "in", default_value = "coef.json")]
        input: PathBuf,
        #[arg(long, default_value = "image.pgm")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "pgm16")]
        format: ImageArg,
    },
    /// Compare a reconstruction with the ground truth.
    Metrics {
        /// Phantom JSON or raw `.f64` image.
        #[arg(long)]
        truth: PathBuf,
        /// Coefficient JSON or raw `.f64` image.
        #[arg(long)]
        recon: PathBuf,
        #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [300, 300])]
        size: Vec<usize>,
        /// Width of the jump bands left out of the metrics.
        #[arg(long, default_value_t = DEFAULT_JUMP_BAND)]
        band: f64,
        /// Report file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print quadrature nodes and weights as CSV.
    Nodes {
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "gauss")]
        rule: RuleArg,
        /// Cylinder length for the axis rule.
        #[arg(long, default_value_t = 1.0)]
        length: f64,
    },
    /// Run the polynomial exactness suites.
    Selftest {
        #[arg(long)]
        quick: bool,
    },
}

/// Interior error summary with per-stage timings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub rmse_interior: f64,
    pub max_abs_interior: f64,
    pub n_pixels_used: usize,
    pub runtime_ms: BTreeMap<String, f64>,
}

/// Maps a library error to an exit code.
pub fn exit_code(err: &OpedError) -> i32 {
    match err {
        OpedError::Domain(_) | OpedError::Range(_) | OpedError::Shape(_) => EXIT_BAD_ARGS,
        OpedError::ToleranceNotMet { .. } | OpedError::EigenNonConvergence { .. } => EXIT_TOLERANCE,
        OpedError::Format(_) | OpedError::Io(_) | OpedError::Json(_) => EXIT_FORMAT,
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("OPED_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| OpedError::Domain(format!("OPED_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn size_spec(size: &[usize]) -> Result<RasterSpec> {
    match size {
        [w, h] if *w > 0 && *h > 0 => Ok(RasterSpec::new(*w, *h)),
        _ => Err(OpedError::Domain(format!("--size needs two positive integers, got {size:?}"))),
    }
}

fn is_raw(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "f64")
}

fn timed<T>(times: &mut BTreeMap<String, f64>, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    times.insert(stage.into(), start.elapsed().as_secs_f64() * 1e3);
    Ok(out)
}

/// Truth and reconstruction rasters on a common grid.
fn metric_inputs(truth: &Path, recon: &Path, spec: RasterSpec, band: f64, times: &mut BTreeMap<String, f64>) -> Result<(RasterGrid, RasterGrid)> {
    let truth_grid = timed(times, "truth", || {
        if is_raw(truth) {
            io::read_f64raw(truth)
        } else {
            io::read_phantom(truth)?.rasterize_truth(spec, band)
        }
    })?;
    let recon_grid = timed(times, "recon", || {
        if is_raw(recon) {
            io::read_f64raw(recon)
        } else {
            rasterize(&io::read_coefficients(recon)?, truth_grid.spec)
        }
    })?;
    Ok((truth_grid, recon_grid))
}

fn nodes_csv(mu: f64, order: usize, rule: RuleArg, length: f64) -> Result<String> {
    let rule = match rule {
        RuleArg::Gauss => gauss_symmetric_jacobi(mu, order)?,
        RuleArg::Cheb2 => cheb2_point_rule(order),
        RuleArg::Axis => cylinder_axis_rule(length, order)?,
    };
    let mut out = String::from("node,weight\n");
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        writeln!(out, "{x:.16e},{w:.16e}").expect("write to string");
    }
    Ok(out)
}

/// Executes a parsed command; returns text for stdout.
pub fn execute(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Phantom { ring, constant, out } => {
            let phantom = match (ring, constant) {
                (_, Some(v)) => Phantom::constant(*v),
                (true, None) => Phantom::ring(),
                (false, None) => return Err(OpedError::Domain("phantom needs --ring or --constant".into())),
            };
            io::write_phantom(out, &phantom)?;
            Ok((String::new(), EXIT_OK))
        }
        Command::Sinogram { mu, scheme, order, phantom, out, sidecar } => {
            let phantom = match phantom {
                Some(p) => io::read_phantom(p)?,
                None => Phantom::ring(),
            };
            let scheme = match scheme {
                SchemeArg::Gauss => Scheme::HalfGauss(*order),
                SchemeArg::Cheb => Scheme::FullCheb(*order),
            };
            let sino = sinogram_acquire(&Source::Phantom(&phantom), *mu, scheme)?;
            io::write_sinogram(out, &sino, *sidecar)?;
            Ok((String::new(), EXIT_OK))
        }
        Command::Reconstruct { input, out } => {
            let img = reconstruct(&io::read_sinogram(input)?)?;
            io::write_coefficients(out, &img)?;
            Ok((String::new(), EXIT_OK))
        }
        Command::Raster { size, input, out, format } => {
            let grid = rasterize(&io::read_coefficients(input)?, size_spec(size)?)?;
            let format = match format {
                ImageArg::Pgm16 => io::ImageFormat::Pgm16,
                ImageArg::F64raw => io::ImageFormat::F64Raw,
            };
            io::write_image(&grid, out, format)?;
            Ok((String::new(), EXIT_OK))
        }
        Command::Metrics { truth, recon, size, band, out } => {
            let mut times = BTreeMap::new();
            let (t, r) = metric_inputs(truth, recon, size_spec(size)?, *band, &mut times)?;
            let m = timed(&mut times, "metrics", || error_metrics(&t, &r))?;
            let report = MetricsReport {
                rmse_interior: m.rmse_interior,
                max_abs_interior: m.max_abs_interior,
                n_pixels_used: m.n_pixels_used,
                runtime_ms: times,
            };
            let text = io::to_json_string(&report)?;
            match out {
                Some(p) => {
                    std::fs::write(p, &text)?;
                    Ok((String::new(), EXIT_OK))
                }
                None => Ok((text + "\n", EXIT_OK)),
            }
        }
        Command::Nodes { mu, order, rule, length } => Ok((nodes_csv(*mu, *order, *rule, *length)?, EXIT_OK)),
        Command::Selftest { quick } => {
            let mut text = String::new();
            let mut code = EXIT_OK;
            for r in selftest::run_all(*quick)? {
                let verdict = if r.passed() { "ok" } else { "FAILED" };
                writeln!(text, "{:<30} {:>5} cases  max error {:.3e}  tol {:.0e}  {verdict}", r.name, r.cases, r.max_error, r.tolerance)
                    .expect("write to string");
                if !r.passed() {
                    code = EXIT_TOLERANCE;
                }
            }
            Ok((text, code))
        }
    }
}

/// Parses `args` (including the program name), runs the command in a
/// thread pool of the requested size and prints its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = thread_count(cli.threads).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(OpedError::Domain("--threads must be positive".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| OpedError::Domain(e.to_string()))?;
        pool.install(|| execute(&cli.command))
    });
    match outcome {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("oped: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_csv_has_header_and_rows() {
        let csv = nodes_csv(0.5, 2, RuleArg::Cheb2, 1.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "node,weight");
        assert_eq!(lines.len(), 4);
        let axis = nodes_csv(0.0, 1, RuleArg::Axis, 2.0).unwrap();
        let first: f64 = axis.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        let expect = 1.0 + (3.0 * std::f64::consts::PI / 4.0).cos();
        assert!((first - expect).abs() < 1e-15 || (first - (2.0 - expect)).abs() < 1e-15);
    }

    #[test]
    fn bad_arguments_exit_two() {
        assert_eq!(run(["oped", "sinogram", "--mu", "0.5"]), EXIT_BAD_ARGS);
        assert_eq!(run(["oped", "frobnicate"]), EXIT_BAD_ARGS);
        assert_eq!(exit_code(&OpedError::Format("x".into())), EXIT_FORMAT);
    }
}
