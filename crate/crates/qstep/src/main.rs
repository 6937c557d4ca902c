//! `qstep` — quaternionic step-potential scattering from the command line.
//!
//! Adimensional commands take `(eps, nuq, rho)`; physical commands take KeV.
//! CSV goes to stdout (or `--out`) with a `#` manifest header; JSON reports
//! are a single object on stdout. Errors are `{"error", "message"}` on
//! stderr with exit code 2 (domain/usage) or 3 (numerical failure).

mod commands;
mod manifest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{ComputeFormat, GridSpec, SweepMode};
use manifest::RunManifest;
use qstep_core::delay::CurveKind;
use qstep_core::Error;

#[derive(Parser)]
#[command(
    name = "qstep",
    version,
    about = "Quaternionic step-potential scattering toolkit"
)]
struct Cli {
    /// Strip the manifest comment header from CSV output.
    #[arg(long, global = true)]
    no_header: bool,
    /// Omit the timestamp line (for byte-identical reruns).
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Fig1,
    Fig2,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Complex,
    Quaternionic,
    General,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (eps, nuq, rho) point: amplitudes, phase, delay.
    Compute {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        nuq: f64,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Reflection delay table (KeV): quaternionic step vs complex steps.
    Table {
        /// Quaternionic step modulus, KeV.
        #[arg(long, default_value_t = 20.0)]
        vq: f64,
        /// Complex step heights, KeV.
        #[arg(long, value_delimiter = ',', default_value = "18.5,16.5,14.6")]
        v1: Vec<f64>,
        /// Incoming energies, KeV.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14")]
        energies: Vec<f64>,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the delay curves: fig1 (adimensional), fig2 (rescaled).
    Sweep {
        #[arg(long, value_enum)]
        mode: SweepArg,
        /// Grid as lo:hi:step.
        #[arg(long, value_parser = GridSpec::parse)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate a delay-curve minimum.
    Minimize {
        #[arg(long, value_enum)]
        curve: CurveArg,
        /// Required for --curve general.
        #[arg(long)]
        nuq: Option<f64>,
    },
    /// Complex height that mimics a quaternionic delay at one energy (KeV).
    Mimic {
        #[arg(long)]
        e0: f64,
        #[arg(long)]
        vq: f64,
    },
    /// Intersections of the rescaled delay curves.
    Intersect {
        #[arg(long, default_value_t = 0.02)]
        lo: f64,
        #[arg(long, default_value_t = 1.999)]
        hi: f64,
    },
    /// Wave-packet delay oracle at one (eps0, nuq) point.
    Packet {
        #[arg(long)]
        eps0: f64,
        #[arg(long, default_value_t = 0.02)]
        sigma: f64,
        #[arg(long)]
        nuq: f64,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        /// Write the centroid track as CSV here.
        #[arg(long)]
        track_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, exit) = error_code(&e);
            eprintln!(
                "{}",
                serde_json::json!({ "error": code, "message": e.to_string() })
            );
            ExitCode::from(exit)
        }
    }
}

fn error_code(e: &Error) -> (&'static str, u8) {
    match e {
        Error::BoundaryEnergy { .. } => ("boundary_energy", 2),
        Error::Domain { .. } => ("domain", 2),
        Error::Config { .. } => ("config", 2),
        Error::NoMimic { .. } => ("no_mimic", 2),
        Error::NoInteriorMinimum => ("no_interior_minimum", 2),
        Error::SingularSystem { .. } => ("singular_system", 3),
        Error::Fit { .. } => ("fit", 3),
        Error::FiniteDifference { .. } => ("finite_difference", 3),
        Error::Leakage { .. } => ("leakage", 3),
    }
}

fn run(cli: Cli) -> qstep_core::Result<()> {
    let with_timestamp = !cli.no_timestamp;
    match cli.command {
        Command::Compute {
            eps,
            nuq,
            rho,
            format,
        } => {
            let format = match format {
                FormatArg::Json => ComputeFormat::Json,
                FormatArg::Text => ComputeFormat::Text,
            };
            print!("{}", commands::compute(eps, nuq, rho, format)?);
        }
        Command::Table {
            vq,
            v1,
            energies,
            out,
        } => {
            let manifest = (!cli.no_header).then(|| {
                RunManifest::new("table", with_timestamp)
                    .param("vq", vq)
                    .param_list("v1", &v1)
                    .param_list("energies", &energies)
            });
            let csv = commands::table(vq, &v1, &energies, manifest.as_ref())?;
            emit(csv, out)?;
        }
        Command::Sweep { mode, grid, out } => {
            let (mode, default_grid) = match mode {
                SweepArg::Fig1 => (
                    SweepMode::Fig1,
                    GridSpec {
                        lo: 0.01,
                        hi: 0.99,
                        step: 0.005,
                    },
                ),
                SweepArg::Fig2 => (
                    SweepMode::Fig2,
                    GridSpec {
                        lo: 0.1,
                        hi: 2.6,
                        step: 0.005,
                    },
                ),
            };
            let grid = grid.unwrap_or(default_grid);
            let manifest = (!cli.no_header).then(|| {
                RunManifest::new("sweep", with_timestamp)
                    .param(
                        "mode",
                        if mode == SweepMode::Fig1 {
                            "fig1"
                        } else {
                            "fig2"
                        },
                    )
                    .param("grid", grid)
            });
            let csv = commands::sweep(mode, grid, manifest.as_ref())?;
            emit(csv, out)?;
        }
        Command::Minimize { curve, nuq } => {
            let kind = match curve {
                CurveArg::Complex => CurveKind::Complex,
                CurveArg::Quaternionic => CurveKind::Quaternionic,
                CurveArg::General => CurveKind::GeneralNuq(nuq.ok_or(Error::Config {
                    what: "--curve general requires --nuq",
                })?),
            };
            print!("{}", commands::minimize(kind)?);
        }
        Command::Mimic { e0, vq } => print!("{}", commands::mimic(e0, vq)?),
        Command::Intersect { lo, hi } => print!("{}", commands::intersect(lo, hi)?),
        Command::Packet {
            eps0,
            sigma,
            nuq,
            rho,
            track_out,
        } => {
            let (json, track_csv) = commands::packet(eps0, sigma, nuq, rho)?;
            if let Some(path) = track_out {
                let mut content = String::new();
                if !cli.no_header {
                    let m = RunManifest::new("packet", with_timestamp)
                        .param("eps0", eps0)
                        .param("sigma", sigma)
                        .param("nuq", nuq)
                        .param("rho", rho);
                    content.push_str(&m.to_comment_block());
                    content.push_str("# columns: tau,xi_centroid,norm_captured\n");
                }
                content.push_str(track_csv.trim_start_matches("tau,xi_centroid,norm_captured\n"));
                fs::write(&path, content).map_err(|_| Error::Config {
                    what: "cannot write track file",
                })?;
            }
            print!("{json}");
        }
    }
    Ok(())
}

fn emit(content: String, out: Option<PathBuf>) -> qstep_core::Result<()> {
    match out {
        Some(path) => fs::write(&path, content).map_err(|_| Error::Config {
            what: "cannot write output file",
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_domain_from_numerical_failures() {
        for e in [
            Error::BoundaryEnergy { eps: 1.0, nuq: 0.5 },
            Error::Domain {
                what: "x",
                value: 0.0,
            },
            Error::Config { what: "x" },
            Error::NoMimic {
                e0_kev: 1.0,
                target: 0.1,
            },
            Error::NoInteriorMinimum,
        ] {
            assert_eq!(error_code(&e).1, 2, "{e:?}");
        }
        for e in [
            Error::SingularSystem { cond: 1e13 },
            Error::Fit {
                rms: 1.0,
                limit: 0.1,
            },
            Error::FiniteDifference { spread: 1.0 },
            Error::Leakage {
                tau: 1.0,
                captured: 0.5,
            },
        ] {
            assert_eq!(error_code(&e).1, 3, "{e:?}");
        }
    }
}
