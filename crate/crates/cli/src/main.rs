//! `phonon-casimir`: sweeps, oracle cross-checks and scans over the
//! phonon-casimir library, written as CSV or JSON.

mod commands;
mod geometry;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use phonon_casimir::media::{load_media_config, FluidMedium, MediumRegistry, WATER_293K};

use geometry::{GeometryArgs, SweepArgs};
use output::{Failure, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "phonon-casimir",
    version,
    about = "Quantum density fluctuations of a phonon field"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Medium name from the registry.
    #[arg(long, global = true, default_value = WATER_293K)]
    medium: String,
    /// JSON file with additional media.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance for numerical routes (library default when absent).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary variance along a sweep of one geometry parameter.
    Profile {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "closed")]
        method: commands::ProfileMethod,
    },
    /// Compare a closed form with its independent numerical route.
    OracleCheck {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Time separation for the free-field target, s.
        #[arg(long, default_value_t = 0.0)]
        dt: f64,
    },
    /// Ratio of zero-point to thermal Brillouin scattering.
    Scattering(commands::ScatteringArgs),
    /// Density variance over one period of a squeezed traveling mode.
    SqueezedProfile(commands::SqueezedArgs),
    /// Phonon and electromagnetic Casimir pressures between plates.
    CasimirForce {
        /// Plate separations, m.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<f64>,
    },
    /// Near-focus variance of a parabolic mirror on an (a, b, gamma) grid.
    ParabolaScan(commands::ParabolaArgs),
    /// Inspect the medium registry.
    Media {
        #[command(subcommand)]
        action: MediaAction,
    },
}

#[derive(Debug, Subcommand)]
enum MediaAction {
    /// List every medium, built-in and from `--config`.
    List,
    /// Check a media file without running anything.
    Validate { file: PathBuf },
}

/// Settings shared by every subcommand once the flags are resolved.
pub struct RunConfig {
    pub medium_name: String,
    pub medium: FluidMedium,
    pub registry: MediumRegistry,
    pub tol: Option<f64>,
}

fn resolve(global: &GlobalArgs) -> Result<RunConfig, Failure> {
    let registry = match &global.config {
        Some(path) => load_media_config(path)?,
        None => MediumRegistry::new(),
    };
    let medium = *registry.require(&global.medium)?;
    if let Some(t) = global.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::config(format!("--tol must be positive, got {t}")));
        }
    }
    Ok(RunConfig {
        medium_name: global.medium.clone(),
        medium,
        registry,
        tol: global.tol,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Profile { .. } => "profile",
        Command::OracleCheck { .. } => "oracle-check",
        Command::Scattering(_) => "scattering",
        Command::SqueezedProfile(_) => "squeezed-profile",
        Command::CasimirForce { .. } => "casimir-force",
        Command::ParabolaScan(_) => "parabola-scan",
        Command::Media { .. } => "media",
    }
}

fn dispatch(cfg: &RunConfig, command: &Command, table: &mut Table) -> Result<(), Failure> {
    match command {
        Command::Profile {
            geometry,
            sweep,
            method,
        } => commands::profile(cfg, geometry, sweep, *method, table),
        Command::OracleCheck { geometry, dt } => commands::oracle_check(cfg, geometry, *dt, table),
        Command::Scattering(args) => commands::scattering(cfg, args, table),
        Command::SqueezedProfile(args) => commands::squeezed_profile(cfg, args, table),
        Command::CasimirForce { a } => commands::casimir_force(cfg, a, table),
        Command::ParabolaScan(args) => commands::parabola_scan(cfg, args, table),
        Command::Media {
            action: MediaAction::List,
        } => commands::media_list(cfg, table),
        Command::Media {
            action: MediaAction::Validate { file },
        } => commands::media_validate(file, table),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let mut table = Table::new(name, &[]);
    // `media validate` checks its own file and must not depend on --config.
    let standalone = matches!(
        cli.command,
        Command::Media {
            action: MediaAction::Validate { .. }
        }
    );
    let outcome = if standalone {
        let cfg = RunConfig {
            medium_name: WATER_293K.into(),
            medium: FluidMedium::water_293k(),
            registry: MediumRegistry::new(),
            tol: None,
        };
        dispatch(&cfg, &cli.command, &mut table)
    } else {
        resolve(&cli.global).and_then(|cfg| {
            table.meta("medium", &cfg.medium_name);
            dispatch(&cfg, &cli.command, &mut table)
        })
    };
    let failure = outcome.err();
    if let Some(f) = &failure {
        eprintln!("error: {}", f.message);
    }
    let timestamp = (!cli.global.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let written = match &cli.global.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            table.write(&mut w, cli.global.format, timestamp, failure.as_ref())?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&mut w, cli.global.format, timestamp, failure.as_ref())
        }
    };
    match written {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(1);
        }
        _ => {}
    }
    ExitCode::from(failure.map_or(0, |f| f.code as u8))
}
