//! Subcommand dispatch: `chanrad <subcommand> --config <path> [--out <prefix>] [--workers N]`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, ConfigError, PotentialChoice, RunConfig};
use crate::error::Error;
use crate::model::ChannelModel;
use crate::output::{
    levels_csv, lines_csv, output_path, peaks_csv, populations_csv, spectrum_csv, write_atomic,
};
use crate::spectrum::{build_spectrum_grid, SpectrumGrid};
use crate::states::PotentialModel;
use crate::validate::{format_table, run_validation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PHYSICS: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "chanrad",
    version,
    about = "Planar channeling radiation spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transverse energy levels
    Levels(Common),
    /// Entry amplitudes of the bound states
    Populate(Common),
    /// Radiative transitions with their amplitudes
    Lines(Common),
    /// Incoherent and coherent intensities on the (θ, ω) grid
    Spectrum(Common),
    /// Local maxima of the coherent intensity per θ row
    Peaks(Common),
    /// Run the built-in verification suite
    Validate(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Output path prefix; files are written as <prefix>_<table>.csv
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Levels(c)
            | Command::Populate(c)
            | Command::Lines(c)
            | Command::Spectrum(c)
            | Command::Peaks(c)
            | Command::Validate(c) => c,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Run(Error),
    Validation,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::IoFailure {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Loads the config file and applies command-line overrides. A relative
/// `potential_path` is taken relative to the config file.
pub fn load_config(common: &Common) -> Result<RunConfig, (i32, String)> {
    let text = read(&common.config).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let mut cfg = parse_config(&text).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    if let PotentialChoice::Tabulated { path } = &mut cfg.potential {
        if path.is_relative() {
            if let Some(dir) = common.config.parent() {
                *path = dir.join(&*path);
            }
        }
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(w) = common.workers {
        cfg.workers = w as usize;
    }
    Ok(cfg)
}

pub fn potential_model(cfg: &RunConfig) -> Result<PotentialModel, Error> {
    let b = &cfg.beam;
    Ok(match &cfg.potential {
        PotentialChoice::Harmonic => PotentialModel::Harmonic { u0: b.u0, dp: b.dp },
        PotentialChoice::PoschlTeller { a } => PotentialModel::PoschlTeller { u0: b.u0, a: *a },
        PotentialChoice::Tabulated { path } => PotentialModel::parse_tabulated(&read(path)?)?,
    })
}

pub fn build_model(cfg: &RunConfig) -> Result<ChannelModel, Error> {
    ChannelModel::build(&cfg.beam, &potential_model(cfg)?, &cfg.grid)
}

pub fn build_grid(cfg: &RunConfig, model: &ChannelModel) -> Result<SpectrumGrid, Error> {
    build_spectrum_grid(
        &model.lines,
        &model.kin,
        &cfg.theta.values(),
        &cfg.omega.values(),
        cfg.kernel,
        cfg.workers,
    )
}

fn emit(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), Error> {
    let path = output_path(&cfg.out, name);
    write_atomic(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<(), Failure> {
    if let Command::Validate(_) = command {
        let checks = run_validation();
        print!("{}", format_table(&checks));
        return if checks.iter().all(|c| c.passed) {
            Ok(())
        } else {
            Err(Failure::Validation)
        };
    }
    let model = build_model(cfg)?;
    if model.amplitudes.low_capture {
        eprintln!(
            "warning: only {:.4} of the incident wave is captured in bound states",
            model.amplitudes.captured_fraction
        );
    }
    match command {
        Command::Levels(_) => emit(cfg, "levels.csv", &levels_csv(&model.levels))?,
        Command::Populate(_) => emit(cfg, "populations.csv", &populations_csv(&model.amplitudes))?,
        Command::Lines(_) => emit(cfg, "lines.csv", &lines_csv(&model.lines))?,
        Command::Spectrum(_) => emit(
            cfg,
            "spectrum.csv",
            &spectrum_csv(&build_grid(cfg, &model)?),
        )?,
        Command::Peaks(_) => emit(cfg, "peaks.csv", &peaks_csv(&build_grid(cfg, &model)?))?,
        Command::Validate(_) => unreachable!(),
    }
    Ok(())
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match load_config(cli.command.common()) {
        Ok(cfg) => cfg,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Run(e @ Error::IoFailure { .. })) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_PHYSICS
        }
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            EXIT_VALIDATION
        }
    }
}
