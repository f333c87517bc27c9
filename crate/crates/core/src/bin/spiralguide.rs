//! `spiralguide` command-line driver.
//!
//! Every subcommand except `verify` reads a JSON run configuration, writes its
//! JSON and CSV outputs into the output directory and prints the paths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spiralguide::acceptance;
use spiralguide::asymptotics;
use spiralguide::config::RunConfig;
use spiralguide::experiments::{self, SweepParam, Table};
use spiralguide::{Error, Result};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "spiralguide", version, about = "Dirichlet Laplacian spectra of spiral waveguides")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps and tables; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Significant digits in CSV output (overrides the configuration).
    #[arg(long, global = true)]
    precision: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate r, s, κ and the widths along the spiral.
    Geometry {
        /// Number of angular steps.
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Lowest eigenvalues, or all eigenvalues below window_top.
    Spectrum,
    /// Eigenvalues along a parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        param: Param,
        /// Explicit grid values, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "range")]
        values: Vec<f64>,
        /// Uniform grid `start:stop:step`.
        #[arg(long)]
        range: Option<String>,
    },
    /// Sample eigenfunctions on a Cartesian raster.
    Modes {
        /// 1-based mode indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long, default_value_t = 600)]
        resolution: usize,
    },
    /// Eigenvalue counting function on an energy grid.
    Count {
        /// Energies, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        energies: Vec<f64>,
    },
    /// Neumann/Dirichlet brackets along a ladder of truncation angles.
    Bracket {
        /// Truncation angles, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        theta_max: Vec<f64>,
    },
    /// Evaluate the asymptotic laws that apply to the configured spiral.
    Asymptotics,
    /// Run the acceptance criteria.
    Verify {
        /// Only these criteria (all when empty).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Param {
    Beta,
    B,
}

impl From<Param> for SweepParam {
    fn from(p: Param) -> Self {
        match p {
            Param::Beta => SweepParam::Beta,
            Param::B => SweepParam::B,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::InvalidSpec(_)
        | Error::InvalidInput(_)
        | Error::Domain { .. }
        | Error::InsufficientWindow { .. }
        | Error::IndexOutOfRange { .. }
        | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Reads the configuration without the solve-only checks, then applies the
/// command-line overrides.
fn load(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config <path.json> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut cfg: RunConfig = serde_json::from_str(&text)?;
    if let Some(dir) = &cli.out {
        cfg.output.dir = Some(dir.clone());
    }
    if let Some(p) = cli.precision {
        cfg.precision = p;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8> {
    if let Command::Verify { only } = &cli.command {
        return verify(only);
    }
    let cfg = load(&cli)?;
    if let Some(dir) = &cfg.output.dir {
        fs::create_dir_all(dir)?;
    }
    match cli.command {
        Command::Geometry { steps } => {
            spiralguide::Spiral::new(cfg.spec.clone()).map_err(|e| Error::Config(e.to_string()))?;
            let t = experiments::geometry_table(&cfg.spec, cfg.theta_max(), steps)?;
            write_csv(&cfg, "geometry.csv", &t)?;
        }
        Command::Spectrum => {
            cfg.validate()?;
            let r = experiments::spectrum(&cfg)?;
            write_json(&cfg, "spectrum.json", &r)?;
            write_csv(&cfg, "spectrum.csv", &r.table())?;
        }
        Command::Sweep { param, values, range } => {
            cfg.validate()?;
            let grid = match range {
                Some(r) => parse_range(&r)?,
                None => values,
            };
            let s = experiments::sweep(&cfg, param.into(), &grid)?;
            for p in s.points.iter().filter(|p| p.error.is_some()) {
                eprintln!("warning: {} = {}: {}", s.param.name(), p.param, p.error.as_deref().unwrap_or(""));
            }
            write_json(&cfg, "sweep.json", &s)?;
            write_csv(&cfg, "sweep.csv", &s.table())?;
        }
        Command::Modes { indices, resolution } => {
            let mut c = cfg.clone();
            if c.k.is_none() && c.window_top.is_none() {
                c.k = indices.iter().copied().max();
            }
            c.validate()?;
            let out = experiments::modes(&c, &indices, resolution)?;
            let summaries: Vec<_> = out.iter().map(|(s, _)| s).collect();
            write_json(&c, "modes.json", &summaries)?;
            let stem = c.output.csv.clone().unwrap_or_else(|| "mode".into());
            let stem = stem.strip_suffix(".csv").unwrap_or(&stem).to_string();
            for (s, raster) in &out {
                let path = c.output_path(&format!("{stem}_{}.csv", s.index));
                raster.table().write_csv(BufWriter::new(File::create(&path)?), c.precision)?;
                println!("{}", path.display());
            }
        }
        Command::Count { energies } => {
            cfg.validate()?;
            let rows = experiments::count(&cfg, &energies)?;
            write_json(&cfg, "count.json", &rows)?;
            write_csv(&cfg, "count.csv", &experiments::count_table(&rows))?;
        }
        Command::Bracket { theta_max } => {
            cfg.validate()?;
            let rows = experiments::bracket_ladder(&cfg, &theta_max)?;
            write_json(&cfg, "bracket.json", &rows)?;
            write_csv(&cfg, "bracket.csv", &experiments::ladder_table(&rows))?;
        }
        Command::Asymptotics => {
            let r = asymptotics::report(&cfg.spec)?;
            write_json(&cfg, "asymptotics.json", &r)?;
        }
        Command::Verify { .. } => unreachable!(),
    }
    Ok(0)
}

fn verify(only: &[usize]) -> Result<u8> {
    let outcomes: Vec<_> = if only.is_empty() {
        acceptance::run_all()
    } else {
        if let Some(&id) = only.iter().find(|&&id| !acceptance::CRITERIA.iter().any(|(c, _)| *c == id)) {
            return Err(Error::Config(format!("no acceptance criterion {id}")));
        }
        only.iter().map(|&id| acceptance::run(id)).collect()
    };
    print!("{}", acceptance::render(&outcomes));
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("\n{passed}/{} criteria pass", outcomes.len());
    Ok(if passed == outcomes.len() { 0 } else { EXIT_ACCEPTANCE })
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("range must be start:stop:step (got {s:?})"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(stop >= start) {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

fn write_json<T: Serialize + ?Sized>(cfg: &RunConfig, default: &str, value: &T) -> Result<()> {
    let path = cfg.output_path(cfg.output.json.as_deref().unwrap_or(default));
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(&path, text + "\n")?;
    println!("{}", path.display());
    Ok(())
}

fn write_csv(cfg: &RunConfig, default: &str, table: &Table) -> Result<()> {
    let path = cfg.output_path(cfg.output.csv.as_deref().unwrap_or(default));
    table.write_csv(BufWriter::new(File::create(&path)?), cfg.precision)?;
    println!("{}", path.display());
    Ok(())
}
