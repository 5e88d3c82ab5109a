use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holoherm::matrix::c;
use holoherm::{Complex64, Exec, MultiIndex};
use holoherm_cli::config::{TolProfile, TOL_PROFILE_ENV};
use holoherm_cli::pipeline::{self, construct_summary, default_points, transform_table, validate_summary, Example, Options};
use holoherm_cli::{CliError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "holoherm", version, about = "Construct and verify holomorphic Hermite families in Segal-Bargmann spaces")]
struct Cli {
    /// Tolerance profile: default, strict or loose.
    #[arg(long, global = true, env = TOL_PROFILE_ENV, default_value = "default")]
    tol_profile: String,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Override the configured max_degree.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Override the Gauss-Hermite node count per axis.
    #[arg(long)]
    nodes: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a configuration and the triple it defines.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Build Q, S and ρ² from a configuration.
    Construct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        rho_fraction: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification suite and emit a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        rho_fraction: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce one of the closed-form examples.
    Example {
        name: Example,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate T h_α at sample points as CSV.
    Transform {
        #[arg(long)]
        config: PathBuf,
        /// Hermite index, comma separated (e.g. "1" or "1,0").
        #[arg(long, default_value = "0")]
        hermite: String,
        /// Points as "re:im,re:im;..." (one complex entry per coordinate).
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    RunConfig::from_json(&text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn parse_points(s: &str, n: usize) -> Result<Vec<Vec<Complex64>>, CliError> {
    let bad = |m: String| CliError::Config { path: "points".into(), message: m };
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let z = p
                .split(',')
                .map(|e| {
                    let (re, im) = e.split_once(':').unwrap_or((e, "0"));
                    let parse = |t: &str| t.trim().parse::<f64>().map_err(|err| bad(format!("{e:?}: {err}")));
                    Ok(c(parse(re)?, parse(im)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            if z.len() != n {
                return Err(bad(format!("point {p:?} has {} entries, expected {n}", z.len())));
            }
            Ok(z)
        })
        .collect()
}

fn apply_common(cfg: &mut RunConfig, common: &Common) {
    if let Some(d) = common.max_degree {
        cfg.max_degree = d;
    }
    if let Some(k) = common.nodes {
        cfg.quadrature.nodes = k;
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let opts = Options {
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
        profile: TolProfile::parse(&cli.tol_profile)?,
        ..Options::default()
    };
    match cli.command {
        Command::Validate { config } => {
            emit(&None, &json(&validate_summary(&load(&config)?)?))?;
            Ok(0)
        }
        Command::Construct { config, rho_fraction, out } => {
            let mut cfg = load(&config)?;
            if let Some(f) = rho_fraction {
                cfg.rho_fraction = f;
            }
            emit(&out, &json(&construct_summary(&cfg)?))?;
            Ok(0)
        }
        Command::Verify { config, rho_fraction, common } => {
            let mut cfg = load(&config)?;
            if let Some(f) = rho_fraction {
                cfg.rho_fraction = f;
            }
            apply_common(&mut cfg, &common);
            let report = pipeline::run_verify(&cfg, &opts)?;
            emit(&common.out, &report.to_json())?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Example { name, s, common } => {
            let report = pipeline::run_example(name, s, |cfg| apply_common(cfg, &common), &opts)?;
            emit(&common.out, &report.to_json())?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Transform { config, hermite, points, nodes, out } => {
            let cfg = load(&config)?;
            let alpha = hermite
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config { path: "hermite".into(), message: e.to_string() })?;
            let pts = match points {
                Some(p) => parse_points(&p, cfg.n)?,
                None => default_points(cfg.n),
            };
            let table = transform_table(&cfg, &MultiIndex::new(alpha), &pts, nodes.unwrap_or(cfg.quadrature.nodes), opts.exec)?;
            emit(&out, table.trim_end())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
