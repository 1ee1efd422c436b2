use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use atomlaser::oscillator::{f_of_n, spectrum_level};
use atomlaser::{DeformationParams, LambdaSign, ThetaModel};
use atomlaser_cli::{
    emit_csv, emit_svg, parse_config, read_config_input, reproduce_figures, run, write_files,
    CliError, ConfigInput, Figure, Format, PathSelect, RunConfig,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "atomlaser",
    version,
    about = "Deformed atom-laser quantum statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f(n) and the level n(c + d n) of the deformed oscillator.
    Spectrum {
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        tau: f64,
        /// Highest level listed.
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form observables on the time grid.
    Evolve(Common),
    /// Polariton Fock-space oracle.
    Oracle(Common),
    /// Exact two-mode evolution.
    Exact(Common),
    /// All paths plus the discrepancy report.
    Compare(Common),
    /// Render the fig1a, fig1b and fig2 parameter sets.
    Figures {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of fig1a, fig1b, fig2.
        #[arg(long, value_delimiter = ',', default_values_t = Figure::ALL.to_vec())]
        which: Vec<Figure>,
        /// Add the polariton oracle curve to every figure.
        #[arg(long)]
        oracle_overlay: bool,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Rf coupling Ω.
    #[arg(long, allow_negative_numbers = true)]
    coupling: Option<f64>,
    /// Condensate atom number N_c.
    #[arg(long, allow_negative_numbers = true)]
    nc: Option<f64>,
    /// Coherent amplitude |α|.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    xi_weight: Option<f64>,
    #[arg(long)]
    lambda_sign: Option<LambdaSign>,
    #[arg(long)]
    theta_model: Option<ThetaModel>,
    #[arg(long)]
    workers: Option<usize>,
    /// SVG channel: re_a, im_a, n, nn, re_a2, im_a2, Q, S1, S2.
    #[arg(long)]
    channel: Option<String>,
    /// Output directory; without it the first format goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
}

impl Common {
    fn overrides(&self, path: Option<PathSelect>) -> ConfigInput {
        ConfigInput {
            tau: self.tau,
            omega: self.omega,
            coupling: self.coupling,
            n_c: self.nc,
            alpha: self.alpha,
            theta: self.theta,
            t_start: self.t_start,
            t_max: self.t_max,
            samples: self.samples,
            path,
            xi_weight: self.xi_weight,
            lambda_sign: self.lambda_sign,
            theta_model: self.theta_model,
            nmax: self.nmax,
            kmax: self.kmax,
            workers: self.workers,
            channel: self.channel.clone(),
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }

    fn file_bytes(&self) -> Result<Vec<u8>, CliError> {
        match &self.config {
            Some(p) => std::fs::read(p).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            }),
            None => Ok(Vec::new()),
        }
    }

    fn resolve(&self, path: PathSelect) -> Result<RunConfig, CliError> {
        parse_config(&self.file_bytes()?, self.overrides(Some(path)))
    }

    /// File values with flags on top, unresolved.
    fn merged_input(&self) -> Result<ConfigInput, CliError> {
        Ok(read_config_input(&self.file_bytes()?)?.merged(self.overrides(None)))
    }
}

fn io_err(path: PathBuf) -> impl FnOnce(std::io::Error) -> CliError {
    move |source| CliError::Io { path, source }
}

fn write_stdout(bytes: &[u8]) -> Result<(), CliError> {
    std::io::stdout()
        .lock()
        .write_all(bytes)
        .map_err(io_err(PathBuf::from("<stdout>")))
}

fn spectrum(tau: f64, nmax: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let def = DeformationParams::new(tau).map_err(|v| CliError::Validation {
        violations: v,
        other: Vec::new(),
    })?;
    let mut s = String::from("n,f,level\n");
    for n in 0..=nmax {
        s.push_str(&format!(
            "{n},{:.16e},{:.16e}\n",
            f_of_n(n, &def),
            spectrum_level(n, &def)
        ));
    }
    match out {
        Some(p) => std::fs::write(&p, s).map_err(io_err(p)),
        None => write_stdout(s.as_bytes()),
    }
}

#[derive(Serialize)]
struct RunEcho<'a> {
    config: atomlaser_cli::ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a atomlaser::oracle::DiscrepancyReport>,
}

fn run_paths(common: &Common, path: PathSelect, stem: &str) -> Result<(), CliError> {
    let mut cfg = common.resolve(path)?;
    if common.format.is_none() && path == PathSelect::All {
        cfg.formats = vec![Format::Csv, Format::Json];
    }
    let out = run(&cfg)?;
    if let Some(report) = &out.report {
        for c in &report.comparisons {
            for d in &c.deviations {
                eprintln!(
                    "{} vs {}: {:<3} max |dev| = {:.3e} at t = {:.4}",
                    c.candidate.as_str(),
                    c.reference.as_str(),
                    d.observable,
                    d.max_abs,
                    d.t_at_max
                );
            }
        }
    }

    let mut files = Vec::new();
    for f in &cfg.formats {
        match f {
            Format::Csv => files.push((format!("{stem}.csv"), emit_csv(&out.series))),
            Format::Svg => files.push((
                format!("{stem}_{}.svg", cfg.channel.to_lowercase()),
                emit_svg(&out.series, &cfg.channel)?,
            )),
            Format::Json => {
                let echo = RunEcho {
                    config: cfg.echo(),
                    report: out.report.as_ref(),
                };
                let mut bytes = serde_json::to_vec_pretty(&echo).expect("serializable");
                bytes.push(b'\n');
                files.push((format!("{stem}.json"), bytes));
            }
        }
    }
    match &cfg.out {
        Some(dir) => {
            for p in write_files(dir, &files)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        None => match files.first() {
            Some((_, bytes)) => write_stdout(bytes),
            None => Ok(()),
        },
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Spectrum { tau, nmax, out } => spectrum(tau, nmax, out),
        Command::Evolve(c) => run_paths(&c, PathSelect::Closed, "evolve"),
        Command::Oracle(c) => run_paths(&c, PathSelect::Oracle, "oracle"),
        Command::Exact(c) => run_paths(&c, PathSelect::Exact, "exact"),
        Command::Compare(c) => run_paths(&c, PathSelect::All, "compare"),
        Command::Figures {
            common,
            which,
            oracle_overlay,
        } => {
            let base = common.merged_input()?;
            let dir = base.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            for art in reproduce_figures(&which, oracle_overlay, &base)? {
                for p in write_files(&dir, &art.files)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Truncation(_)) {
                eprintln!("hint: raise --nmax (polariton oracle) or --kmax (exact path)");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
