//! Command-line front end. [`run_command`] does all the work so it can be
//! driven from tests; the binary only forwards `std::env::args`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::parse_config;
use crate::error::{Error, Result};
use crate::oracle::optimized_power;
use crate::simulator::{run_simulation, FeedbackMode, SimConfig};
use crate::sweep::{emit_csv, emit_gnuplot, format_sig6, run_sweep, Engine, Grid, MetricRow, SweepParameter, SweepSpec};
use crate::topology::{BoundaryMode, RegisterTopology};

#[derive(Debug, Parser)]
#[command(name = "spdc-mux", version, about = "Multiplexed heralded single-photon source: simulation and exact rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo run of one configuration; prints one CSV row.
    Simulate {
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep power, multiple or size; one CSV row per grid point and engine.
    Sweep {
        #[command(flatten)]
        base: BaseArgs,
        /// power | multiple | size
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        /// Number of grid points between --from and --to.
        #[arg(long)]
        steps: Option<usize>,
        /// Explicit comma-separated grid, instead of --from/--to/--steps.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// monte_carlo | oracle | both
        #[arg(long, default_value = "monte_carlo")]
        engine: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pump power at which lack and multi-photon rates are equal.
    Optimize {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Also run a Monte Carlo pass at the optimum.
        #[arg(long)]
        confirm: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reachable delays of every source as CSV.
    VerifyTopology {
        #[arg(long, default_value_t = 11)]
        sources: usize,
        /// Register depth.
        #[arg(long, default_value_t = 3)]
        steps: u32,
        #[arg(long, default_value = "constrained")]
        boundary: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact stationary rates of one configuration.
    Oracle {
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Experiment knobs. Flags override values read from `--config`; anything
/// left unset falls back to the 100-source, multiple-4 reference point.
#[derive(Debug, Args)]
struct BaseArgs {
    /// `key=value` config document.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sources: Option<usize>,
    #[arg(long)]
    multiple: Option<u32>,
    #[arg(long = "mean-pairs")]
    mean_pairs: Option<f64>,
    /// Register depth.
    #[arg(long = "register-steps", alias = "depth")]
    register_steps: Option<u32>,
    #[arg(long)]
    cycles: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// off | boost | turbo_boost
    #[arg(long)]
    feedback: Option<String>,
    #[arg(long = "feedback-strength")]
    feedback_strength: Option<f64>,
    /// constrained | unconstrained
    #[arg(long)]
    boundary: Option<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | gnuplot
    #[arg(long, default_value = "csv")]
    format: String,
}

pub const REFERENCE_SOURCES: usize = 100;
pub const REFERENCE_MULTIPLE: u32 = 4;
pub const REFERENCE_MEAN_PAIRS: f64 = 0.049;

impl BaseArgs {
    fn resolve(&self) -> Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => SimConfig::new(REFERENCE_SOURCES, REFERENCE_MULTIPLE, REFERENCE_MEAN_PAIRS),
        };
        if let Some(v) = self.sources {
            cfg.source_count = v;
        }
        if let Some(v) = self.multiple {
            cfg.multiple = v;
        }
        if let Some(v) = self.mean_pairs {
            cfg.mean_pairs = v;
        }
        if let Some(v) = self.register_steps {
            cfg.step_count = v;
        }
        if let Some(v) = self.cycles {
            cfg.cycles = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.feedback {
            cfg.feedback.mode = v.parse::<FeedbackMode>()?;
        }
        if let Some(v) = self.feedback_strength {
            cfg.feedback.strength = v;
        }
        if let Some(v) = &self.boundary {
            cfg.boundary = v.parse()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl OutputArgs {
    fn render(&self, rows: &[MetricRow]) -> Result<String> {
        match self.format.as_str() {
            "csv" => Ok(emit_csv(rows)),
            "gnuplot" => Ok(emit_gnuplot(rows)),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }

    fn write(&self, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
            None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Config(format!("stdout: {e}"))),
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate { base, output } => {
            let cfg = base.resolve()?;
            let metrics = run_simulation(&cfg)?;
            let text = output.render(&[MetricRow::from_metrics(cfg.mean_pairs, &cfg, &metrics)])?;
            output.write(&text, stdout)
        }
        Command::Oracle { base, output } => {
            let cfg = base.resolve()?;
            let text = output.render(&[MetricRow::oracle(cfg.mean_pairs, &cfg)?])?;
            output.write(&text, stdout)
        }
        Command::Sweep { base, param, from, to, steps, values, engine, output } => {
            let grid = match (values, from, to, steps) {
                (Some(v), None, None, None) => Grid::Values(v),
                (None, Some(from), Some(to), Some(steps)) => Grid::Range { from, to, steps },
                _ => return Err(Error::Config("give either --values or all of --from, --to, --steps".into())),
            };
            let spec = SweepSpec {
                parameter: param.parse::<SweepParameter>()?,
                grid,
                base: base.resolve()?,
                engine: engine.parse::<Engine>()?,
            };
            let text = output.render(&run_sweep(&spec)?)?;
            output.write(&text, stdout)
        }
        Command::Optimize { base, tolerance, confirm, output } => {
            let cfg = base.resolve()?;
            let point = optimized_power(cfg.source_count, cfg.multiple, cfg.step_count, tolerance)?;
            let mut text = String::from("mean_pairs,lack_rate,multi_rate,engine\n");
            text.push_str(&format!(
                "{},{},{},oracle\n",
                format_sig6(point.mean_pairs),
                format_sig6(point.rates.lack_rate),
                format_sig6(point.rates.multi_rate)
            ));
            if confirm {
                let mc_cfg = SimConfig { mean_pairs: point.mean_pairs, ..cfg };
                let m = run_simulation(&mc_cfg)?;
                let fmt = |x: Option<f64>| x.map_or("NA".to_string(), format_sig6);
                text.push_str(&format!(
                    "{},{},{},monte_carlo\n",
                    format_sig6(point.mean_pairs),
                    fmt(m.lack_rate()),
                    fmt(m.multi_rate())
                ));
            }
            output.write(&text, stdout)
        }
        Command::VerifyTopology { sources, steps, boundary, output } => {
            let topology = RegisterTopology::with_boundary(sources, steps, boundary.parse::<BoundaryMode>()?)?;
            output.write(&topology.accessibility_csv(), stdout)
        }
    }
}

/// Parses `argv` (program name first) and runs the subcommand. Returns the
/// process exit status: 0 on success, 2 on usage and input errors, 1 on
/// numerical or search failures.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) | Error::IndexOutOfRange { .. } => 2,
                Error::TooLarge(_) | Error::NoConvergence { .. } | Error::Search(_) => 1,
            }
        }
    }
}
