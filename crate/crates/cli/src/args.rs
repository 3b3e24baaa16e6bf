//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CoefficientSource, Scenario, ScenarioConfig, Variant};
use crate::error::{CliError, Result};
use crate::output;
use crate::report::coefficients_report;
use crate::{run_and_write, run_sweep, WrittenFiles};

#[derive(Debug, Parser)]
#[command(
    name = "spr3",
    version,
    about = "Three-sphere swimmer: optimal strokes and trajectories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the optimal stroke for a target and integrate it.
    Run(Box<RunArgs>),
    /// Compare extracted coefficients with the long-arm series over a sweep of a/xi0.
    Coefficients(CoefficientsArgs),
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// JSON scenario file; flags override its fields.
    #[arg(long, conflicts_with = "sweep")]
    pub config: Option<PathBuf>,
    /// JSON array of scenarios run concurrently; flags override every entry.
    #[arg(long)]
    pub sweep: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
    /// Ball radius a.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Reference arm length xi0.
    #[arg(long)]
    pub arm_length: Option<f64>,
    #[arg(long)]
    pub viscosity: Option<f64>,
    /// pure-x, pure-y or pure-theta.
    #[arg(long, conflicts_with = "dp")]
    pub scenario: Option<String>,
    /// Size d of a named scenario.
    #[arg(long, allow_hyphen_values = true)]
    pub magnitude: Option<f64>,
    /// Explicit target displacement.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "THETA"], allow_hyphen_values = true)]
    pub dp: Option<Vec<f64>>,
    /// Integrator steps per loop.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub loops: Option<usize>,
    /// leading-order or exact.
    #[arg(long)]
    pub variant: Option<String>,
    /// series or extracted.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Output directory (default: $SPR3_OUT_DIR, else the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG figure.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct CoefficientsArgs {
    /// Values of a/xi0.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [0.04, 0.02, 0.01])]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub arm_length: f64,
    #[arg(long, default_value_t = 1.0)]
    pub viscosity: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Applies the flag overrides on top of a configuration.
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        if let Some(v) = &self.name {
            config.name = Some(v.clone());
        }
        if let Some(v) = self.radius {
            config.geometry.radius = v;
        }
        if let Some(v) = self.arm_length {
            config.geometry.arm_length = v;
        }
        if let Some(v) = self.viscosity {
            config.geometry.viscosity = v;
        }
        if let Some(s) = &self.scenario {
            config.scenario = Some(Scenario::parse(s)?);
            config.target = None;
        }
        if let Some(v) = self.magnitude {
            config.magnitude = v;
        }
        if let Some(dp) = &self.dp {
            config.target = Some([dp[0], dp[1], dp[2]]);
            config.scenario = None;
        }
        if let Some(v) = self.steps {
            config.integrator.steps_per_loop = v;
        }
        if let Some(v) = self.loops {
            config.integrator.loops = v;
        }
        if let Some(v) = &self.variant {
            config.variant = Variant::parse(v)?;
        }
        if let Some(v) = &self.coeffs {
            config.coefficients = CoefficientSource::parse(v)?;
        }
        if let Some(v) = &self.out {
            config.output.dir = Some(v.clone());
        }
        if self.plot {
            config.output.plot = true;
        }
        Ok(())
    }

    pub fn scenarios(&self) -> Result<Vec<ScenarioConfig>> {
        let mut configs = match (&self.config, &self.sweep) {
            (_, Some(path)) => {
                if self.name.is_some() {
                    return Err(CliError::Config("--name cannot be combined with --sweep".into()));
                }
                ScenarioConfig::load_sweep(path)?
            }
            (Some(path), None) => vec![ScenarioConfig::load(path)?],
            (None, None) => vec![ScenarioConfig::default()],
        };
        for c in &mut configs {
            self.apply(c)?;
        }
        Ok(configs)
    }
}

fn report_written(files: &WrittenFiles) {
    println!("{}", files.csv.display());
    println!("{}", files.json.display());
    if let Some(svg) = &files.svg {
        println!("{}", svg.display());
    }
}

/// Executes a parsed command line, printing the paths of the files written.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(args) => {
            let configs = args.scenarios()?;
            if args.sweep.is_some() {
                run_sweep(&configs)?.iter().for_each(report_written);
            } else {
                report_written(&run_and_write(&configs[0])?);
            }
        }
        Command::Coefficients(args) => {
            let report = coefficients_report(args.arm_length, args.viscosity, &args.ratios)?;
            let text = output::to_json(&report);
            match &args.out {
                Some(path) => {
                    output::write_file(path, text.as_bytes())?;
                    println!("{}", path.display());
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}
