//! Scenario runner for the three-sphere swimmer: configuration, pipelines and output files.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use log::info;
use rayon::prelude::*;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use scenario::{run_scenario, ScenarioOutcome, Summary};

/// Files written for one scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Runs a scenario and writes `<stem>.csv`, `<stem>.json` and optionally `<stem>.svg`.
pub fn run_and_write(config: &ScenarioConfig) -> Result<WrittenFiles> {
    let outcome = run_scenario(config)?;
    let dir = config.output_dir();
    output::create_dir(&dir)?;
    let stem = config.stem();
    let csv = output::write_trajectory(&dir.join(format!("{stem}.csv")), &outcome.trajectory)?;
    let json = output::write_file(
        &dir.join(format!("{stem}.json")),
        output::to_json(&outcome.summary).as_bytes(),
    )?;
    let svg = if config.output.plot {
        let text = plot::render(&outcome.geometry, &outcome.trajectory)?;
        Some(output::write_file(&dir.join(format!("{stem}.svg")), text.as_bytes())?)
    } else {
        None
    };
    info!("wrote {}", json.display());
    Ok(WrittenFiles { csv, json, svg })
}

/// Runs independent scenarios concurrently; stems must be distinct.
///
/// Every scenario is attempted; the first failure in input order is returned.
pub fn run_sweep(configs: &[ScenarioConfig]) -> Result<Vec<WrittenFiles>> {
    let mut stems: Vec<(PathBuf, String)> = configs.iter().map(|c| (c.output_dir(), c.stem())).collect();
    stems.sort();
    if let Some(w) = stems.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(format!(
            "sweep has two scenarios writing {:?}; give them distinct names",
            w[0].1
        )));
    }
    let results: Vec<Result<WrittenFiles>> = configs
        .par_iter()
        .map(|c| {
            run_and_write(c).map_err(|e| CliError::Scenario {
                name: c.stem(),
                source: Box::new(e),
            })
        })
        .collect();
    results.into_iter().collect()
}
