//! Scenario configuration: a JSON document with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spr3_core::{DisplacementTarget, SwimmerGeometry};

use crate::error::{CliError, Result};

/// Ratio `a/ξ₀` above which the long-arm regime is considered unreliable.
pub const REGIME_LIMIT: f64 = 0.2;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SPR3_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    PureX,
    PureY,
    PureTheta,
}

impl Scenario {
    pub fn target(self, magnitude: f64) -> DisplacementTarget {
        match self {
            Scenario::PureX => DisplacementTarget::new(magnitude, 0.0, 0.0),
            Scenario::PureY => DisplacementTarget::new(0.0, magnitude, 0.0),
            Scenario::PureTheta => DisplacementTarget::new(0.0, 0.0, magnitude),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::PureX => "pure-x",
            Scenario::PureY => "pure-y",
            Scenario::PureTheta => "pure-theta",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pure-x" => Ok(Scenario::PureX),
            "pure-y" => Ok(Scenario::PureY),
            "pure-theta" => Ok(Scenario::PureTheta),
            other => Err(CliError::Config(format!(
                "unknown scenario {other:?} (expected pure-x, pure-y or pure-theta)"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    LeadingOrder,
    Exact,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "leading-order" => Ok(Variant::LeadingOrder),
            "exact" => Ok(Variant::Exact),
            other => Err(CliError::Config(format!(
                "unknown variant {other:?} (expected leading-order or exact)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSource {
    Series,
    #[default]
    Extracted,
}

impl CoefficientSource {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(CoefficientSource::Series),
            "extracted" => Ok(CoefficientSource::Extracted),
            other => Err(CliError::Config(format!(
                "unknown coefficient source {other:?} (expected series or extracted)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub radius: f64,
    pub arm_length: f64,
    pub viscosity: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            radius: 0.1,
            arm_length: 1.0,
            viscosity: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub steps_per_loop: usize,
    pub loops: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            steps_per_loop: 256,
            loops: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Output directory; falls back to `$SPR3_OUT_DIR`, then the working directory.
    pub dir: Option<PathBuf>,
    pub plot: bool,
}

/// Full description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Stem of the output files; defaults to the scenario name.
    pub name: Option<String>,
    pub geometry: GeometryConfig,
    pub scenario: Option<Scenario>,
    pub magnitude: f64,
    /// Explicit `(δx, δy, δθ)`; mutually exclusive with `scenario`.
    pub target: Option<[f64; 3]>,
    pub variant: Variant,
    pub coefficients: CoefficientSource,
    pub integrator: IntegratorConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: None,
            geometry: GeometryConfig::default(),
            scenario: None,
            magnitude: 0.01,
            target: None,
            variant: Variant::default(),
            coefficients: CoefficientSource::default(),
            integrator: IntegratorConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid scenario config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Loads a JSON array of scenarios.
    pub fn load_sweep(path: &Path) -> Result<Vec<Self>> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let list: Vec<Self> =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid sweep file: {e}")))?;
        if list.is_empty() {
            return Err(CliError::Config("sweep file lists no scenarios".into()));
        }
        Ok(list)
    }

    pub fn geometry(&self) -> Result<SwimmerGeometry> {
        let g = &self.geometry;
        Ok(SwimmerGeometry::new(g.radius, g.arm_length, g.viscosity)?)
    }

    /// Named scenario in effect; `pure-theta` when neither a scenario nor a target is given.
    pub fn effective_scenario(&self) -> Option<Scenario> {
        match (self.scenario, self.target) {
            (Some(s), _) => Some(s),
            (None, None) => Some(Scenario::PureTheta),
            (None, Some(_)) => None,
        }
    }

    pub fn displacement_target(&self) -> Result<DisplacementTarget> {
        if self.scenario.is_some() && self.target.is_some() {
            return Err(CliError::Config(
                "give either a named scenario or an explicit target, not both".into(),
            ));
        }
        let target = match (self.effective_scenario(), self.target) {
            (Some(s), _) => {
                if !(self.magnitude.is_finite() && self.magnitude != 0.0) {
                    return Err(CliError::Config(format!(
                        "scenario magnitude must be finite and nonzero, got {}",
                        self.magnitude
                    )));
                }
                s.target(self.magnitude)
            }
            (None, Some([x, y, t])) => DisplacementTarget::new(x, y, t),
            (None, None) => unreachable!("a default scenario always applies"),
        };
        if target.0.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("target must be finite".into()));
        }
        Ok(target)
    }

    /// File stem used for this scenario's outputs.
    pub fn stem(&self) -> String {
        match (&self.name, self.effective_scenario()) {
            (Some(name), _) => name.clone(),
            (None, Some(s)) => s.name().to_string(),
            (None, None) => "custom".to_string(),
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    /// Warning text when `a/ξ₀` leaves the long-arm regime.
    pub fn regime_warning(&self) -> Option<String> {
        let ratio = self.geometry.radius / self.geometry.arm_length;
        (ratio >= REGIME_LIMIT).then(|| {
            format!(
                "a/xi0 = {ratio:.3} is outside the long-arm regime (a/xi0 < {REGIME_LIMIT}); \
                 series coefficients and leading-order dynamics may be inaccurate"
            )
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry()?;
        self.displacement_target()?;
        if self.integrator.loops == 0 {
            return Err(CliError::Config("loops must be at least 1".into()));
        }
        let min_steps = match self.variant {
            Variant::LeadingOrder => 64,
            Variant::Exact => 1,
        };
        if self.integrator.steps_per_loop < min_steps {
            return Err(CliError::Config(format!(
                "steps per loop must be at least {min_steps}, got {}",
                self.integrator.steps_per_loop
            )));
        }
        if let Some(name) = &self.name {
            if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
                return Err(CliError::Config(format!("invalid scenario name {name:?}")));
            }
        }
        Ok(())
    }
}
