//! Run configuration: a single TOML document describing the potential, the
//! task list and the output layout. Parsing is strict (unknown keys are
//! rejected) and every numeric knob is validated before any work starts, so
//! a bad config fails with a usage error rather than mid-run.

use serde::Deserialize;
use ssf_core::potential::PotentialSpec;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for reports and curve files, created on demand. Relative
    /// paths are resolved under `SSF_LAB_OUT` when that variable is set.
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Significant digits kept in emitted numeric fields.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_precision() -> usize {
    12
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_dir(),
            precision: default_precision(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    /// Symbolic coefficient tables, checked against the recurrence route.
    Invariants {
        #[serde(default = "default_max_n")]
        max_n: u32,
    },
    /// Shift-function curve on an energy grid, with the determinant columns.
    Ssf { grid: Vec<f64> },
    /// Trace identities of the requested orders.
    Identities {
        variant: IdentityVariant,
        orders: Vec<u32>,
        #[serde(default = "default_tolerance")]
        tolerance: f64,
    },
    /// Heat trace difference along three routes at the given times.
    Heat {
        times: Vec<f64>,
        #[serde(default = "default_heat_tolerance")]
        tolerance: f64,
    },
    /// Resolvent trace difference at one point off the positive axis.
    Resolvent {
        /// Spectral parameter as [re, im].
        z: [f64; 2],
        #[serde(default = "default_power")]
        power: u32,
        #[serde(default = "default_tolerance")]
        tolerance: f64,
    },
    /// Bundled consistency sweep: spectrum, threshold behaviour,
    /// determinant phase and the low-order identities.
    CheckAll {
        #[serde(default = "default_tolerance")]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVariant {
    Integer,
    Half,
}

fn default_max_n() -> u32 {
    4
}

fn default_tolerance() -> f64 {
    1e-4
}

fn default_heat_tolerance() -> f64 {
    0.02
}

fn default_power() -> u32 {
    1
}

impl TaskSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TaskSpec::Invariants { .. } => "invariants",
            TaskSpec::Ssf { .. } => "ssf",
            TaskSpec::Identities {
                variant: IdentityVariant::Integer,
                ..
            } => "integer_identities",
            TaskSpec::Identities {
                variant: IdentityVariant::Half,
                ..
            } => "half_identities",
            TaskSpec::Heat { .. } => "heat",
            TaskSpec::Resolvent { .. } => "resolvent",
            TaskSpec::CheckAll { .. } => "check_all",
        }
    }

    /// Scheduling rank: symbolic tables first, curves next, identities and
    /// composite checks last.
    pub fn rank(&self) -> u8 {
        match self {
            TaskSpec::Invariants { .. } => 0,
            TaskSpec::Ssf { .. } => 1,
            TaskSpec::Heat { .. } | TaskSpec::Resolvent { .. } => 2,
            TaskSpec::Identities { .. } => 3,
            TaskSpec::CheckAll { .. } => 4,
        }
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn increasing_positive(grid: &[f64]) -> bool {
    !grid.is_empty()
        && grid[0] > 0.0
        && grid.iter().all(|x| x.is_finite())
        && grid.windows(2).all(|w| w[0] < w[1])
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(RunConfig, Vec<u8>), String> {
        let bytes = std::fs::read(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| format!("config {} is not valid UTF-8", path.display()))?;
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| format!("config {}: {e}", path.display()))?;
        cfg.validate()?;
        Ok((cfg, bytes))
    }

    pub fn validate(&self) -> Result<(), String> {
        ensure(
            (1..=3).contains(&self.potential.dim),
            "potential dimension must be 1, 2 or 3",
        )?;
        ensure(
            (1..=17).contains(&self.output.precision),
            "output precision must lie in 1..=17",
        )?;
        for (i, t) in self.tasks.iter().enumerate() {
            let at = |msg: &str| format!("task {}: {msg}", i + 1);
            match t {
                TaskSpec::Invariants { max_n } => {
                    ensure(*max_n >= 1, &at("max_n must be at least 1"))?;
                }
                TaskSpec::Ssf { grid } => {
                    ensure(
                        increasing_positive(grid),
                        &at("grid must be nonempty, positive and strictly increasing"),
                    )?;
                }
                TaskSpec::Identities {
                    orders, tolerance, ..
                } => {
                    ensure(!orders.is_empty(), &at("orders must be nonempty"))?;
                    ensure(
                        tolerance.is_finite() && *tolerance > 0.0,
                        &at("tolerance must be positive"),
                    )?;
                }
                TaskSpec::Heat { times, tolerance } => {
                    ensure(
                        !times.is_empty() && times.iter().all(|t| t.is_finite() && *t > 0.0),
                        &at("times must be nonempty and positive"),
                    )?;
                    ensure(
                        tolerance.is_finite() && *tolerance > 0.0,
                        &at("tolerance must be positive"),
                    )?;
                }
                TaskSpec::Resolvent { z, power, tolerance } => {
                    ensure(
                        z.iter().all(|c| c.is_finite()),
                        &at("spectral parameter must be finite"),
                    )?;
                    ensure(*power >= 1, &at("resolvent power must be at least 1"))?;
                    ensure(
                        tolerance.is_finite() && *tolerance > 0.0,
                        &at("tolerance must be positive"),
                    )?;
                }
                TaskSpec::CheckAll { tolerance } => {
                    ensure(
                        tolerance.is_finite() && *tolerance > 0.0,
                        &at("tolerance must be positive"),
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Tasks in dependency order, each with its original 1-based position.
    pub fn scheduled_tasks(&self) -> Vec<(usize, &TaskSpec)> {
        let mut ts: Vec<(usize, &TaskSpec)> = self.tasks.iter().enumerate().collect();
        ts.sort_by_key(|(i, t)| (t.rank(), *i));
        ts.into_iter().map(|(i, t)| (i + 1, t)).collect()
    }

    /// Output directory after the environment override is applied.
    pub fn output_dir(&self) -> PathBuf {
        match std::env::var_os("SSF_LAB_OUT") {
            Some(root) if self.output.dir.is_relative() => {
                PathBuf::from(root).join(&self.output.dir)
            }
            _ => self.output.dir.clone(),
        }
    }
}
