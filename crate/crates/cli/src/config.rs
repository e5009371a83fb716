//! Scenario configuration: JSON file, then command-line overrides.

use std::f64::consts::TAU;
use std::path::Path;

use abqt_core::protocol::{AliceInfo, BobInfo, ChannelSpec};
use abqt_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

/// A grid axis: explicit values, or `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Axis {
    pub fn full_turn(points: usize) -> Self {
        Axis::Range {
            start: 0.0,
            stop: TAU,
            points,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Values(ref v) => v.clone(),
            Axis::Range { start, stop, points } => match points {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|k| {
                        if k == n - 1 {
                            stop
                        } else {
                            start + (stop - start) * (k as f64 / (n - 1) as f64)
                        }
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Amplitudes of the fidelity surfaces.
    pub alphas: Vec<f64>,
    pub theta: Axis,
    pub phi: Axis,
    /// Amplitudes of the fidelity-versus-alpha curves.
    pub curve_alphas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 1.0, 5.0],
            theta: Axis::full_turn(61),
            phi: Axis::full_turn(61),
            curve_alphas: (1..=20).map(|k| 0.5 * k as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// `None` uses `8 ceil(alpha^2) + 16`.
    pub cutoff: Option<usize>,
    pub eps: f64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cutoff: None,
            eps: abqt_core::fock::DEFAULT_EPS,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub theta: f64,
    pub phi: f64,
    pub theta1: f64,
    /// Explicit real `A_0..A_3`; overrides `theta` and `phi`.
    pub alice: Option<[f64; 4]>,
    /// Explicit real `B_0, B_1`; overrides `theta1`.
    pub bob: Option<[f64; 2]>,
    pub sweep: SweepConfig,
    pub format: Option<OutputFormat>,
    pub oracle: OracleConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            theta: 0.3,
            phi: 0.9,
            theta1: 0.7,
            alice: None,
            bob: None,
            sweep: SweepConfig::default(),
            format: None,
            oracle: OracleConfig::default(),
        }
    }
}

fn finite(field: &str, v: f64) -> CliResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> CliResult<()> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be positive, got {v}")))
    }
}

fn axis_ok(field: &str, axis: &Axis) -> CliResult<()> {
    let v = axis.values();
    if v.is_empty() {
        return Err(CliError::config(field, "grid is empty"));
    }
    if let Axis::Range { start, stop, .. } = axis {
        finite(field, *start)?;
        finite(field, *stop)?;
    }
    v.iter().try_for_each(|&x| finite(field, x))
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("<file>", e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// Checks shared by every command.
    pub fn validate(&self) -> CliResult<()> {
        positive("alpha", self.alpha)?;
        finite("theta", self.theta)?;
        finite("phi", self.phi)?;
        finite("theta1", self.theta1)?;
        if let Some(a) = self.alice {
            a.iter().try_for_each(|&x| finite("alice", x))?;
            if a.iter().all(|&x| x == 0.0) {
                return Err(CliError::config("alice", "amplitudes are all zero"));
            }
        }
        if let Some(b) = self.bob {
            b.iter().try_for_each(|&x| finite("bob", x))?;
            if b.iter().all(|&x| x == 0.0) {
                return Err(CliError::config("bob", "amplitudes are both zero"));
            }
        }
        positive("oracle.eps", self.oracle.eps)?;
        positive("oracle.tolerance", self.oracle.tolerance)?;
        if self.oracle.cutoff == Some(0) {
            return Err(CliError::config("oracle.cutoff", "must be at least 1"));
        }
        Ok(())
    }

    pub fn validate_sweep(&self) -> CliResult<()> {
        self.validate()?;
        if self.sweep.alphas.is_empty() {
            return Err(CliError::config("sweep.alphas", "grid is empty"));
        }
        self.sweep
            .alphas
            .iter()
            .try_for_each(|&a| positive("sweep.alphas", a))?;
        if self.sweep.curve_alphas.is_empty() {
            return Err(CliError::config("sweep.curve_alphas", "grid is empty"));
        }
        self.sweep
            .curve_alphas
            .iter()
            .try_for_each(|&a| positive("sweep.curve_alphas", a))?;
        axis_ok("sweep.theta", &self.sweep.theta)?;
        axis_ok("sweep.phi", &self.sweep.phi)
    }

    pub fn alice_info(&self, theta: f64, phi: f64) -> CliResult<AliceInfo> {
        Ok(match self.alice {
            Some(a) => AliceInfo::new(a.map(|x| C64::new(x, 0.0)))?,
            None => AliceInfo::from_angles(theta, phi)?,
        })
    }

    pub fn bob_info(&self) -> CliResult<BobInfo> {
        Ok(match self.bob {
            Some(b) => BobInfo::new(b.map(|x| C64::new(x, 0.0)))?,
            None => BobInfo::from_angle(self.theta1)?,
        })
    }

    pub fn channel(&self, alpha: f64) -> CliResult<ChannelSpec> {
        Ok(ChannelSpec::new(alpha)?)
    }
}
