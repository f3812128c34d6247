//! Scenario files: JSON documents describing one manifold, one `kappa` and
//! the checks to run against them.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::gallery::Builtin;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Hypothesis,
    Laplacian,
    Riccati,
    Blowup,
    Myers,
    Kappa0,
    VolumeElement,
    BgS,
    BgR,
    BallGrowth,
    VmCompleteness,
    Ambrose,
    EqualityCase,
    PoleSmoothness,
}

impl Check {
    pub const ALL: [Check; 14] = [
        Check::Hypothesis,
        Check::Laplacian,
        Check::Riccati,
        Check::Blowup,
        Check::Myers,
        Check::Kappa0,
        Check::VolumeElement,
        Check::BgS,
        Check::BgR,
        Check::BallGrowth,
        Check::VmCompleteness,
        Check::Ambrose,
        Check::EqualityCase,
        Check::PoleSmoothness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Hypothesis => "hypothesis",
            Check::Laplacian => "laplacian",
            Check::Riccati => "riccati",
            Check::Blowup => "blowup",
            Check::Myers => "myers",
            Check::Kappa0 => "kappa0",
            Check::VolumeElement => "volume_element",
            Check::BgS => "bg_s",
            Check::BgR => "bg_r",
            Check::BallGrowth => "ball_growth",
            Check::VmCompleteness => "vm_completeness",
            Check::Ambrose => "ambrose",
            Check::EqualityCase => "equality_case",
            Check::PoleSmoothness => "pole_smoothness",
        }
    }

    /// Informational checks record a classification and never fail a run.
    pub fn informational(self) -> bool {
        matches!(self, Check::VmCompleteness | Check::Ambrose)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KappaSpec {
    Constant {
        value: f64,
    },
    /// The largest constant the hypothesis allows on `(0, radius]`.
    BestConstant,
    Piecewise {
        breakpoints: Vec<f64>,
        coefficients: Vec<Vec<f64>>,
        #[serde(default)]
        horizon: Option<f64>,
    },
    Sampled {
        s: Vec<f64>,
        kappa: Vec<f64>,
    },
    /// Two-column CSV `s,kappa`, relative to the scenario file.
    SampledCsv {
        path: PathBuf,
    },
    /// `1 + c s (delta - s)` with self-consistent `delta`.
    Bump {
        c: f64,
    },
}

/// A profile from sampled data. Paths are two-column CSV files (`r,value`)
/// relative to the scenario file; `potential` and `v` are exclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProfile {
    pub f: PathBuf,
    #[serde(default)]
    pub v: Option<PathBuf>,
    #[serde(default)]
    pub potential: Option<PathBuf>,
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default)]
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldSpec {
    Builtin(Builtin),
    Custom(CustomProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub manifold: ManifoldSpec,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Outer radius of the grid checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_pairs: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_inconclusive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError { message: message.into() }
    }
}

impl Scenario {
    pub fn from_json(text: &str, origin: &str) -> Result<Scenario, ConfigError> {
        let scenario: Scenario = serde_json::from_str(text)
            .map_err(|e| ConfigError::new(format!("{origin}: line {}, column {}: {e}", e.line(), e.column())))?;
        scenario.validate().map_err(|e| ConfigError::new(format!("{origin}: {}", e.message)))?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
        let mut scenario = Scenario::from_json(&text, &path.display().to_string())?;
        let base = path.parent().unwrap_or(Path::new(""));
        scenario.resolve_paths(base);
        Ok(scenario)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let ManifoldSpec::Custom(c) = &mut self.manifold {
            fix(&mut c.f);
            c.v.as_mut().map(fix);
            c.potential.as_mut().map(fix);
        }
        if let Some(KappaSpec::SampledCsv { path }) = &mut self.kappa {
            fix(path);
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => {
                Err(ConfigError::new(format!("field `{field}` must be positive and finite, got {x}")))
            }
            _ => Ok(()),
        };
        positive("tol", self.tol)?;
        positive("radius", self.radius)?;
        positive("c_p", self.c_p)?;
        if self.grid == Some(0) {
            return Err(ConfigError::new("field `grid` must be at least 1"));
        }
        if let Some(checks) = &self.checks {
            if checks.is_empty() {
                return Err(ConfigError::new("field `checks` must not be empty"));
            }
        }
        if let Some(h) = &self.horizons {
            if h.is_empty() || h.iter().any(|x| !(*x > 0.0)) || h.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(ConfigError::new("field `horizons` must be positive and increasing"));
            }
        }
        if let ManifoldSpec::Custom(c) = &self.manifold {
            if c.v.is_some() && c.potential.is_some() {
                return Err(ConfigError::new("custom profile: give at most one of `v` and `potential`"));
            }
        }
        if let ManifoldSpec::Builtin(Builtin::ChengModel { .. }) = &self.manifold {
            if self.m.is_some_and(|m| m != 1.0) {
                return Err(ConfigError::new("cheng-model requires m = 1"));
            }
        }
        Ok(())
    }
}
