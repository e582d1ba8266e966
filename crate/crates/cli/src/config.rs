//! Run configuration: one JSON document, with command-line flags overriding fields.

use std::path::{Path, PathBuf};

use clap::Args;
use hs2_core::{EquationKind, MetricConvention, PeriodicField, TangentPair};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::expr;

/// A direction `(first, second)` given as two expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Direction {
    pub first: String,
    pub second: String,
}

impl Direction {
    fn new(first: &str, second: &str) -> Self {
        Self { first: first.into(), second: second.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub equation: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub h1_scale: f64,
    pub initial_u: String,
    pub initial_rho: String,
    pub seed: u64,
    /// Stem of the emitted files: `<output_path>.csv` and `<output_path>.json`.
    pub output_path: String,
    /// Use 3/2-rule products in the Eulerian companion solver.
    pub dealias: bool,
    /// Number of random pairs in a curvature scan.
    pub pairs: usize,
    /// Curvature pair directions; `direction_u` is also the initial
    /// covariant derivative of the Jacobi field.
    pub direction_u: Direction,
    pub direction_v: Direction,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            equation: "2HS".into(),
            n: 256,
            dt: 1e-3,
            t_end: 1.0,
            h1_scale: 1.0,
            initial_u: "0".into(),
            initial_rho: "0".into(),
            seed: 20_240_611,
            output_path: "hs2-output".into(),
            dealias: false,
            pairs: 50,
            direction_u: Direction::new("sin(1)", "0"),
            direction_v: Direction::new("0", "cos(1)"),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run configuration, or a summary previously written by this tool.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// HS, muHS, 2HS or 2muHS.
    #[arg(long)]
    pub equation: Option<String>,
    /// Grid size (power of two, at least 16).
    #[arg(short = 'n', long = "grid")]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub h1_scale: Option<f64>,
    /// First velocity component, e.g. "sqrt(2)/pi*sin(1)"; `sin(k)` means sin(2 pi k x).
    #[arg(long, allow_hyphen_values = true)]
    pub initial_u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub initial_rho: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output stem; `.csv` and `.json` are appended.
    #[arg(short = 'o', long = "output")]
    pub output_path: Option<String>,
    #[arg(long)]
    pub dealias: Option<bool>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub u1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v2: Option<String>,
}

/// Reads a config document. A summary written by a previous run is accepted
/// too: its recorded `config` object is used.
pub fn read_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let value = match value {
        serde_json::Value::Object(mut map) if map.get("config").is_some_and(|c| c.is_object()) => {
            map.remove("config").unwrap_or_default()
        }
        other => other,
    };
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => read_config(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone();
                }
            )*};
        }
        set!(equation, n, dt, t_end, h1_scale, initial_u, initial_rho, seed, output_path, dealias, pairs);
        let dirs = [
            (&self.u1, &mut c.direction_u.first),
            (&self.u2, &mut c.direction_u.second),
            (&self.v1, &mut c.direction_v.first),
            (&self.v2, &mut c.direction_v.second),
        ];
        for (flag, slot) in dirs {
            if let Some(v) = flag {
                *slot = v.clone();
            }
        }
        c.validate()?;
        Ok(c)
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Checks every field and rewrites `equation` to its canonical name.
    pub fn validate(&mut self) -> Result<(), CliError> {
        let kind: EquationKind = self.equation.parse().map_err(|e: hs2_core::Error| config_err(e.to_string()))?;
        self.equation = kind.name().into();
        if self.n < 16 || !self.n.is_power_of_two() {
            return Err(config_err(format!("N = {} must be a power of two of at least 16", self.n)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(config_err(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(config_err(format!("t_end = {} must be non-negative", self.t_end)));
        }
        MetricConvention::new(self.h1_scale).map_err(|e| config_err(e.to_string()))?;
        if self.pairs == 0 {
            return Err(config_err("pairs must be at least 1"));
        }
        if self.output_path.is_empty() {
            return Err(config_err("output_path must not be empty"));
        }
        for src in [
            &self.initial_u,
            &self.initial_rho,
            &self.direction_u.first,
            &self.direction_u.second,
            &self.direction_v.first,
            &self.direction_v.second,
        ] {
            expr::field(src, self.n).map_err(config_err)?;
        }
        Ok(())
    }

    pub fn kind(&self) -> EquationKind {
        self.equation.parse().expect("validated equation name")
    }

    pub fn convention(&self) -> MetricConvention {
        MetricConvention::new(self.h1_scale).expect("validated h1_scale")
    }

    fn field(&self, src: &str) -> Result<PeriodicField, CliError> {
        expr::field(src, self.n).map_err(config_err)
    }

    /// `(first, second)` as a tangent vector of the configured equation; the
    /// second component is dropped for one-component equations.
    pub fn tangent(&self, first: &str, second: &str) -> Result<TangentPair, CliError> {
        let kind = self.kind();
        let first = self.field(first)?;
        let t = if kind.is_two_component() {
            TangentPair::new(first, self.field(second)?).map_err(|e| config_err(e.to_string()))?
        } else {
            TangentPair::first_only(first)
        };
        hs2_core::christoffel::check_chart(kind, &t)
            .map_err(|e| config_err(format!("{e}; {} directions must vanish at x = 0", kind)))?;
        Ok(t)
    }

    pub fn initial_velocity(&self) -> Result<TangentPair, CliError> {
        self.tangent(&self.initial_u, &self.initial_rho)
    }

    pub fn csv_path(&self) -> PathBuf {
        PathBuf::from(format!("{}.csv", self.output_path))
    }

    pub fn json_path(&self) -> PathBuf {
        PathBuf::from(format!("{}.json", self.output_path))
    }
}
