//! Flat JSON run configuration. Frequencies are ordinary GHz in the file and
//! become rad/ns in [`Run`], the only place the 2π enters.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tcdyn_core::hilbert::MAX_QUBITS;
use tcdyn_core::{CouplingSchedule, SystemParams};

use crate::error::{CliError, Result};

pub const MAX_ORDER: usize = 4;

/// The document as written, every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_eff_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub switch_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub switch_freq_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_dt_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            if field.is_empty() || field == "." {
                CliError::ConfigSyntax(inner.to_string())
            } else {
                CliError::config(&field, inner.to_string())
            }
        })
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub switch_ratio: Option<f64>,
    pub order: Option<usize>,
    pub t_final_ns: Option<f64>,
    pub n_max: Option<usize>,
    pub points: Option<usize>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, raw: &mut RawConfig) {
        if let Some(r) = self.switch_ratio {
            raw.switch_ratio = Some(r);
            raw.switch_freq_ghz = None;
        }
        raw.order = self.order.or(raw.order);
        raw.t_final_ns = self.t_final_ns.or(raw.t_final_ns);
        raw.n_max = self.n_max.or(raw.n_max);
        raw.points = self.points.or(raw.points);
        raw.ratio_min = self.ratio_min.or(raw.ratio_min);
        raw.ratio_max = self.ratio_max.or(raw.ratio_max);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Switch {
    /// ϖ_s/ω₀.
    Ratio(f64),
    /// ϖ_s/2π in GHz.
    FreqGhz(f64),
}

/// A validated configuration, still in the file's units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub omega0_ghz: f64,
    pub omega_c_ghz: f64,
    pub g_eff_ghz: f64,
    pub switch: Switch,
    pub n_qubits: usize,
    pub n_max: usize,
    pub order: usize,
    pub t_final_ns: f64,
    pub sample_dt_ns: f64,
    pub qubit_index: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_raw(&RawConfig::default()).expect("defaults are valid")
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {v}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text, overrides)
    }

    pub fn from_json(text: &str, overrides: &Overrides) -> Result<Self> {
        let mut raw = RawConfig::from_json(text)?;
        overrides.apply(&mut raw);
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let omega0_ghz = positive("omega0_ghz", raw.omega0_ghz.unwrap_or(5.439))?;
        let omega_c_ghz = positive("omega_c_ghz", raw.omega_c_ghz.unwrap_or(4.343))?;
        let g_eff_ghz = raw.g_eff_ghz.unwrap_or(0.050);
        if !(g_eff_ghz.is_finite() && g_eff_ghz >= 0.0) {
            return Err(CliError::config("g_eff_ghz", format!("must be finite and >= 0, got {g_eff_ghz}")));
        }
        if g_eff_ghz >= omega0_ghz.min(omega_c_ghz) {
            return Err(CliError::config("g_eff_ghz", "must be smaller than omega0_ghz and omega_c_ghz"));
        }
        let switch = match (raw.switch_ratio, raw.switch_freq_ghz) {
            (Some(_), Some(_)) => {
                return Err(CliError::config("switch_ratio", "switch_ratio and switch_freq_ghz are mutually exclusive"))
            }
            (Some(r), None) => Switch::Ratio(positive("switch_ratio", r)?),
            (None, Some(f)) => Switch::FreqGhz(positive("switch_freq_ghz", f)?),
            (None, None) => Switch::Ratio(20.0),
        };
        let n_qubits = raw.n_qubits.unwrap_or(2);
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(CliError::config("n_qubits", format!("must be in 1..={MAX_QUBITS}, got {n_qubits}")));
        }
        let n_max = raw.n_max.unwrap_or(2);
        let order = raw.order.unwrap_or(2);
        if order > MAX_ORDER {
            return Err(CliError::config("order", format!("must be <= {MAX_ORDER}, got {order}")));
        }
        let t_final_ns = positive("t_final_ns", raw.t_final_ns.unwrap_or(10.0))?;
        let sample_dt_ns = positive("sample_dt_ns", raw.sample_dt_ns.unwrap_or(0.01))?;
        if sample_dt_ns > t_final_ns {
            return Err(CliError::config("sample_dt_ns", "must not exceed t_final_ns"));
        }
        let qubit_index = raw.qubit_index.unwrap_or(0);
        if qubit_index >= n_qubits {
            return Err(CliError::config("qubit_index", format!("must be < n_qubits = {n_qubits}, got {qubit_index}")));
        }
        let ratio_min = positive("ratio_min", raw.ratio_min.unwrap_or(4.0))?;
        let ratio_max = positive("ratio_max", raw.ratio_max.unwrap_or(24.0))?;
        if ratio_max <= ratio_min {
            return Err(CliError::config("ratio_max", "must be greater than ratio_min"));
        }
        let points = raw.points.unwrap_or(21);
        if points < 2 {
            return Err(CliError::config("points", format!("must be >= 2, got {points}")));
        }
        Ok(RunConfig {
            omega0_ghz,
            omega_c_ghz,
            g_eff_ghz,
            switch,
            n_qubits,
            n_max,
            order,
            t_final_ns,
            sample_dt_ns,
            qubit_index,
            ratio_min,
            ratio_max,
            points,
        })
    }

    pub fn with_switch_ratio(&self, ratio: f64) -> Self {
        RunConfig { switch: Switch::Ratio(ratio), ..*self }
    }

    /// Switching ratios of a sweep, evenly spaced and including both ends.
    pub fn sweep_ratios(&self) -> Vec<f64> {
        let step = (self.ratio_max - self.ratio_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.ratio_max } else { self.ratio_min + k as f64 * step })
            .collect()
    }

    pub fn run(&self) -> Result<Run> {
        Run::new(self)
    }
}

/// Physical setup in rad/ns and ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Run {
    pub params: SystemParams,
    pub schedule: CouplingSchedule,
    pub order: usize,
    pub t_final: f64,
    pub sample_dt: f64,
    pub qubit: usize,
}

impl Run {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let params = SystemParams::from_ghz(cfg.omega0_ghz, cfg.omega_c_ghz, cfg.g_eff_ghz, cfg.n_qubits, cfg.n_max)?;
        let switch_freq = match cfg.switch {
            Switch::Ratio(r) => r * params.omega0(),
            Switch::FreqGhz(f) => 2.0 * PI * f,
        };
        let schedule = CouplingSchedule::from_switch_freq(params.g_eff(), switch_freq)?;
        Ok(Run {
            params,
            schedule,
            order: cfg.order,
            t_final: cfg.t_final_ns,
            sample_dt: cfg.sample_dt_ns,
            qubit: cfg.qubit_index,
        })
    }

    pub fn switch_ratio(&self) -> f64 {
        self.schedule.switch_freq() / self.params.omega0()
    }
}
