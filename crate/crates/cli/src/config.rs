//! Run configuration: one JSON document, command-line flags layered on top.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use decay_core::{Complex, CssParams, GssParams, ReservoirParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Css,
    Gss,
    Fidelity,
    OracleCompare,
}

/// Uniform grid on `[t_start, t_end]` in raw time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.t_start, self.t_end, self.n_points)
    }
}

/// Rectangular grid over the quadratures `x` and `p`, used for the Wigner minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub points_per_axis: usize,
}

impl PhaseGrid {
    /// Phase-space amplitudes, `x` outer and `p` inner.
    pub fn amplitudes(&self, omega: f64) -> Vec<Complex> {
        let xs = linspace(self.x_min, self.x_max, self.points_per_axis);
        let ps = linspace(self.p_min, self.p_max, self.points_per_axis);
        xs.iter()
            .flat_map(|&x| {
                ps.iter()
                    .map(move |&p| decay_core::phase_point(omega, x, p))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub family: Family,
    pub css: CssParams,
    pub gss: GssParams,
    pub reservoir: ReservoirParams,
    pub time: TimeGrid,
    pub phase_grid: PhaseGrid,
    /// Number of leading `P_n` columns in the witness table.
    pub pn_head: usize,
    pub output: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: Family::Css,
            css: CssParams::even(0.8).expect("valid"),
            gss: GssParams::squeezed_thermal(1.0, 0.0).expect("valid"),
            reservoir: ReservoirParams::zero_temperature(1.0, 0.1).expect("valid"),
            time: TimeGrid {
                t_start: 0.0,
                t_end: 50.0,
                n_points: 501,
            },
            phase_grid: PhaseGrid {
                x_min: -4.0,
                x_max: 4.0,
                p_min: -4.0,
                p_max: 4.0,
                points_per_axis: 41,
            },
            pn_head: 8,
            output: PathBuf::from("decay-out"),
            seed: 0,
        }
    }
}

fn field(name: &str, reason: impl std::fmt::Display) -> anyhow::Error {
    anyhow::anyhow!("invalid config field `{name}`: {reason}")
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).context("config is not a valid run configuration")?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.reservoir
            .validate()
            .map_err(|e| field("reservoir", e))?;
        self.css.validate().map_err(|e| field("css", e))?;
        self.gss.validate().map_err(|e| field("gss", e))?;
        let t = &self.time;
        if !(t.t_start >= 0.0 && t.t_start.is_finite()) {
            return Err(field(
                "time.t_start",
                format!("must be finite and >= 0, got {}", t.t_start),
            ));
        }
        if !(t.t_end > t.t_start && t.t_end.is_finite()) {
            return Err(field(
                "time.t_end",
                format!("must be finite and > t_start, got {}", t.t_end),
            ));
        }
        if t.n_points < 2 {
            return Err(field(
                "time.n_points",
                format!("must be >= 2, got {}", t.n_points),
            ));
        }
        let g = &self.phase_grid;
        if !(g.x_max > g.x_min) {
            return Err(field("phase_grid.x_max", "must exceed x_min"));
        }
        if !(g.p_max > g.p_min) {
            return Err(field("phase_grid.p_max", "must exceed p_min"));
        }
        if g.points_per_axis < 2 {
            return Err(field("phase_grid.points_per_axis", "must be >= 2"));
        }
        if self.pn_head == 0 || self.pn_head > 512 {
            bail!(field(
                "pn_head",
                format!("must be in 1..=512, got {}", self.pn_head)
            ));
        }
        Ok(())
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}
