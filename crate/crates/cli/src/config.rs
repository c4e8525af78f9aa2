//! Config file loading and flag resolution.
//!
//! Precedence: CLI flags > config file > defaults (`γ_X = 1`, `ε = 0`,
//! `S = 4`, `Φ = Φ' = π/2`, `σ = 0`, `Γ = 0`). Files are TOML or JSON,
//! selected by extension (with a content sniff as fallback).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cascade_core::{JitterConfig64, ParamsConfig, PhysicalParams64};
use serde::Deserialize;

/// On-disk configuration: a `[params]` block (keys `gamma_x_exciton`,
/// `epsilon`, `fss`, `phi`, `phi_prime`, `cross_gamma`), an optional
/// `[jitter]` block, and an optional `[sweep]` block.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub jitter: JitterBlock,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JitterBlock {
    /// RMS detection jitter `σ`.
    pub sigma: Option<f64>,
    /// Minimum total quadrature nodes (>= 64).
    pub quad_points: Option<usize>,
}

/// Sweep definition as stored in a config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub observable: String,
    pub axes: Vec<AxisBlock>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisBlock {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let by_ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        match by_ext.as_deref() {
            Some("toml") => toml::from_str(&text).context("parsing TOML config"),
            Some("json") => serde_json::from_str(&text).context("parsing JSON config"),
            _ => {
                // Sniff: JSON configs start with '{'.
                if text.trim_start().starts_with('{') {
                    serde_json::from_str(&text).context("parsing JSON config")
                } else {
                    toml::from_str(&text).context("parsing TOML config")
                }
            }
        }
    }
}

/// Parameter overrides collected from CLI flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParamOverrides {
    pub gamma_x: Option<f64>,
    pub epsilon: Option<f64>,
    pub fss: Option<f64>,
    pub phi: Option<f64>,
    pub phi_prime: Option<f64>,
    pub cross_gamma: Option<f64>,
    pub sigma: Option<f64>,
    pub quad_points: Option<usize>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub params: PhysicalParams64,
    pub jitter: JitterConfig64,
    /// Whether `phi_prime` was given explicitly (file or flag); if not, a
    /// sweep over `phi` moves `Φ'` together with `Φ`.
    pub phi_prime_explicit: bool,
    pub sweep: Option<SweepBlock>,
}

impl ResolvedConfig {
    pub fn resolve(file: Option<FileConfig>, flags: &ParamOverrides) -> Result<Self> {
        let file = file.unwrap_or_default();
        let mut cfg = file.params;
        if let Some(v) = flags.gamma_x {
            cfg.gamma_x_exciton = Some(v);
        }
        if let Some(v) = flags.epsilon {
            cfg.epsilon = Some(v);
        }
        if let Some(v) = flags.fss {
            cfg.fss = Some(v);
        }
        if let Some(v) = flags.phi {
            cfg.phi = Some(v);
        }
        if let Some(v) = flags.phi_prime {
            cfg.phi_prime = Some(v);
        }
        if let Some(v) = flags.cross_gamma {
            cfg.cross_gamma = Some(v);
        }
        let phi_prime_explicit = cfg.phi_prime.is_some();
        let params = PhysicalParams64::from_config(&cfg)
            .map_err(|e| anyhow::anyhow!("invalid parameters: {e}"))?;

        let sigma = flags.sigma.or(file.jitter.sigma).unwrap_or(0.0);
        let quad_points = flags.quad_points.or(file.jitter.quad_points).unwrap_or(64);
        let jitter = JitterConfig64::with_quad_points(sigma, quad_points)
            .map_err(|e| anyhow::anyhow!("invalid jitter config: {e}"))?;

        Ok(ResolvedConfig {
            params,
            jitter,
            phi_prime_explicit,
            sweep: file.sweep,
        })
    }

    /// Resolved parameters as metadata entries (float values `%.12g`).
    pub fn metadata(&self) -> BTreeMap<String, String> {
        use crate::output::format_g;
        let p = &self.params;
        let mut m = BTreeMap::new();
        m.insert("gamma_x_exciton".into(), format_g(p.gamma_x(), 12));
        m.insert("epsilon".into(), format_g(p.epsilon(), 12));
        m.insert("fss".into(), format_g(p.fss(), 12));
        m.insert("phi".into(), format_g(p.phi(), 12));
        m.insert("phi_prime".into(), format_g(p.phi_prime(), 12));
        m.insert("cross_gamma".into(), format_g(p.cross_gamma(), 12));
        m.insert("sigma".into(), format_g(self.jitter.sigma(), 12));
        m
    }
}

/// Parses `name=value` CLI pairs (used by `--set`).
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let Some((name, value)) = s.split_once('=') else {
        bail!("expected name=value, got '{s}'");
    };
    let value: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("parsing value in '{s}'"))?;
    Ok((name.trim().to_string(), value))
}

/// Parses `param=min:max:count` axis descriptions (used by `--axis`).
pub fn parse_axis(s: &str) -> Result<AxisBlock> {
    let Some((param, rest)) = s.split_once('=') else {
        bail!("expected param=min:max:count, got '{s}'");
    };
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        bail!("expected param=min:max:count, got '{s}'");
    }
    Ok(AxisBlock {
        param: param.trim().to_string(),
        min: parts[0].trim().parse().context("axis min")?,
        max: parts[1].trim().parse().context("axis max")?,
        count: parts[2].trim().parse().context("axis count")?,
    })
}
