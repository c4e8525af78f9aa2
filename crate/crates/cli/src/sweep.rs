//! Generic parameter sweeps.
//!
//! A sweep evaluates one observable over a 1-3 axis grid of
//! `{phi, S, sigma, epsilon, tau}`, starting from the resolved base
//! configuration, with optional fixed overrides. Output is row-major in axis
//! declaration order; evaluation may fan out across worker threads but the
//! result ordering never depends on completion order.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use cascade_core::amplitudes::PathPair;
use cascade_core::correlations::conditional_density;
use cascade_core::entanglement::concurrence_of_delay;
use cascade_core::jitter::{average_concurrence, jittered_density};
use cascade_core::{build_couplings, JitterConfig64, PhysicalParams64};
use rayon::prelude::*;

use crate::config::{AxisBlock, ResolvedConfig, SweepBlock};
use crate::output::{format_g, Table};

/// Sweepable parameter names.
const SWEEPABLE: [&str; 5] = ["phi", "S", "sigma", "epsilon", "tau"];

/// Observable evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// The four conditional coincidence densities (needs `tau`).
    CoincidenceDensities,
    /// Jitter-free concurrence `C(τ)` (needs `tau`).
    Concurrence,
    /// Jitter-averaged concurrence (needs `tau`; uses `sigma`).
    JitteredConcurrence,
    /// Delay-averaged concurrence `C̄` (uses `sigma`; `tau` not allowed).
    AverageConcurrence,
    /// Measured-delay probability density (needs `tau`; uses `sigma`).
    DelayDensity,
}

impl Observable {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "P_nm" => Ok(Observable::CoincidenceDensities),
            "C" => Ok(Observable::Concurrence),
            "C_jittered" => Ok(Observable::JitteredConcurrence),
            "C_bar" => Ok(Observable::AverageConcurrence),
            "N_bar" => Ok(Observable::DelayDensity),
            other => bail!(
                "unknown observable '{other}' (expected one of P_nm, C, C_jittered, C_bar, N_bar)"
            ),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Observable::CoincidenceDensities => "P_nm",
            Observable::Concurrence => "C",
            Observable::JitteredConcurrence => "C_jittered",
            Observable::AverageConcurrence => "C_bar",
            Observable::DelayDensity => "N_bar",
        }
    }

    fn value_columns(&self) -> &'static [&'static str] {
        match self {
            Observable::CoincidenceDensities => &["P_AA", "P_AB", "P_BA", "P_BB"],
            Observable::Concurrence | Observable::JitteredConcurrence => &["concurrence"],
            Observable::AverageConcurrence => &["avg_concurrence"],
            Observable::DelayDensity => &["n_bar"],
        }
    }

    fn needs_tau(&self) -> bool {
        !matches!(self, Observable::AverageConcurrence)
    }
}

/// Validated sweep definition.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub observable: Observable,
    pub axes: Vec<AxisBlock>,
    pub fixed: BTreeMap<String, f64>,
}

impl SweepSpec {
    /// Builds and validates a sweep from config-file / CLI pieces.
    pub fn build(block: &SweepBlock) -> Result<Self> {
        let observable = Observable::parse(&block.observable)?;
        if block.axes.is_empty() || block.axes.len() > 3 {
            bail!("a sweep needs 1 to 3 axes, got {}", block.axes.len());
        }
        let mut seen = Vec::new();
        for axis in &block.axes {
            if !SWEEPABLE.contains(&axis.param.as_str()) {
                bail!(
                    "'{}' is not sweepable (expected one of {})",
                    axis.param,
                    SWEEPABLE.join(", ")
                );
            }
            if seen.contains(&axis.param) {
                bail!("duplicate sweep axis '{}'", axis.param);
            }
            seen.push(axis.param.clone());
            if axis.count < 2 {
                bail!("axis '{}' needs count >= 2, got {}", axis.param, axis.count);
            }
            // NaN bounds must also land here, hence the negated comparison.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(axis.min < axis.max) {
                bail!(
                    "axis '{}' needs min < max, got [{}, {}]",
                    axis.param,
                    axis.min,
                    axis.max
                );
            }
        }
        for name in block.fixed.keys() {
            if !SWEEPABLE.contains(&name.as_str()) {
                bail!(
                    "fixed override '{name}' is not a sweep parameter (expected one of {})",
                    SWEEPABLE.join(", ")
                );
            }
            if seen.contains(name) {
                bail!("'{name}' is both an axis and a fixed override");
            }
        }
        let has_tau = seen.iter().any(|p| p == "tau") || block.fixed.contains_key("tau");
        if observable.needs_tau() && !has_tau {
            bail!(
                "observable {} needs 'tau' as an axis or fixed override",
                observable.name()
            );
        }
        if !observable.needs_tau() && has_tau {
            bail!(
                "observable {} averages over delays; 'tau' cannot be set",
                observable.name()
            );
        }
        Ok(SweepSpec {
            observable,
            axes: block.axes.clone(),
            fixed: block.fixed.clone(),
        })
    }
}

/// One grid point, fully resolved.
#[derive(Debug, Clone, Copy)]
struct Point {
    epsilon: f64,
    fss: f64,
    phi: f64,
    phi_prime: Option<f64>,
    sigma: f64,
    tau: Option<f64>,
}

impl Point {
    fn apply(&mut self, name: &str, value: f64) {
        match name {
            "phi" => self.phi = value,
            "S" => self.fss = value,
            "sigma" => self.sigma = value,
            "epsilon" => self.epsilon = value,
            "tau" => self.tau = Some(value),
            _ => unreachable!("validated parameter name"),
        }
    }
}

/// Evaluates the sweep; rows come out row-major over the axes in declaration
/// order, axis columns first, observable columns last.
pub fn run_sweep(spec: &SweepSpec, base: &ResolvedConfig) -> Result<Table> {
    let axis_values: Vec<Vec<f64>> = spec
        .axes
        .iter()
        .map(|axis| {
            (0..axis.count)
                .map(|k| {
                    axis.min + (axis.max - axis.min) * k as f64 / (axis.count - 1) as f64
                })
                .collect()
        })
        .collect();

    let base_point = Point {
        epsilon: base.params.epsilon(),
        fss: base.params.fss(),
        phi: base.params.phi(),
        phi_prime: base
            .phi_prime_explicit
            .then(|| base.params.phi_prime()),
        sigma: base.jitter.sigma(),
        tau: None,
    };

    // Enumerate grid points row-major: the last axis varies fastest.
    let total: usize = axis_values.iter().map(|v| v.len()).product();
    let mut points = Vec::with_capacity(total);
    for flat in 0..total {
        let mut point = base_point;
        for (name, value) in &spec.fixed {
            point.apply(name, *value);
        }
        let mut coords = vec![0usize; spec.axes.len()];
        let mut rem = flat;
        for (slot, values) in axis_values.iter().enumerate().rev() {
            coords[slot] = rem % values.len();
            rem /= values.len();
        }
        for (axis, (values, &idx)) in spec.axes.iter().zip(axis_values.iter().zip(&coords)) {
            point.apply(&axis.param, values[idx]);
        }
        points.push((point, coords));
    }

    let observable = spec.observable;
    let quad_points = base.jitter.quad_points();
    let values: Vec<Vec<f64>> = points
        .par_iter()
        .map(|(point, _)| evaluate(observable, point, quad_points))
        .collect::<Result<_>>()?;

    let mut columns: Vec<&str> = spec.axes.iter().map(|a| a.param.as_str()).collect();
    columns.extend(observable.value_columns());
    let mut table = Table::new(&columns);
    for ((_, coords), value) in points.iter().zip(values) {
        let mut row: Vec<f64> = coords
            .iter()
            .enumerate()
            .map(|(slot, &idx)| axis_values[slot][idx])
            .collect();
        row.extend(value);
        table.push_row(row);
    }

    table
        .metadata
        .insert("observable".into(), observable.name().into());
    for (name, value) in &spec.fixed {
        table
            .metadata
            .insert(format!("fixed_{name}"), format_g(*value, 12));
    }
    for (key, value) in base.metadata() {
        table.metadata.entry(key).or_insert(value);
    }
    Ok(table)
}

fn evaluate(observable: Observable, point: &Point, quad_points: usize) -> Result<Vec<f64>> {
    let phi_prime = point.phi_prime.unwrap_or(point.phi);
    let params = PhysicalParams64::with_all(
        1.0,
        point.epsilon,
        point.fss,
        point.phi,
        phi_prime,
        0.0,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let couplings = build_couplings(&params).map_err(|e| anyhow::anyhow!("{e}"))?;
    let jitter = JitterConfig64::with_quad_points(point.sigma, quad_points)
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    match observable {
        Observable::CoincidenceDensities => {
            let rec = conditional_density(point.tau.expect("validated"), &params, &couplings);
            Ok(vec![
                rec.p(PathPair::AA),
                rec.p(PathPair::AB),
                rec.p(PathPair::BA),
                rec.p(PathPair::BB),
            ])
        }
        Observable::Concurrence => {
            let c = concurrence_of_delay(point.tau.expect("validated"), &params, &couplings)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(vec![c])
        }
        Observable::JitteredConcurrence => {
            let state = jittered_density(
                point.tau.expect("validated"),
                &jitter,
                &params,
                &couplings,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let c = cascade_core::entanglement::wootters_concurrence(&state.rho_bar)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .value;
            Ok(vec![c])
        }
        Observable::AverageConcurrence => {
            let c = average_concurrence(&jitter, &params, &couplings)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(vec![c])
        }
        Observable::DelayDensity => {
            let state = jittered_density(
                point.tau.expect("validated"),
                &jitter,
                &params,
                &couplings,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(vec![state.n_bar])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ParamOverrides, ResolvedConfig};
    use std::f64::consts::PI;

    fn base() -> ResolvedConfig {
        ResolvedConfig::resolve(None, &ParamOverrides::default()).unwrap()
    }

    fn block(observable: &str, axes: Vec<AxisBlock>, fixed: &[(&str, f64)]) -> SweepBlock {
        SweepBlock {
            observable: observable.into(),
            axes,
            fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn axis(param: &str, min: f64, max: f64, count: usize) -> AxisBlock {
        AxisBlock {
            param: param.into(),
            min,
            max,
            count,
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        // Zero-variance axis.
        assert!(SweepSpec::build(&block("C", vec![axis("phi", 1.0, 1.0, 2)], &[("tau", 0.5)])).is_err());
        // Count below 2.
        assert!(SweepSpec::build(&block("C", vec![axis("phi", 0.0, 1.0, 1)], &[("tau", 0.5)])).is_err());
        // Unknown parameter and unknown observable.
        assert!(SweepSpec::build(&block("C", vec![axis("gamma", 0.0, 1.0, 4)], &[("tau", 0.5)])).is_err());
        assert!(SweepSpec::build(&block("Q", vec![axis("phi", 0.0, 1.0, 4)], &[("tau", 0.5)])).is_err());
        // Missing tau.
        assert!(SweepSpec::build(&block("C", vec![axis("phi", 0.0, 1.0, 4)], &[])).is_err());
        // tau is not allowed for the delay average.
        assert!(SweepSpec::build(&block("C_bar", vec![axis("epsilon", -0.5, 0.5, 3)], &[("tau", 0.5)])).is_err());
        // Four axes.
        assert!(SweepSpec::build(&block(
            "C",
            vec![
                axis("phi", 0.0, 1.0, 2),
                axis("S", 0.0, 1.0, 2),
                axis("sigma", 0.0, 1.0, 2),
                axis("epsilon", -0.1, 0.1, 2),
            ],
            &[("tau", 0.5)],
        ))
        .is_err());
    }

    #[test]
    fn concurrence_constant_at_revival_delay() {
        // C over phi with tau fixed at pi/S is 1 for all phi away from 0, pi.
        let spec = SweepSpec::build(&block(
            "C",
            vec![axis("phi", PI / 16.0, 15.0 * PI / 16.0, 25)],
            &[("tau", PI / 4.0)],
        ))
        .unwrap();
        let table = run_sweep(&spec, &base()).unwrap();
        assert_eq!(table.columns, ["phi", "concurrence"]);
        assert_eq!(table.rows.len(), 25);
        for row in &table.rows {
            assert!((row[1] - 1.0).abs() < 1e-9, "phi={}, C={}", row[0], row[1]);
        }
    }

    #[test]
    fn row_major_ordering_two_axes() {
        let spec = SweepSpec::build(&block(
            "C",
            vec![axis("phi", 0.2, 0.4, 2), axis("tau", 0.0, 1.0, 3)],
            &[],
        ))
        .unwrap();
        let table = run_sweep(&spec, &base()).unwrap();
        assert_eq!(table.columns, ["phi", "tau", "concurrence"]);
        let phis: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
        let taus: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
        assert_eq!(phis, [0.2, 0.2, 0.2, 0.4, 0.4, 0.4]);
        assert_eq!(taus, [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn average_concurrence_symmetric_in_epsilon() {
        let spec = SweepSpec::build(&block(
            "C_bar",
            vec![axis("epsilon", -0.6, 0.6, 5)],
            &[("sigma", 3.0)],
        ))
        .unwrap();
        let table = run_sweep(&spec, &base()).unwrap();
        let values: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
        assert_eq!(table.rows.len(), 5);
        for k in 0..5 {
            let mirrored = values[4 - k];
            assert!(
                (values[k] - mirrored).abs() < 1e-6,
                "C_bar asymmetry at eps={}: {} vs {}",
                table.rows[k][0],
                values[k],
                mirrored
            );
        }
    }

    #[test]
    fn coincidence_observable_emits_four_columns() {
        let spec = SweepSpec::build(&block(
            "P_nm",
            vec![axis("tau", 0.0, 2.0, 5)],
            &[("phi", PI / 3.0)],
        ))
        .unwrap();
        let table = run_sweep(&spec, &base()).unwrap();
        assert_eq!(table.columns, ["tau", "P_AA", "P_AB", "P_BA", "P_BB"]);
        // At eps = 0 the cross densities match.
        for row in &table.rows {
            assert!((row[2] - row[3]).abs() < 1e-15);
        }
    }
}
