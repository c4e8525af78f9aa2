//! Named figure-reproduction runs.
//!
//! Each subcommand regenerates one of the standard figure datasets at desk
//! scale, with the parameter set pinned:
//!
//! | name  | content                                        | fixed parameters              |
//! |-------|------------------------------------------------|-------------------------------|
//! | fig2  | P_nm(τ), perfect chirality                     | Φ = π/2, S ∈ {0, 4}           |
//! | fig3a | P_nm(τ), partial chirality                     | Φ = π/3, S = 4                |
//! | fig3b | C(Φ, τ) map                                    | S = 4                         |
//! | fig4a | C vs σ at marked (Φ, τ) points                 | S = 4                         |
//! | fig4b | C(τ) under jitter                              | σ = 0.3, Φ ∈ {π/8, π/4, π/2}  |
//! | fig4c | measured-delay density                         | σ = 0.3 (same grid as fig4b)  |
//! | fig5a | C(τ) with asymmetric decay                     | ε = -0.4                      |
//! | fig5b | C(Φ, τ) map with asymmetric decay              | ε = -0.4                      |
//! | fig5c | delay-averaged C̄(Φ, ε) map                     | σ = 3, S = 4                  |
//!
//! All grids are deterministic; output ordering is row-major in the listed
//! column order. Coincidence densities are conditioned on the first photon
//! (they integrate to ~1); `--unconditioned` multiplies by the first-photon
//! density at a chosen biexciton detection time.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cascade_core::amplitudes::PathPair;
use cascade_core::correlations::{coincidence_symmetric, first_photon_density};
use cascade_core::entanglement::{concurrence_of_delay, wootters_concurrence};
use cascade_core::jitter::{average_concurrence_with, jittered_density, CbarWeighting};
use cascade_core::{build_couplings, CouplingTable64, JitterConfig64, PhysicalParams64};
use rayon::prelude::*;

use crate::output::{format_g, OutputFormat, Table};

/// The named figure set accepted by `run_figure`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig5a,
    Fig5b,
    Fig5c,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig4c,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig5c,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig4c => "fig4c",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig5c => "fig5c",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .with_context(|| format!("unknown figure '{s}'"))
    }
}

/// Output options shared by all figure runs.
#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// Include a creation timestamp in the metadata block.
    pub timestamp: bool,
    /// Multiply coincidence densities by the first-photon density at `t_xx`.
    pub unconditioned: bool,
    pub t_xx: f64,
    /// Average the jitter-free concurrence in fig5c instead of the jittered
    /// one (both weighted by the jittered delay density).
    pub cbar_pure: bool,
}

impl FigureOptions {
    pub fn new(out_dir: &Path) -> Self {
        FigureOptions {
            out_dir: out_dir.to_path_buf(),
            format: OutputFormat::Csv,
            timestamp: true,
            unconditioned: false,
            t_xx: 0.0,
            cbar_pure: false,
        }
    }
}

const FSS: f64 = 4.0;
const TAU_POINTS: usize = 1200;
const TAU_MAX: f64 = 6.0;

fn system(eps: f64, fss: f64, phi: f64) -> Result<(PhysicalParams64, CouplingTable64)> {
    let params = PhysicalParams64::new(1.0, eps, fss, phi)
        .map_err(|e| anyhow::anyhow!("figure parameters: {e}"))?;
    let couplings = build_couplings(&params).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok((params, couplings))
}

fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// τ grid in exact multiples of π/(16 S): FSS oscillations are resolved and
/// the revival delays S τ = π, 3π, ... land exactly on grid rows.
fn fss_aligned_tau_grid(fss: f64, tau_max: f64) -> Vec<f64> {
    let step = PI / (16.0 * fss);
    let count = (tau_max / step).floor() as usize + 1;
    (0..count).map(|k| k as f64 * step).collect()
}

fn stamp(table: &mut Table, figure: FigureId, opts: &FigureOptions) {
    table
        .metadata
        .insert("figure".into(), figure.name().into());
    table
        .metadata
        .insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    if opts.timestamp {
        table.metadata.insert(
            "created".into(),
            chrono::Utc::now()
                .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        );
    }
}

/// Emits the data files for one named figure; returns the written paths.
pub fn run_figure(figure: FigureId, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    match figure {
        FigureId::Fig2 => fig2(opts),
        FigureId::Fig3a => fig3a(opts),
        FigureId::Fig3b => fig_concurrence_map(FigureId::Fig3b, 0.0, opts),
        FigureId::Fig4a => fig4a(opts),
        FigureId::Fig4b => fig4bc(FigureId::Fig4b, opts),
        FigureId::Fig4c => fig4bc(FigureId::Fig4c, opts),
        FigureId::Fig5a => fig5a(opts),
        FigureId::Fig5b => fig_concurrence_map(FigureId::Fig5b, -0.4, opts),
        FigureId::Fig5c => fig5c(opts),
    }
}

/// Coincidence-density table over the standard τ grid for one symmetric
/// parameter set.
fn coincidence_table(
    fss: f64,
    phi: f64,
    opts: &FigureOptions,
) -> Result<Table> {
    let (params, _) = system(0.0, fss, phi)?;
    let scale = if opts.unconditioned {
        first_photon_density(opts.t_xx, &params)
    } else {
        1.0
    };
    let mut table = Table::new(&["tau", "P_AA", "P_AB", "P_BA", "P_BB"]);
    for tau in uniform_grid(0.0, TAU_MAX, TAU_POINTS) {
        let rec = coincidence_symmetric(tau, 1.0, fss, phi).scaled(scale);
        table.push_row(vec![
            tau,
            rec.p(PathPair::AA),
            rec.p(PathPair::AB),
            rec.p(PathPair::BA),
            rec.p(PathPair::BB),
        ]);
    }
    table.metadata.insert("fss".into(), format_g(fss, 12));
    table.metadata.insert("phi".into(), format_g(phi, 12));
    table.metadata.insert("epsilon".into(), "0".into());
    table.metadata.insert(
        "normalization".into(),
        if opts.unconditioned {
            format!("joint density at t_xx = {}", format_g(opts.t_xx, 12))
        } else {
            "conditioned on first photon".into()
        },
    );
    Ok(table)
}

fn fig2(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (stem, fss) in [("fig2_s0", 0.0), ("fig2_s4", FSS)] {
        let mut table = coincidence_table(fss, FRAC_PI_2, opts)?;
        stamp(&mut table, FigureId::Fig2, opts);
        paths.push(table.write_file(&opts.out_dir, stem, opts.format)?);
    }
    Ok(paths)
}

fn fig3a(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let mut table = coincidence_table(FSS, FRAC_PI_3, opts)?;
    stamp(&mut table, FigureId::Fig3a, opts);
    Ok(vec![table.write_file(&opts.out_dir, "fig3a", opts.format)?])
}

/// C(Φ, τ) colour-map data (fig3b at ε = 0, fig5b at ε = -0.4).
fn fig_concurrence_map(figure: FigureId, eps: f64, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let phis = uniform_grid(0.0, PI, 101);
    let taus = fss_aligned_tau_grid(FSS, TAU_MAX);
    let mut table = Table::new(&["phi", "tau", "concurrence"]);
    for &phi in &phis {
        let (params, couplings) = system(eps, FSS, phi)?;
        for &tau in &taus {
            let c = concurrence_of_delay(tau, &params, &couplings)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            table.push_row(vec![phi, tau, c]);
        }
    }
    table.metadata.insert("fss".into(), format_g(FSS, 12));
    table.metadata.insert("epsilon".into(), format_g(eps, 12));
    stamp(&mut table, figure, opts);
    Ok(vec![table.write_file(&opts.out_dir, figure.name(), opts.format)?])
}

fn fig4a(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    // (Phi, tau) probe points within the fig3b map; sigma sweep per point.
    let pairs: Vec<(f64, f64)> = [FRAC_PI_2, FRAC_PI_4, PI / 8.0]
        .iter()
        .flat_map(|&phi| {
            [PI / (2.0 * FSS), PI / FSS]
                .iter()
                .map(move |&tau| (phi, tau))
                .collect::<Vec<_>>()
        })
        .collect();
    let sigmas = uniform_grid(0.0, 3.0, 121);

    let mut jobs = Vec::new();
    for &sigma in &sigmas {
        for &(phi, tau) in &pairs {
            jobs.push((sigma, phi, tau));
        }
    }
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(sigma, phi, tau)| -> Result<f64> {
            let (params, couplings) = system(0.0, FSS, phi)?;
            let cfg = JitterConfig64::new(sigma).map_err(|e| anyhow::anyhow!("{e}"))?;
            let state = jittered_density(tau, &cfg, &params, &couplings)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok(wootters_concurrence(&state.rho_bar)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .value)
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&["sigma", "phi", "tau", "concurrence"]);
    for ((sigma, phi, tau), value) in jobs.into_iter().zip(values) {
        table.push_row(vec![sigma, phi, tau, value]);
    }
    table.metadata.insert("fss".into(), format_g(FSS, 12));
    table.metadata.insert("epsilon".into(), "0".into());
    stamp(&mut table, FigureId::Fig4a, opts);
    Ok(vec![table.write_file(&opts.out_dir, "fig4a", opts.format)?])
}

/// fig4b (concurrence) and fig4c (measured-delay density) share one grid and
/// schema: `tau,phi,concurrence,n_bar`.
fn fig4bc(figure: FigureId, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let sigma = 0.3;
    let phis = [PI / 8.0, FRAC_PI_4, FRAC_PI_2];
    let taus = uniform_grid(-2.0, TAU_MAX, 401);
    let cfg = JitterConfig64::new(sigma).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut jobs = Vec::new();
    for &tau in &taus {
        for &phi in &phis {
            jobs.push((tau, phi));
        }
    }
    let values: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(tau, phi)| -> Result<(f64, f64)> {
            let (params, couplings) = system(0.0, FSS, phi)?;
            match jittered_density(tau, &cfg, &params, &couplings) {
                Ok(state) => {
                    let c = wootters_concurrence(&state.rho_bar)
                        .map_err(|e| anyhow::anyhow!("{e}"))?
                        .value;
                    Ok((c, state.n_bar))
                }
                // Left of the kernel window: no support, zero density.
                Err(cascade_core::Error::DegenerateState) => Ok((0.0, 0.0)),
                Err(e) => Err(anyhow::anyhow!("{e}")),
            }
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&["tau", "phi", "concurrence", "n_bar"]);
    for ((tau, phi), (c, n_bar)) in jobs.into_iter().zip(values) {
        table.push_row(vec![tau, phi, c, n_bar]);
    }
    table.metadata.insert("fss".into(), format_g(FSS, 12));
    table.metadata.insert("sigma".into(), format_g(sigma, 12));
    table.metadata.insert("epsilon".into(), "0".into());
    stamp(&mut table, figure, opts);
    Ok(vec![table.write_file(
        &opts.out_dir,
        figure.name(),
        opts.format,
    )?])
}

fn fig5a(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let eps = -0.4;
    let phis = [PI / 8.0, FRAC_PI_4, 3.0 * PI / 8.0, FRAC_PI_2];
    let mut table = Table::new(&["phi", "tau", "concurrence"]);
    for &phi in &phis {
        let (params, couplings) = system(eps, FSS, phi)?;
        for tau in uniform_grid(0.0, TAU_MAX, TAU_POINTS) {
            let c = concurrence_of_delay(tau, &params, &couplings)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            table.push_row(vec![phi, tau, c]);
        }
    }
    table.metadata.insert("fss".into(), format_g(FSS, 12));
    table.metadata.insert("epsilon".into(), format_g(eps, 12));
    stamp(&mut table, FigureId::Fig5a, opts);
    Ok(vec![table.write_file(&opts.out_dir, "fig5a", opts.format)?])
}

fn fig5c(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let sigma = 3.0;
    let phis: Vec<f64> = (1..=11).map(|k| k as f64 * PI / 12.0).collect();
    let epsilons: Vec<f64> = (0..9).map(|k| -0.8 + 0.2 * k as f64).collect();
    let weighting = if opts.cbar_pure {
        CbarWeighting::PureConcurrence
    } else {
        CbarWeighting::JitteredConcurrence
    };
    let cfg = JitterConfig64::new(sigma).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut jobs = Vec::new();
    for &phi in &phis {
        for &eps in &epsilons {
            jobs.push((phi, eps));
        }
    }
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(phi, eps)| -> Result<f64> {
            let (params, couplings) = system(eps, FSS, phi)?;
            average_concurrence_with(&cfg, &params, &couplings, weighting)
                .map_err(|e| anyhow::anyhow!("{e}"))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&["phi", "epsilon", "avg_concurrence"]);
    for ((phi, eps), value) in jobs.into_iter().zip(values) {
        table.push_row(vec![phi, eps, value]);
    }
    table.metadata.insert("fss".into(), format_g(FSS, 12));
    table.metadata.insert("sigma".into(), format_g(sigma, 12));
    table.metadata.insert(
        "cbar_weighting".into(),
        match weighting {
            CbarWeighting::JitteredConcurrence => "jittered".into(),
            CbarWeighting::PureConcurrence => "pure".to_string(),
        },
    );
    stamp(&mut table, FigureId::Fig5c, opts);
    Ok(vec![table.write_file(&opts.out_dir, "fig5c", opts.format)?])
}
