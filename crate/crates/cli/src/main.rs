//! `cascade-sim`: figure data, parameter sweeps, and verification for the
//! chiral-waveguide biexciton cascade simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use cascade_sim::config::{
    parse_assignment, parse_axis, FileConfig, ParamOverrides, ResolvedConfig, SweepBlock,
};
use cascade_sim::figures::{run_figure, FigureId, FigureOptions};
use cascade_sim::output::OutputFormat;
use cascade_sim::sweep::{run_sweep, SweepSpec};
use cascade_sim::verify;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cascade-sim",
    version,
    about = "Simulates the path-entangled photon pair emitted by a quantum-dot \
             biexciton cascade in a chiral waveguide and quantifies its \
             entanglement under realistic imperfections.",
    after_help = "Exit codes: 0 success, 1 runtime/check failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML or JSON configuration file ([params], [jitter], [sweep] blocks).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Output format for emitted tables.
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Omit the creation timestamp from output metadata (byte-reproducible
    /// output).
    #[arg(long, global = true)]
    no_metadata_timestamp: bool,

    /// Emit joint (unconditioned) coincidence densities, multiplied by the
    /// first-photon density at --t-xx.
    #[arg(long, global = true)]
    unconditioned: bool,

    /// Biexciton detection time used with --unconditioned.
    #[arg(long, global = true, default_value_t = 0.0)]
    t_xx: f64,

    /// Average the jitter-free concurrence in C_bar outputs instead of the
    /// jittered one.
    #[arg(long, global = true)]
    cbar_pure_c: bool,

    /// Override the exciton decay rate gamma_X.
    #[arg(long, global = true)]
    gamma_x: Option<f64>,

    /// Override the decay asymmetry epsilon.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Override the fine-structure splitting S.
    #[arg(long, global = true)]
    fss: Option<f64>,

    /// Override the biexciton chiral phase Phi.
    #[arg(long, global = true)]
    phi: Option<f64>,

    /// Override the exciton chiral phase Phi'.
    #[arg(long, global = true)]
    phi_prime: Option<f64>,

    /// Override the exciton cross-coupling rate Gamma.
    #[arg(long, global = true)]
    cross_gamma: Option<f64>,

    /// Override the RMS detection jitter sigma.
    #[arg(long, global = true)]
    sigma: Option<f64>,

    /// Override the minimum quadrature node count (>= 64).
    #[arg(long, global = true)]
    quad_points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Coincidence densities at perfect chirality (S = 0 and S = 4 series).
    Fig2,
    /// Coincidence densities at Phi = pi/3, S = 4.
    Fig3a,
    /// Concurrence map over (Phi, tau).
    Fig3b,
    /// Concurrence versus detection jitter at marked (Phi, tau) points.
    Fig4a,
    /// Concurrence versus measured delay at sigma = 0.3.
    Fig4b,
    /// Measured-delay probability density at sigma = 0.3.
    Fig4c,
    /// Concurrence versus delay with asymmetric decay (eps = -0.4).
    Fig5a,
    /// Concurrence map over (Phi, tau) at eps = -0.4.
    Fig5b,
    /// Delay-averaged concurrence map over (Phi, eps) at sigma = 3.
    Fig5c,
    /// Evaluate an observable over a parameter grid.
    Sweep(SweepArgs),
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Observable: P_nm, C, C_jittered, C_bar, or N_bar.
    #[arg(long)]
    observable: Option<String>,

    /// Sweep axis as param=min:max:count (repeatable, up to 3); parameters:
    /// phi, S, sigma, epsilon, tau.
    #[arg(long = "axis")]
    axes: Vec<String>,

    /// Fixed parameter override as name=value (repeatable).
    #[arg(long = "set")]
    fixed: Vec<String>,

    /// Output file stem (default "sweep").
    #[arg(long, default_value = "sweep")]
    name: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path for the JSON report (default <out>/verify_report.json).
    #[arg(long)]
    report: Option<PathBuf>,
}

fn figure_options(common: &CommonArgs) -> Result<FigureOptions> {
    let format: OutputFormat = common.format.parse()?;
    Ok(FigureOptions {
        out_dir: common.out.clone(),
        format,
        timestamp: !common.no_metadata_timestamp,
        unconditioned: common.unconditioned,
        t_xx: common.t_xx,
        cbar_pure: common.cbar_pure_c,
    })
}

fn resolve(common: &CommonArgs) -> Result<ResolvedConfig> {
    let file = common.common_config_file()?;
    let flags = ParamOverrides {
        gamma_x: common.gamma_x,
        epsilon: common.epsilon,
        fss: common.fss,
        phi: common.phi,
        phi_prime: common.phi_prime,
        cross_gamma: common.cross_gamma,
        sigma: common.sigma,
        quad_points: common.quad_points,
    };
    ResolvedConfig::resolve(file, &flags)
}

impl CommonArgs {
    fn common_config_file(&self) -> Result<Option<FileConfig>> {
        self.config
            .as_deref()
            .map(FileConfig::load)
            .transpose()
    }
}

/// Usage-level failures exit with 2, runtime failures with 1.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let figure = |id: FigureId| -> std::result::Result<(), Failure> {
        let opts = figure_options(&cli.common).map_err(Failure::Usage)?;
        let paths = run_figure(id, &opts).map_err(Failure::Runtime)?;
        for path in paths {
            println!("wrote {}", path.display());
        }
        Ok(())
    };

    match &cli.command {
        Command::Fig2 => figure(FigureId::Fig2),
        Command::Fig3a => figure(FigureId::Fig3a),
        Command::Fig3b => figure(FigureId::Fig3b),
        Command::Fig4a => figure(FigureId::Fig4a),
        Command::Fig4b => figure(FigureId::Fig4b),
        Command::Fig4c => figure(FigureId::Fig4c),
        Command::Fig5a => figure(FigureId::Fig5a),
        Command::Fig5b => figure(FigureId::Fig5b),
        Command::Fig5c => figure(FigureId::Fig5c),
        Command::Sweep(args) => {
            let resolved = resolve(&cli.common).map_err(Failure::Usage)?;
            for warning in cascade_core::validate_regime(&resolved.params).warnings {
                eprintln!("note: base configuration: {warning}");
            }
            let block = sweep_block(args, &resolved).map_err(Failure::Usage)?;
            let spec = SweepSpec::build(&block).map_err(Failure::Usage)?;
            let mut table = run_sweep(&spec, &resolved).map_err(Failure::Runtime)?;
            table
                .metadata
                .insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
            if !cli.common.no_metadata_timestamp {
                table.metadata.insert(
                    "created".into(),
                    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                );
            }
            let format: OutputFormat = cli.common.format.parse().map_err(Failure::Usage)?;
            let path = table
                .write_file(&cli.common.out, &args.name, format)
                .map_err(Failure::Runtime)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Verify(args) => {
            let report = verify::run_all().map_err(Failure::Runtime)?;
            for check in &report.checks {
                println!("{}", check.summary_line());
            }
            let path = args
                .report
                .clone()
                .unwrap_or_else(|| cli.common.out.join("verify_report.json"));
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)
                    .context("creating report directory")
                    .map_err(Failure::Runtime)?;
            }
            let file = std::fs::File::create(&path)
                .context("creating report file")
                .map_err(Failure::Runtime)?;
            serde_json::to_writer_pretty(file, &report)
                .context("writing report")
                .map_err(Failure::Runtime)?;
            println!(
                "report: {} ({}/{} checks passed)",
                path.display(),
                report.checks.iter().filter(|c| c.passed).count(),
                report.checks.len()
            );
            if !report.passed {
                return Err(Failure::Runtime(anyhow::anyhow!(
                    "verification failed"
                )));
            }
            Ok(())
        }
    }
}

/// Merges `--observable/--axis/--set` flags with the config file's `[sweep]`
/// block (flags win).
fn sweep_block(args: &SweepArgs, resolved: &ResolvedConfig) -> Result<SweepBlock> {
    let from_file = resolved.sweep.clone();
    let observable = args
        .observable
        .clone()
        .or_else(|| from_file.as_ref().map(|s| s.observable.clone()))
        .context("sweep needs --observable or a [sweep] config block")?;
    let axes = if args.axes.is_empty() {
        from_file
            .as_ref()
            .map(|s| s.axes.clone())
            .unwrap_or_default()
    } else {
        args.axes
            .iter()
            .map(|s| parse_axis(s))
            .collect::<Result<Vec<_>>>()?
    };
    let mut fixed = from_file.map(|s| s.fixed).unwrap_or_default();
    for pair in &args.fixed {
        let (name, value) = parse_assignment(pair)?;
        fixed.insert(name, value);
    }
    Ok(SweepBlock {
        observable,
        axes,
        fixed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
    }
}
