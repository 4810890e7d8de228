use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dimer::io::Format;
use dimer::scenario::{
    run_scenario, sweep, write_result, write_sweep, Plan, Preset, RatioConvention, ScenarioSpec,
    SweepSpec, DEFAULT_STEPS,
};
use dimer::{CouplingConfig, Error, InitialState, Result};

/// Exact-diagonalization dynamics of two Josephson-coupled condensates.
///
/// One ratio and one initial state run a single scenario; several of
/// either (repeat the flag) run a sweep with one file per cell.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Named experiment to start from; other flags override its fields.
    #[arg(long)]
    preset: Option<String>,

    /// List preset names and exit.
    #[arg(long)]
    list_presets: bool,

    /// Total boson number N.
    #[arg(long)]
    n: Option<usize>,

    /// Scattering strength k.
    #[arg(long)]
    k: Option<f64>,

    /// Tunneling strength E_J.
    #[arg(long)]
    ej: Option<f64>,

    /// External potential delta mu.
    #[arg(long)]
    dmu: Option<f64>,

    /// Coupling ratio k/E_J (repeatable). Ignored when both --k and --ej are given.
    #[arg(long)]
    ratio: Vec<f64>,

    /// How a bare ratio maps to (k, E_J).
    #[arg(long, value_enum)]
    timescale: Option<RatioConvention>,

    /// Initial state: fock:m,n | cat | me (repeatable).
    #[arg(long)]
    initial: Vec<String>,

    #[arg(long)]
    t_max: Option<f64>,

    /// Uniform time samples on [0, t_max].
    #[arg(long)]
    steps: Option<usize>,

    /// Output file (single run) or directory (sweep).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Envelope window in samples.
    #[arg(long)]
    window: Option<usize>,

    /// Collapse threshold relative to the initial amplitude.
    #[arg(long)]
    theta_c: Option<f64>,

    /// Revival threshold relative to the initial amplitude.
    #[arg(long)]
    theta_r: Option<f64>,
}

const DEFAULT_N: usize = 100;

fn resolve(cli: &Cli) -> Result<Plan> {
    let preset = cli
        .preset
        .as_deref()
        .map(str::parse::<Preset>)
        .transpose()?;
    let n_total = cli.n.unwrap_or(DEFAULT_N);
    let convention = cli
        .timescale
        .or(preset.map(Preset::convention))
        .unwrap_or_default();
    let initials = cli
        .initial
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<InitialState>>>()?;

    let base = match preset {
        Some(p) => p.plan(n_total)?,
        None => Plan::Single(ScenarioSpec::new(
            CouplingConfig::new(n_total, 1.0, 0.0, 1.0)?,
            InitialState::Fock { m: n_total, n: 0 },
            10.0,
            DEFAULT_STEPS,
        )),
    };
    let mut plan = match base {
        Plan::Single(spec) => PlanDraft::Single {
            sweep: SweepSpec {
                n_total,
                delta_mu: spec.config.delta_mu,
                convention,
                ratios: vec![],
                initials: vec![spec.initial],
                t_max: spec.t_max,
                steps: spec.steps,
                window: spec.window,
                theta_c: spec.theta_c,
                theta_r: spec.theta_r,
            },
            config: spec.config,
        },
        Plan::Sweep(s) => PlanDraft::Sweep(s),
    };

    // Apply overrides to whichever shape the preset produced.
    let absolute = cli.k.is_some() && cli.ej.is_some();
    match &mut plan {
        PlanDraft::Single { sweep, config } => {
            if let Some(&r) = cli.ratio.first().filter(|_| !absolute) {
                let (k, e_j) = convention.couplings(r);
                config.k = k;
                config.e_j = e_j;
            }
            sweep.ratios = if absolute { vec![] } else { cli.ratio.clone() };
            config.k = cli.k.unwrap_or(config.k);
            config.e_j = cli.ej.unwrap_or(config.e_j);
            config.delta_mu = cli.dmu.unwrap_or(config.delta_mu);
            apply_common(cli, sweep, &initials);
        }
        PlanDraft::Sweep(sweep) => {
            if !cli.ratio.is_empty() {
                sweep.ratios = cli.ratio.clone();
            }
            if cli.k.is_some() || cli.ej.is_some() {
                return Err(Error::InvalidScenario(
                    "sweeps take --ratio, not --k/--ej".into(),
                ));
            }
            sweep.convention = convention;
            sweep.delta_mu = cli.dmu.unwrap_or(sweep.delta_mu);
            apply_common(cli, sweep, &initials);
        }
    }

    Ok(match plan {
        PlanDraft::Single { sweep, config }
            if sweep.ratios.len() <= 1 && sweep.initials.len() == 1 =>
        {
            Plan::Single(ScenarioSpec {
                config: CouplingConfig::new(n_total, config.k, config.delta_mu, config.e_j)?,
                initial: sweep.initials[0],
                t_max: sweep.t_max,
                steps: sweep.steps,
                window: sweep.window,
                theta_c: sweep.theta_c,
                theta_r: sweep.theta_r,
            })
        }
        PlanDraft::Single { mut sweep, config } => {
            if sweep.ratios.is_empty() {
                if config.e_j == 0.0 {
                    return Err(Error::InvalidScenario(
                        "a sweep needs E_J != 0 to define a ratio".into(),
                    ));
                }
                sweep.ratios = vec![config.k / config.e_j];
            }
            Plan::Sweep(sweep)
        }
        PlanDraft::Sweep(sweep) => Plan::Sweep(sweep),
    })
}

enum PlanDraft {
    Single {
        sweep: SweepSpec,
        config: CouplingConfig,
    },
    Sweep(SweepSpec),
}

fn apply_common(cli: &Cli, sweep: &mut SweepSpec, initials: &[InitialState]) {
    if !initials.is_empty() {
        sweep.initials = initials.to_vec();
    }
    sweep.t_max = cli.t_max.unwrap_or(sweep.t_max);
    sweep.steps = cli.steps.unwrap_or(sweep.steps);
    sweep.window = cli.window.unwrap_or(sweep.window);
    sweep.theta_c = cli.theta_c.unwrap_or(sweep.theta_c);
    sweep.theta_r = cli.theta_r.unwrap_or(sweep.theta_r);
}

fn run(cli: &Cli) -> Result<()> {
    if cli.list_presets {
        for p in Preset::ALL {
            println!("{p}");
        }
        return Ok(());
    }
    match resolve(cli)? {
        Plan::Single(spec) => {
            let result = run_scenario(&spec)?;
            let out = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("dimer.{}", cli.format.extension())));
            write_result(&result, &out, cli.format)?;
            let mut summary = serde_json::to_value(&result.summary)?;
            if let Some(cr) = summary
                .get_mut("collapse_revival")
                .and_then(|v| v.as_object_mut())
            {
                cr.remove("envelope");
            }
            println!("{}", serde_json::to_string_pretty(&summary)?);
            eprintln!("wrote {} records to {}", result.series.len(), out.display());
        }
        Plan::Sweep(spec) => {
            let cells = sweep(&spec)?;
            let dir = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("dimer-sweep"));
            let table = write_sweep(&cells, &dir, cli.format)?;
            let failed = cells.iter().filter(|c| c.outcome.is_err()).count();
            eprintln!(
                "{} cells ({failed} failed); summary in {}",
                cells.len(),
                table.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
