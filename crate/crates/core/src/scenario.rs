//! Scenario driver: configuration, presets mirroring the published
//! experiments, single runs and ratio/initial-state sweeps.

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    classify, collapse_revival_time, time_averaged_imbalance, CollapseRevivalReport,
    DetectorParams, RegimeReport,
};
use crate::error::{Error, Result};
use crate::io::{self, Format};
use crate::model::{build_hamiltonian, CouplingConfig};
use crate::observables::{record, ObservableRecord};
use crate::spectral::{eigendecompose, Propagator};
use crate::states::InitialState;

pub const DEFAULT_STEPS: usize = 10_000;

/// Everything needed to reproduce one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub config: CouplingConfig,
    pub initial: InitialState,
    pub t_max: f64,
    /// Number of uniform samples on `[0, t_max]`, endpoints included.
    pub steps: usize,
    pub window: usize,
    pub theta_c: f64,
    pub theta_r: f64,
}

impl ScenarioSpec {
    pub fn new(config: CouplingConfig, initial: InitialState, t_max: f64, steps: usize) -> Self {
        let d = DetectorParams::default();
        Self {
            config,
            initial,
            t_max,
            steps,
            window: d.window,
            theta_c: d.theta_c,
            theta_r: d.theta_r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidScenario(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if self.window < 2 {
            return Err(Error::InvalidScenario(format!(
                "window must be >= 2, got {}",
                self.window
            )));
        }
        self.initial.build(self.config.n_total)?;
        Ok(())
    }

    pub fn detector(&self) -> DetectorParams {
        DetectorParams {
            window: self.window,
            theta_c: self.theta_c,
            theta_r: self.theta_r,
            ..DetectorParams::for_imbalance(self.config.n_total)
        }
    }

    /// Uniform sample times. The empty system has no dynamics and gets a
    /// single sample at `t = 0`.
    pub fn time_grid(&self) -> Vec<f64> {
        if self.config.n_total == 0 {
            return vec![0.0];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|j| self.t_max * j as f64 / last)
            .collect()
    }
}

/// Aggregates reported alongside a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub regime: RegimeReport,
    pub collapse_revival: CollapseRevivalReport,
    pub mean_imbalance_scaled: f64,
    pub mean_variance: f64,
    pub mean_entanglement_bits: f64,
    pub max_entanglement_bits: f64,
    pub min_variance: f64,
    pub max_norm_error: f64,
    /// `max_t |E(t) - E(0)| / max(|E(0)|, 1)`.
    pub max_energy_drift: f64,
}

#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub spec: ScenarioSpec,
    pub summary: ScenarioSummary,
    pub series: Vec<ObservableRecord>,
}

/// Observables along the scenario's time grid. Time points are evaluated in
/// parallel; each is independent, so the output does not depend on the
/// thread count.
pub fn simulate(spec: &ScenarioSpec) -> Result<Vec<ObservableRecord>> {
    spec.validate()?;
    let h = build_hamiltonian(&spec.config)?;
    let decomp = eigendecompose(&h)?;
    let initial = spec.initial.build(spec.config.n_total)?;
    let propagator = Propagator::new(&decomp, &initial)?;
    Ok(spec
        .time_grid()
        .par_iter()
        .map(|&t| record(&propagator.state_at(t), t, &h))
        .collect())
}

pub fn summarize(spec: &ScenarioSpec, series: &[ObservableRecord]) -> ScenarioSummary {
    let column = |f: fn(&ObservableRecord) -> f64| -> Vec<(f64, f64)> {
        series.iter().map(|r| (r.t, f(r))).collect()
    };
    let e0 = series.first().map_or(0.0, |r| r.energy);
    ScenarioSummary {
        regime: classify(&spec.config),
        collapse_revival: collapse_revival_time(
            &column(|r| r.imbalance),
            spec.config.n_total,
            &spec.detector(),
        ),
        mean_imbalance_scaled: time_averaged_imbalance(&column(|r| r.imbalance_scaled)),
        mean_variance: time_averaged_imbalance(&column(|r| r.variance)),
        mean_entanglement_bits: time_averaged_imbalance(&column(|r| r.entanglement_bits)),
        max_entanglement_bits: series
            .iter()
            .map(|r| r.entanglement_bits)
            .fold(0.0, f64::max),
        min_variance: series
            .iter()
            .map(|r| r.variance)
            .fold(f64::INFINITY, f64::min),
        max_norm_error: series.iter().map(|r| r.norm_error).fold(0.0, f64::max),
        max_energy_drift: series
            .iter()
            .map(|r| (r.energy - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs().max(1.0),
    }
}

pub fn run_scenario(spec: &ScenarioSpec) -> Result<ScenarioResult> {
    let series = simulate(spec)?;
    let summary = summarize(spec, &series);
    Ok(ScenarioResult {
        spec: spec.clone(),
        summary,
        series,
    })
}

/// Writes a result to `path`. CSV output puts the summary in a sibling
/// `<stem>.summary.json`.
pub fn write_result(result: &ScenarioResult, path: &Path, format: Format) -> Result<()> {
    match format {
        Format::Json => io::write_json(result, BufWriter::new(File::create(path)?)),
        Format::Csv => {
            io::write_csv(&result.series, BufWriter::new(File::create(path)?))?;
            let summary = BufWriter::new(File::create(summary_path(path))?);
            serde_json::to_writer_pretty(summary, &result.summary)?;
            Ok(())
        }
    }
}

pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.summary.json"))
}

/// How a bare ratio `r = k / E_J` becomes absolute couplings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RatioConvention {
    /// `k = 1, E_J = 1/r` for `r <= 1`; `k = r, E_J = 1` otherwise.
    #[default]
    Paper,
    /// `E_J = 1, k = r`.
    Milburn,
}

impl RatioConvention {
    /// `(k, E_J)` realizing `ratio`.
    pub fn couplings(self, ratio: f64) -> (f64, f64) {
        match self {
            RatioConvention::Paper if ratio <= 1.0 => (1.0, 1.0 / ratio),
            RatioConvention::Paper | RatioConvention::Milburn => (ratio, 1.0),
        }
    }
}

/// A grid of scenarios over coupling ratios and initial states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_total: usize,
    pub delta_mu: f64,
    pub convention: RatioConvention,
    pub ratios: Vec<f64>,
    pub initials: Vec<InitialState>,
    pub t_max: f64,
    pub steps: usize,
    pub window: usize,
    pub theta_c: f64,
    pub theta_r: f64,
}

impl SweepSpec {
    pub fn cell_spec(&self, ratio: f64, initial: InitialState) -> Result<ScenarioSpec> {
        let (k, e_j) = self.convention.couplings(ratio);
        Ok(ScenarioSpec {
            config: CouplingConfig::new(self.n_total, k, self.delta_mu, e_j)?,
            initial,
            t_max: self.t_max,
            steps: self.steps,
            window: self.window,
            theta_c: self.theta_c,
            theta_r: self.theta_r,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepCell {
    pub ratio: f64,
    pub initial: InitialState,
    pub outcome: std::result::Result<ScenarioResult, String>,
}

/// Runs every `(ratio, initial)` cell. Cells share nothing but the inputs;
/// a failing cell is recorded and the rest still run.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    if spec.ratios.is_empty() || spec.initials.is_empty() {
        return Err(Error::InvalidScenario(
            "sweep needs at least one ratio and one initial state".into(),
        ));
    }
    let cells: Vec<(f64, InitialState)> = spec
        .ratios
        .iter()
        .flat_map(|&r| spec.initials.iter().map(move |&s| (r, s)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(ratio, initial)| {
            let outcome = spec
                .cell_spec(ratio, initial)
                .and_then(|s| run_scenario(&s))
                .map_err(|e| e.to_string());
            SweepCell {
                ratio,
                initial,
                outcome,
            }
        })
        .collect())
}

/// File name of a sweep cell: position plus a readable tag.
pub fn cell_file_name(index: usize, cell: &SweepCell, format: Format) -> String {
    let initial = cell.initial.to_string().replace([':', ','], "_");
    format!(
        "cell{index:03}_ratio{}_{initial}.{}",
        io::format_value(cell.ratio),
        format.extension()
    )
}

pub const SWEEP_SUMMARY_HEADER: [&str; 15] = [
    "ratio",
    "initial",
    "k",
    "e_j",
    "regime",
    "phase",
    "detected",
    "t_cr",
    "t_cr_rescaled",
    "mean_imbalance_scaled",
    "mean_variance",
    "mean_entanglement_bits",
    "max_entanglement_bits",
    "file",
    "error",
];

/// Writes one series file per cell into `dir` and a `summary.csv` table
/// keyed by `(ratio, initial)`.
pub fn write_sweep(cells: &[SweepCell], dir: &Path, format: Format) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let summary_file = dir.join("summary.csv");
    let mut table = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(&summary_file)?;
    table.write_record(SWEEP_SUMMARY_HEADER)?;
    let opt = |x: Option<f64>| x.map(io::format_value).unwrap_or_default();
    for (index, cell) in cells.iter().enumerate() {
        let ratio = io::format_value(cell.ratio);
        let initial = cell.initial.to_string();
        match &cell.outcome {
            Ok(result) => {
                let name = cell_file_name(index, cell, format);
                write_result(result, &dir.join(&name), format)?;
                let s = &result.summary;
                table.write_record([
                    ratio,
                    initial,
                    io::format_value(result.spec.config.k),
                    io::format_value(result.spec.config.e_j),
                    serde_json::to_value(s.regime.regime)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                    serde_json::to_value(s.regime.phase)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                    s.collapse_revival.detected.to_string(),
                    opt(s.collapse_revival.t_cr),
                    opt(s.collapse_revival.t_cr_rescaled),
                    io::format_value(s.mean_imbalance_scaled),
                    io::format_value(s.mean_variance),
                    io::format_value(s.mean_entanglement_bits),
                    io::format_value(s.max_entanglement_bits),
                    name,
                    String::new(),
                ])?;
            }
            Err(message) => {
                let mut row = vec![ratio, initial];
                row.extend(std::iter::repeat(String::new()).take(SWEEP_SUMMARY_HEADER.len() - 3));
                row.push(message.clone());
                table.write_record(row)?;
            }
        }
    }
    table.flush()?;
    Ok(summary_file)
}

/// Named reproductions of the published numerical experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Rabi regime, `k = 1, E_J = N^2`, from `|N,0>`; revivals every `4 pi`.
    FigRabi,
    /// Ratios `1/N^2, 1/N, 1, N, N^2` from `|N,0>`.
    FigRabiFockSweep,
    /// `E_J = 1, k = 8/N` from `|0,N>`: self-trapped collapse and revival.
    FigSelftrap,
    /// Ratios `1/N .. 1` across the self-trapping threshold from `|N,0>`.
    FigThresholdScan,
    /// Initial-state menu at ratios `1/N^2` and `1/N`.
    FigInitialsRabi,
    /// Initial-state menu at ratios `1` and `N`.
    FigInitialsJosephson,
    /// Fluctuations and entanglement from `|N,0>`.
    FigFluctFock,
    /// Fluctuations and entanglement from the cat state.
    FigFluctCat,
    /// Fluctuations and entanglement from the maximally entangled state.
    FigFluctMe,
    /// Same as `FigRabi`; names the `k = 1` time-scale convention.
    PaperTimescale,
    /// Same as `FigSelftrap`; names the `E_J = 1` time-scale convention.
    MilburnTimescale,
}

/// What a preset expands to.
#[derive(Clone, Debug, PartialEq)]
pub enum Plan {
    Single(ScenarioSpec),
    Sweep(SweepSpec),
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::FigRabi,
        Preset::FigRabiFockSweep,
        Preset::FigSelftrap,
        Preset::FigThresholdScan,
        Preset::FigInitialsRabi,
        Preset::FigInitialsJosephson,
        Preset::FigFluctFock,
        Preset::FigFluctCat,
        Preset::FigFluctMe,
        Preset::PaperTimescale,
        Preset::MilburnTimescale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FigRabi => "fig-rabi",
            Preset::FigRabiFockSweep => "fig-rabi-fock-sweep",
            Preset::FigSelftrap => "fig-selftrap",
            Preset::FigThresholdScan => "fig-threshold-scan",
            Preset::FigInitialsRabi => "fig-initials-rabi",
            Preset::FigInitialsJosephson => "fig-initials-josephson",
            Preset::FigFluctFock => "fig-fluct-fock",
            Preset::FigFluctCat => "fig-fluct-cat",
            Preset::FigFluctMe => "fig-fluct-me",
            Preset::PaperTimescale => "paper-timescale",
            Preset::MilburnTimescale => "milburn-timescale",
        }
    }

    /// Default convention for bare ratios given on top of this preset.
    pub fn convention(self) -> RatioConvention {
        match self {
            Preset::FigSelftrap | Preset::MilburnTimescale => RatioConvention::Milburn,
            _ => RatioConvention::Paper,
        }
    }

    /// Expands the preset for `n_total` bosons.
    ///
    /// Time windows (`t_max`) are chosen to show at least two revivals
    /// where there are any:
    /// * `fig-rabi`: 30, two revivals at `4 pi`; 12000 samples.
    /// * `fig-selftrap`: `1.5 N` in `E_J = 1` units, two self-trapped
    ///   revivals (`t_cr ~ 0.7 N`); 12000 samples.
    /// * `fig-rabi-fock-sweep`, `fig-initials-*`, `fig-fluct-*`: 30.
    /// * `fig-threshold-scan`: 100, long enough for a stable time average.
    pub fn plan(self, n_total: usize) -> Result<Plan> {
        let n = n_total as f64;
        let single =
            |k: f64, e_j: f64, initial: InitialState, t_max: f64, steps: usize| -> Result<Plan> {
                Ok(Plan::Single(ScenarioSpec::new(
                    CouplingConfig::new(n_total, k, 0.0, e_j)?,
                    initial,
                    t_max,
                    steps,
                )))
            };
        let sweep = |ratios: Vec<f64>, initials: Vec<InitialState>, t_max: f64| {
            let d = DetectorParams::default();
            Plan::Sweep(SweepSpec {
                n_total,
                delta_mu: 0.0,
                convention: RatioConvention::Paper,
                ratios,
                initials,
                t_max,
                steps: DEFAULT_STEPS,
                window: d.window,
                theta_c: d.theta_c,
                theta_r: d.theta_r,
            })
        };
        let all_in_one = InitialState::Fock { m: n_total, n: 0 };
        let fluct_ratios = vec![1.0 / (n * n), 1.0 / n, 4.0 / n, 10.0 / n, 1.0];
        if n_total == 0 && !matches!(self, Preset::FigRabi | Preset::PaperTimescale) {
            return Err(Error::InvalidScenario(format!(
                "preset {} needs N >= 1",
                self.name()
            )));
        }
        Ok(match self {
            Preset::FigRabi | Preset::PaperTimescale => {
                single(1.0, n * n, all_in_one, 30.0, 12_000)?
            }
            Preset::FigSelftrap | Preset::MilburnTimescale => single(
                8.0 / n,
                1.0,
                InitialState::Fock { m: 0, n: n_total },
                1.5 * n,
                12_000,
            )?,
            Preset::FigRabiFockSweep => sweep(
                vec![1.0 / (n * n), 1.0 / n, 1.0, n, n * n],
                vec![all_in_one],
                30.0,
            ),
            Preset::FigThresholdScan => sweep(
                [1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 50.0]
                    .iter()
                    .map(|r| r / n)
                    .chain([1.0])
                    .collect(),
                vec![all_in_one],
                100.0,
            ),
            Preset::FigInitialsRabi => {
                sweep(vec![1.0 / (n * n), 1.0 / n], initial_menu(n_total), 30.0)
            }
            Preset::FigInitialsJosephson => sweep(vec![1.0, n], initial_menu(n_total), 30.0),
            Preset::FigFluctFock => sweep(fluct_ratios, vec![all_in_one], 30.0),
            Preset::FigFluctCat => sweep(fluct_ratios, vec![InitialState::Cat], 30.0),
            Preset::FigFluctMe => sweep(fluct_ratios, vec![InitialState::MaximallyEntangled], 30.0),
        })
    }
}

/// `|N,0>, |0.9N,0.1N>, |0.74N,0.26N>, |0.6N,0.4N>, |N/2,N/2>` (rounded).
pub fn initial_menu(n_total: usize) -> Vec<InitialState> {
    [1.0, 0.9, 0.74, 0.6, 0.5]
        .iter()
        .map(|f| {
            let m = (f * n_total as f64).round() as usize;
            InitialState::Fock { m, n: n_total - m }
        })
        .collect()
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}
