//! Coupling-regime classification and time-series diagnostics: sliding
//! window envelopes, collapse/revival detection and time averages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CouplingConfig;
use crate::observables::expectation_imbalance;
use crate::spectral::StateVector;

/// Relative tolerance for sitting exactly on `k/E_J = 4/N`.
pub const THRESHOLD_REL_TOL: f64 = 1e-12;

/// Coupling bands ordered from tunneling-dominated to interaction-dominated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Rabi,
    RabiJosephsonCrossover,
    Josephson,
    JosephsonFockCrossover,
    Fock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Delocalized,
    Threshold,
    SelfTrapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// `|k / E_J|`; infinite without tunneling.
    pub ratio: f64,
    pub regime: Regime,
    pub phase: Phase,
}

/// Places a configuration in the regime map.
///
/// `<<` is read as one decade: Rabi below `1/(10N)`, Josephson on
/// `[10/N, N/10]`, Fock above `10N`, crossovers in between. The phase
/// compares against the self-trapping threshold `4/N`. Signs of `k` and
/// `E_J` do not enter. `N = 0` uses `N = 1` for the bands and has no
/// finite threshold.
pub fn classify(config: &CouplingConfig) -> RegimeReport {
    if config.e_j == 0.0 {
        return RegimeReport {
            ratio: f64::INFINITY,
            regime: Regime::Fock,
            phase: Phase::SelfTrapped,
        };
    }
    let ratio = (config.k / config.e_j).abs();
    let n = config.n_total.max(1) as f64;
    let regime = if ratio < 0.1 / n {
        Regime::Rabi
    } else if ratio < 10.0 / n {
        Regime::RabiJosephsonCrossover
    } else if ratio <= n / 10.0 {
        Regime::Josephson
    } else if ratio <= 10.0 * n {
        Regime::JosephsonFockCrossover
    } else {
        Regime::Fock
    };
    let phase = if config.n_total == 0 {
        Phase::Delocalized
    } else {
        let threshold = 4.0 / config.n_total as f64;
        if (ratio - threshold).abs() <= THRESHOLD_REL_TOL * threshold {
            Phase::Threshold
        } else if ratio < threshold {
            Phase::Delocalized
        } else {
            Phase::SelfTrapped
        }
    };
    RegimeReport {
        ratio,
        regime,
        phase,
    }
}

/// Sliding-window amplitude of a uniformly sampled series.
///
/// Each value is first detrended by its own centered running mean (clipped
/// at the ends). The amplitude at sample `i` is half the peak-to-peak span
/// of the detrended values over the centered window `[i - w/2, i + w/2]`.
/// Only samples whose window fits entirely inside the series get a value,
/// so the output is `len - 2 * (w / 2)` points long.
pub fn envelope(series: &[(f64, f64)], window: usize) -> Result<Vec<(f64, f64)>> {
    if window < 2 {
        return Err(Error::InvalidScenario(format!(
            "envelope window must be >= 2, got {window}"
        )));
    }
    let needed = 3 * window;
    if series.len() < needed {
        return Err(Error::SeriesTooShort {
            needed,
            got: series.len(),
        });
    }
    let half = window / 2;
    let len = series.len();

    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0.0);
    for (_, v) in series {
        prefix.push(prefix.last().unwrap() + v);
    }
    let detrended: Vec<f64> = (0..len)
        .map(|j| {
            let lo = j.saturating_sub(half);
            let hi = (j + half).min(len - 1);
            let mean = (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64;
            series[j].1 - mean
        })
        .collect();

    Ok((half..len - half)
        .map(|i| {
            let (lo, hi) = detrended[i - half..=i + half]
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                });
            (series[i].0, 0.5 * (hi - lo))
        })
        .collect())
}

/// Knobs of the collapse/revival detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Envelope window in samples.
    pub window: usize,
    /// Collapse: envelope drops below `theta_c * A0`.
    pub theta_c: f64,
    /// Revival: envelope climbs back to at least `theta_r * A0`.
    pub theta_r: f64,
    /// Minimum usable initial amplitude `A0`, in units of the series.
    pub amplitude_floor: f64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            window: 201,
            theta_c: 0.1,
            theta_r: 0.5,
            amplitude_floor: 0.0,
        }
    }
}

impl DetectorParams {
    /// Defaults with the floor set to `0.01 N` for a raw `<N1 - N2>` series.
    pub fn for_imbalance(n_total: usize) -> Self {
        Self {
            amplitude_floor: 0.01 * n_total as f64,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotDetected {
    /// The initial envelope amplitude is below the floor.
    NoInitialAmplitude,
    NoCollapse,
    NoRevival,
    /// Fewer than three windows of data.
    SeriesTooShort,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseRevivalReport {
    pub detected: bool,
    pub reason: Option<NotDetected>,
    /// First revival time.
    pub t_cr: Option<f64>,
    /// `8 t_cr / N`.
    pub t_cr_rescaled: Option<f64>,
    pub collapse_time: Option<f64>,
    /// Envelope amplitude at the first evaluable sample.
    pub initial_amplitude: Option<f64>,
    pub detector: DetectorParams,
    pub envelope: Vec<(f64, f64)>,
}

impl CollapseRevivalReport {
    fn missing(reason: NotDetected, detector: DetectorParams, envelope: Vec<(f64, f64)>) -> Self {
        Self {
            detected: false,
            reason: Some(reason),
            t_cr: None,
            t_cr_rescaled: None,
            collapse_time: None,
            initial_amplitude: None,
            detector,
            envelope,
        }
    }
}

/// Finds the first collapse and the revival that follows it.
///
/// The collapse is the first envelope sample below `theta_c * A0`; the
/// revival is the first local maximum of the envelope after it that reaches
/// `theta_r * A0`. A flat-topped maximum reports the middle of its plateau.
pub fn collapse_revival_time(
    series: &[(f64, f64)],
    n_total: usize,
    params: &DetectorParams,
) -> CollapseRevivalReport {
    let env = match envelope(series, params.window) {
        Ok(env) => env,
        Err(_) => {
            return CollapseRevivalReport::missing(NotDetected::SeriesTooShort, *params, Vec::new())
        }
    };
    let a0 = env[0].1;
    if !(a0 > params.amplitude_floor) || a0 <= 0.0 {
        return CollapseRevivalReport::missing(NotDetected::NoInitialAmplitude, *params, env);
    }
    let mut report = CollapseRevivalReport::missing(NotDetected::NoCollapse, *params, Vec::new());
    report.initial_amplitude = Some(a0);

    let Some(collapse) = env.iter().position(|&(_, a)| a < params.theta_c * a0) else {
        report.envelope = env;
        return report;
    };
    report.collapse_time = Some(env[collapse].0);

    let revival_start = env[collapse..]
        .iter()
        .position(|&(_, a)| a >= params.theta_r * a0)
        .map(|i| i + collapse);
    let peak = revival_start.and_then(|start| {
        let mut i = start;
        while i + 1 < env.len() && env[i + 1].1 >= env[i].1 {
            // Walk up, remembering where the current plateau began.
            i += 1;
        }
        // A peak touching the end of the data is not a confirmed maximum.
        if i + 1 == env.len() {
            return None;
        }
        let mut first = i;
        while first > start && env[first - 1].1 == env[i].1 {
            first -= 1;
        }
        Some(0.5 * (env[first].0 + env[i].0))
    });

    match peak {
        Some(t_cr) => {
            report.detected = true;
            report.reason = None;
            report.t_cr = Some(t_cr);
            report.t_cr_rescaled = (n_total > 0).then(|| 8.0 * t_cr / n_total as f64);
        }
        None => report.reason = Some(NotDetected::NoRevival),
    }
    report.envelope = env;
    report
}

/// Trapezoid-rule time average of a series.
pub fn time_averaged_imbalance(series: &[(f64, f64)]) -> f64 {
    match series {
        [] => f64::NAN,
        [(_, v)] => *v,
        _ => {
            let span = series[series.len() - 1].0 - series[0].0;
            if span <= 0.0 {
                return series.iter().map(|(_, v)| v).sum::<f64>() / series.len() as f64;
            }
            let area: f64 = series
                .windows(2)
                .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
                .sum();
            area / span
        }
    }
}

/// Whether the bias beats the interaction term for this state:
/// `delta_mu > (k/2) <N1 - N2>`.
pub fn delta_mu_dominance(config: &CouplingConfig, state: &StateVector) -> bool {
    config.delta_mu > config.k / 2.0 * expectation_imbalance(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{fock, maximally_entangled};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg(n: usize, ratio: f64) -> CouplingConfig {
        CouplingConfig::new(n, ratio, 0.0, 1.0).unwrap()
    }

    fn sampled(f: impl Fn(f64) -> f64, dt: f64, len: usize) -> Vec<(f64, f64)> {
        (0..len).map(|i| i as f64 * dt).map(|t| (t, f(t))).collect()
    }

    #[test]
    fn regimes_at_paper_ratios() {
        let n = 100usize;
        let nf = n as f64;
        let r = classify(&cfg(n, 1.0 / (nf * nf)));
        assert_eq!((r.regime, r.phase), (Regime::Rabi, Phase::Delocalized));
        assert_eq!(classify(&cfg(n, 4.0 / nf)).phase, Phase::Threshold);
        let r = classify(&cfg(n, nf * nf));
        assert_eq!((r.regime, r.phase), (Regime::Fock, Phase::SelfTrapped));
        assert_eq!(
            classify(&cfg(n, 1.0 / nf)).regime,
            Regime::RabiJosephsonCrossover
        );
        assert_eq!(classify(&cfg(n, 1.0)).regime, Regime::Josephson);
        assert_eq!(classify(&cfg(n, nf)).regime, Regime::JosephsonFockCrossover);
        assert_eq!(classify(&cfg(n, 3.0 / nf)).phase, Phase::Delocalized);
        assert_eq!(classify(&cfg(n, 5.0 / nf)).phase, Phase::SelfTrapped);
    }

    #[test]
    fn classification_edge_cases() {
        let r = classify(&CouplingConfig::new(10, 1.0, 0.0, 0.0).unwrap());
        assert_eq!((r.regime, r.phase), (Regime::Fock, Phase::SelfTrapped));
        // Sign of the tunneling is a gauge choice.
        let a = classify(&CouplingConfig::new(50, 0.08, 0.0, 1.0).unwrap());
        let b = classify(&CouplingConfig::new(50, 0.08, 0.0, -1.0).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.phase, Phase::Threshold);
    }

    proptest! {
        #[test]
        fn classify_is_monotone(n in 1usize..2000, a in -8.0f64..8.0, b in -8.0f64..8.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r_lo = classify(&cfg(n, 10f64.powf(lo)));
            let r_hi = classify(&cfg(n, 10f64.powf(hi)));
            prop_assert!(r_lo.regime <= r_hi.regime);
        }
    }

    #[test]
    fn envelope_of_constant_is_zero() {
        let s = sampled(|_| 3.5, 0.1, 100);
        let env = envelope(&s, 11).unwrap();
        assert_eq!(env.len(), 100 - 10);
        assert!(env.iter().all(|&(_, a)| a == 0.0));
    }

    #[test]
    fn envelope_of_cosine() {
        // 20 samples per period, window spanning ~5 periods.
        let amp = 2.3;
        let omega = 2.0 * PI;
        let s = sampled(|t| amp * (omega * t).cos(), 0.05, 2000);
        for (_, a) in envelope(&s, 101).unwrap() {
            assert!((a - amp).abs() < 0.05 * amp, "amplitude {a}");
        }
    }

    #[test]
    fn envelope_tracks_beat_nodes() {
        // cos(w1 t) + cos(w2 t) = 2 cos(dw t / 2) cos(w t); |envelope| vanishes at dw t / 2 = pi/2 + j pi.
        let (w1, w2) = (20.0, 21.0);
        let dt = 0.01;
        let window = 61;
        let s = sampled(|t| (w1 * t).cos() + (w2 * t).cos(), dt, 4000);
        let env = envelope(&s, window).unwrap();
        let dw = w2 - w1;
        for j in 0..4 {
            let node = (PI / 2.0 + j as f64 * PI) * 2.0 / dw;
            let lo = node - PI / dw;
            let hi = node + PI / dw;
            let (t_min, _) = env.iter().filter(|(t, _)| *t > lo && *t < hi).fold(
                (f64::NAN, f64::INFINITY),
                |acc, &(t, a)| if a < acc.1 { (t, a) } else { acc },
            );
            assert!(
                (t_min - node).abs() <= window as f64 * dt,
                "node {node}, found {t_min}"
            );
        }
    }

    #[test]
    fn envelope_rejects_short_series() {
        let s = sampled(|t| t, 1.0, 20);
        assert!(matches!(
            envelope(&s, 7),
            Err(Error::SeriesTooShort {
                needed: 21,
                got: 20
            })
        ));
        assert!(envelope(&s, 1).is_err());
    }

    /// Gaussian-collapsing carrier that revives at `t_rev`.
    fn collapse_revival_signal(t: f64, t_rev: f64) -> f64 {
        let width: f64 = 0.6;
        let bump = |c: f64| (-(t - c).powi(2) / (2.0 * width * width)).exp();
        (bump(0.0) + bump(t_rev) + bump(2.0 * t_rev)) * (25.0 * t).cos()
    }

    #[test]
    fn synthetic_collapse_and_revival() {
        let s = sampled(|t| collapse_revival_signal(t, 10.0), 0.01, 3000);
        let params = DetectorParams {
            window: 51,
            ..DetectorParams::default()
        };
        let report = collapse_revival_time(&s, 8, &params);
        assert!(report.detected, "{:?}", report.reason);
        let t_cr = report.t_cr.unwrap();
        assert!((t_cr - 10.0).abs() < 0.1, "t_cr = {t_cr}");
        assert!(report.collapse_time.unwrap() < t_cr);
        assert!((report.t_cr_rescaled.unwrap() - t_cr).abs() < 1e-12);
    }

    #[test]
    fn constant_series_not_detected() {
        let s = sampled(|_| 1.0, 0.01, 1000);
        let report = collapse_revival_time(&s, 10, &DetectorParams::default());
        assert!(!report.detected);
        assert_eq!(report.t_cr, None);
        assert_eq!(report.reason, Some(NotDetected::NoInitialAmplitude));
    }

    #[test]
    fn undamped_series_has_no_collapse() {
        let s = sampled(|t| (3.0 * t).cos(), 0.01, 3000);
        let report = collapse_revival_time(&s, 10, &DetectorParams::default());
        assert_eq!(report.reason, Some(NotDetected::NoCollapse));
    }

    #[test]
    fn decay_without_revival() {
        let s = sampled(|t| (-t).exp() * (25.0 * t).cos(), 0.01, 3000);
        let params = DetectorParams {
            window: 51,
            ..DetectorParams::default()
        };
        let report = collapse_revival_time(&s, 10, &params);
        assert_eq!(report.reason, Some(NotDetected::NoRevival));
        assert!(report.collapse_time.is_some());
        assert_eq!(report.t_cr, None);
    }

    #[test]
    fn short_series_not_detected() {
        let s = sampled(|t| t.cos(), 0.1, 10);
        assert_eq!(
            collapse_revival_time(&s, 1, &DetectorParams::default()).reason,
            Some(NotDetected::SeriesTooShort)
        );
    }

    proptest! {
        #[test]
        fn detector_ignores_positive_scaling(scale in 1e-3f64..1e3, t_rev in 6.0f64..12.0) {
            let params = DetectorParams { window: 51, ..DetectorParams::default() };
            let s = sampled(|t| collapse_revival_signal(t, t_rev), 0.01, 3000);
            let scaled: Vec<_> = s.iter().map(|&(t, v)| (t, scale * v)).collect();
            let a = collapse_revival_time(&s, 4, &params);
            let b = collapse_revival_time(&scaled, 4, &params);
            prop_assert_eq!(a.detected, b.detected);
            prop_assert_eq!(a.t_cr, b.t_cr);
            prop_assert_eq!(a.collapse_time, b.collapse_time);
        }
    }

    #[test]
    fn trapezoid_average() {
        let s = sampled(|t| t, 0.5, 5);
        assert!((time_averaged_imbalance(&s) - 1.0).abs() < 1e-15);
        assert_eq!(time_averaged_imbalance(&[(0.0, 0.25)]), 0.25);
        let c = sampled(|t| (2.0 * PI * t).cos(), 0.001, 2001);
        assert!(time_averaged_imbalance(&c).abs() < 1e-6);
    }

    #[test]
    fn bias_dominance() {
        let zero_bias = CouplingConfig::new(10, 1.0, 0.0, 1.0).unwrap();
        assert!(!delta_mu_dominance(&zero_bias, &fock(7, 3)));
        let no_interaction = CouplingConfig::new(10, 0.0, 0.3, 1.0).unwrap();
        assert!(delta_mu_dominance(&no_interaction, &fock(7, 3)));
        // 1 > 0.05 * 20 is false: the inequality is strict.
        let edge = CouplingConfig::new(100, 0.1, 1.0, 1.0).unwrap();
        assert!(!delta_mu_dominance(&edge, &fock(60, 40)));
        assert!(delta_mu_dominance(&edge, &maximally_entangled(100)));
    }
}
