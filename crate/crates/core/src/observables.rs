//! Imbalance expectation, imbalance variance and mode entanglement of a
//! pure state, plus per-time records bundling them with diagnostics.

use serde::{Deserialize, Serialize};

use crate::model::TridiagonalHamiltonian;
use crate::spectral::StateVector;

/// Probabilities below this contribute nothing to the entropy.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// `N - 2n` for basis index `n`.
#[inline]
fn imbalance_at(n_total: usize, n: usize) -> f64 {
    n_total as f64 - 2.0 * n as f64
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.compensation
    }
}

/// `(<D>, <D^2>)` with weights `p_n / sum p`, `D_n = N - 2n`.
///
/// Each weight is normalized before use, so a cat state weighs its two
/// components by exactly 1/2 and gets variance exactly `N^2`.
fn imbalance_moments(state: &StateVector) -> (f64, f64) {
    let n_total = state.n_total();
    let mut total = CompensatedSum::default();
    state.probabilities().for_each(|p| total.add(p));
    let total = total.value();
    let (mut first, mut second) = (CompensatedSum::default(), CompensatedSum::default());
    for (n, p) in state.probabilities().enumerate() {
        let w = p / total;
        let d = imbalance_at(n_total, n);
        first.add(w * d);
        second.add(w * d * d);
    }
    (first.value(), second.value())
}

/// `<N1 - N2>`.
pub fn expectation_imbalance(state: &StateVector) -> f64 {
    imbalance_moments(state).0
}

/// `<(N1 - N2)^2> - <N1 - N2>^2`, clamped at zero.
pub fn variance_imbalance(state: &StateVector) -> f64 {
    let (mean, second) = imbalance_moments(state);
    (second - mean * mean).max(0.0)
}

/// Entropy of the mode-1 reduced density matrix, in bits.
///
/// For a pure state of fixed total number the reduced matrix is diagonal
/// in the occupation basis, so this is the Shannon entropy of `|c_n|^2`.
pub fn entanglement_entropy(state: &StateVector) -> f64 {
    let s: f64 = state
        .probabilities()
        .filter(|&p| p >= PROBABILITY_FLOOR)
        .map(|p| -p * p.log2())
        .sum();
    s.max(0.0)
}

/// `<psi|H|psi>` as a tridiagonal quadratic form.
pub fn energy(state: &StateVector, h: &TridiagonalHamiltonian) -> f64 {
    let c = state.coefficients();
    let diag: f64 = h
        .diagonal()
        .iter()
        .zip(c)
        .map(|(d, c)| d * c.norm_sqr())
        .sum();
    let off: f64 = h
        .offdiagonal()
        .iter()
        .zip(c.windows(2))
        .map(|(e, w)| e * (w[0].conj() * w[1]).re)
        .sum();
    diag + 2.0 * off
}

/// Observables of one state at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub imbalance: f64,
    pub imbalance_scaled: f64,
    pub variance: f64,
    pub entanglement_bits: f64,
    pub norm_error: f64,
    pub energy: f64,
}

pub fn record(state: &StateVector, t: f64, h: &TridiagonalHamiltonian) -> ObservableRecord {
    assert_eq!(
        state.dim(),
        h.dim(),
        "state and Hamiltonian dimensions differ"
    );
    let imbalance = expectation_imbalance(state);
    let n_total = state.n_total();
    ObservableRecord {
        t,
        imbalance,
        imbalance_scaled: if n_total == 0 {
            0.0
        } else {
            imbalance / n_total as f64
        },
        variance: variance_imbalance(state),
        entanglement_bits: entanglement_entropy(state),
        norm_error: (state.norm() - 1.0).abs(),
        energy: energy(state, h),
    }
}
