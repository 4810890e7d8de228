//! Shared test helpers. The dense matrix exponential here is independent
//! of the library's eigensolver and serves as the evolution oracle.

#![allow(dead_code)]

use dimer::observables::{record, ObservableRecord};
use dimer::{build_hamiltonian, eigendecompose, CouplingConfig, Propagator, StateVector};
use num_complex::Complex64;
use rand::Rng;

pub type Dense = Vec<Vec<Complex64>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn norm1(a: &Dense) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a degree-24 Taylor polynomial on
/// `A / 2^s`, `||A / 2^s||_1 <= 1/2`.
pub fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let norm = norm1(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(s);
    let b: Dense = a
        .iter()
        .map(|row| row.iter().map(|x| x * scale).collect())
        .collect();

    let mut result = identity(n);
    let mut term = identity(n);
    for p in 1..=24 {
        term = matmul(&term, &b);
        let inv = 1.0 / p as f64;
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x *= inv;
            }
        }
        for (r, t) in result.iter_mut().zip(&term) {
            for (x, y) in r.iter_mut().zip(t) {
                *x += y;
            }
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

/// `exp(-i H t) phi` with the dense oracle.
pub fn oracle_evolve(config: &CouplingConfig, phi: &StateVector, t: f64) -> Vec<Complex64> {
    let h = build_hamiltonian(config).unwrap().to_dense();
    let a: Dense = h
        .iter()
        .map(|row| row.iter().map(|&x| Complex64::new(0.0, -x * t)).collect())
        .collect();
    let u = expm(&a);
    u.iter()
        .map(|row| row.iter().zip(phi.coefficients()).map(|(x, c)| x * c).sum())
        .collect()
}

pub fn random_state<R: Rng>(rng: &mut R, n_total: usize) -> StateVector {
    let c: Vec<Complex64> = (0..=n_total)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(c).unwrap().normalized().unwrap()
}

pub fn random_config<R: Rng>(rng: &mut R, n_total: usize) -> CouplingConfig {
    CouplingConfig::new(
        n_total,
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-2.0..2.0),
    )
    .unwrap()
}

/// Observables along `grid` for an arbitrary initial state.
pub fn trajectory(
    config: &CouplingConfig,
    initial: &StateVector,
    grid: &[f64],
) -> Vec<ObservableRecord> {
    let h = build_hamiltonian(config).unwrap();
    let decomp = eigendecompose(&h).unwrap();
    let prop = Propagator::new(&decomp, initial).unwrap();
    grid.iter()
        .map(|&t| record(&prop.state_at(t), t, &h))
        .collect()
}

pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|j| t_max * j as f64 / (steps - 1) as f64)
        .collect()
}
