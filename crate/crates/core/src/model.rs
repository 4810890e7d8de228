//! Physical configuration of the dimer and its Hamiltonian
//!
//! ```text
//! H = (k/8)(N1 - N2)^2 - (dmu/2)(N1 - N2) - (E_J/2)(a1+ a2 + a2+ a1)
//! ```
//!
//! restricted to the sector of fixed total number `N`. Basis state `n`
//! is `|N - n, n>`, i.e. `n` counts bosons in mode 2, so index 0 is all
//! particles in mode 1. In this basis the Hamiltonian is real symmetric
//! tridiagonal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the dimer (units with hbar = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    /// Total boson number N.
    pub n_total: usize,
    /// Scattering strength.
    pub k: f64,
    /// External potential (bias) between the two modes.
    pub delta_mu: f64,
    /// Josephson tunneling strength.
    pub e_j: f64,
}

impl CouplingConfig {
    pub fn new(n_total: usize, k: f64, delta_mu: f64, e_j: f64) -> Result<Self> {
        let cfg = Self {
            n_total,
            k,
            delta_mu,
            e_j,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("k", self.k),
            ("delta_mu", self.delta_mu),
            ("e_j", self.e_j),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoupling { name, value });
            }
        }
        Ok(())
    }

    /// Hilbert-space dimension `N + 1`.
    pub fn dim(&self) -> usize {
        self.n_total + 1
    }

    /// Same configuration with the tunneling sign reversed.
    pub fn with_flipped_tunneling(&self) -> Self {
        Self {
            e_j: -self.e_j,
            ..*self
        }
    }
}

/// Real symmetric tridiagonal matrix.
///
/// `offdiagonal[n]` couples basis index `n` to `n + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalHamiltonian {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

impl TridiagonalHamiltonian {
    /// Builds a tridiagonal matrix from its bands. `offdiagonal` must be
    /// exactly one shorter than `diagonal`.
    pub fn from_bands(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::DimensionMismatch {
                expected: diagonal.len() - 1,
                got: offdiagonal.len(),
            });
        }
        Ok(Self {
            diagonal,
            offdiagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    /// Dense row-major copy, for checks and small-matrix oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[i][i] = d;
        }
        for (i, &e) in self.offdiagonal.iter().enumerate() {
            m[i][i + 1] = e;
            m[i + 1][i] = e;
        }
        m
    }

    /// `y = H x` for a real vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match matrix dimension");
        let mut y: Vec<f64> = self.diagonal.iter().zip(x).map(|(d, v)| d * v).collect();
        for (i, &e) in self.offdiagonal.iter().enumerate() {
            y[i] += e * x[i + 1];
            y[i + 1] += e * x[i];
        }
        y
    }

    /// Largest absolute row sum; bounds the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiagonal[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.offdiagonal[i].abs()
                } else {
                    0.0
                };
                self.diagonal[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }
}

/// Matrix of the dimer Hamiltonian in the fixed-N Fock basis.
pub fn build_hamiltonian(config: &CouplingConfig) -> Result<TridiagonalHamiltonian> {
    config.validate()?;
    let n_total = config.n_total;
    let diagonal = imbalance_diagonal(n_total)
        .into_iter()
        .map(|d| config.k / 8.0 * d * d - config.delta_mu / 2.0 * d)
        .collect();
    // a1+ a2 |N-n, n> = sqrt((N-n+1) n) |N-n+1, n-1>, so the element
    // between n and n+1 is sqrt((n+1)(N-n)).
    let offdiagonal = (0..n_total)
        .map(|n| {
            let amp = (((n + 1) * (n_total - n)) as f64).sqrt();
            -config.e_j / 2.0 * amp
        })
        .collect();
    Ok(TridiagonalHamiltonian {
        diagonal,
        offdiagonal,
    })
}

/// Diagonal of `N1 - N2` in the Fock basis: `N, N-2, ..., -N`.
pub fn imbalance_diagonal(n_total: usize) -> Vec<f64> {
    (0..=n_total)
        .map(|n| n_total as f64 - 2.0 * n as f64)
        .collect()
}
