//! Spectral decomposition of the Hamiltonian and time evolution
//!
//! ```text
//! |psi(t)> = sum_n a_n exp(-i lambda_n t) |psi_n>,   a_n = <psi_n|phi>
//! ```

use num_complex::Complex64;

use crate::eigen::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::model::TridiagonalHamiltonian;

/// Amplitudes `c_n` on the Fock basis `|N - n, n>`, `n = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    coefficients: Vec<Complex64>,
}

impl StateVector {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidState(
                "a state needs at least one coefficient".into(),
            ));
        }
        if coefficients
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        Ok(Self { coefficients })
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn n_total(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Occupation probabilities `|c_n|^2`.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.coefficients.iter().map(|c| c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.probabilities().sum::<f64>().sqrt()
    }

    /// Returns a copy scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            coefficients: self.coefficients.iter().map(|c| c / norm).collect(),
        })
    }

    /// Basis order reversed: amplitude on `|m, n>` moves to `|n, m>`.
    pub fn mirrored(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().rev().copied().collect(),
        }
    }

    /// `c_n -> (-1)^n c_n`, the image of `a2 -> -a2`.
    pub fn parity_twisted(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c } else { -c })
            .collect();
        Self { coefficients }
    }

    /// Largest coefficient-wise distance between two states.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major; column `n` is `|psi_n>`.
    eigenvectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, n: usize) -> &[f64] {
        let dim = self.dim();
        &self.eigenvectors[n * dim..(n + 1) * dim]
    }

    pub fn eigenvectors(&self) -> impl Iterator<Item = &[f64]> {
        self.eigenvectors.chunks_exact(self.dim())
    }

    /// `max |<psi_i|psi_j> - delta_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            let vi = self.eigenvector(i);
            for j in i..dim {
                let dot: f64 = vi.iter().zip(self.eigenvector(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Euclidean residual `||H psi_n - lambda_n psi_n||` for every pair.
    pub fn residuals(&self, h: &TridiagonalHamiltonian) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors())
            .map(|(&lambda, v)| {
                h.apply(v)
                    .iter()
                    .zip(v)
                    .map(|(hv, x)| (hv - lambda * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}

/// Diagonalizes `h`.
///
/// Eigenvalues come back ascending. Each eigenvector is signed so that its
/// entry of largest magnitude (lowest index on ties) is positive.
///
/// Mirror-symmetric bands (`d_n = d_{N-n}`, `e_n = e_{N-1-n}`, which holds
/// whenever the bias vanishes) are split into the even and odd sectors of
/// the mode exchange and each half is solved separately. The eigenvectors
/// are then exactly (anti)symmetric, even inside the nearly degenerate
/// doublets of the strongly interacting regime where a joint solve would
/// return arbitrary mixtures.
pub fn eigendecompose(h: &TridiagonalHamiltonian) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    let (values, vectors) = if dim > 1 && is_mirror_symmetric(h) {
        parity_resolved_eigen(h)?
    } else {
        tridiagonal_eigen(h.diagonal(), h.offdiagonal())?
    };

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = Vec::with_capacity(dim * dim);
    for &j in &order {
        eigenvalues.push(values[j]);
        let column = &vectors[j * dim..(j + 1) * dim];
        let mut pivot = 0;
        for (i, x) in column.iter().enumerate() {
            if x.abs() > column[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if column[pivot] < 0.0 { -1.0 } else { 1.0 };
        eigenvectors.extend(column.iter().map(|x| sign * x));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn is_mirror_symmetric(h: &TridiagonalHamiltonian) -> bool {
    let d = h.diagonal();
    let e = h.offdiagonal();
    d.iter().eq(d.iter().rev()) && e.iter().eq(e.iter().rev())
}

/// Solves the even and odd sectors of a mirror-symmetric tridiagonal
/// matrix and maps the sector eigenvectors back to the full basis.
///
/// With `half = dim / 2` pairs `(n, N - n)` and, for odd `dim`, a middle
/// state `m = half`:
/// * even `dim`: both sectors have size `half`; the pair `(half - 1, half)`
///   is coupled directly, adding `+e` (even) or `-e` (odd) to the last
///   diagonal entry.
/// * odd `dim`: the even sector has size `half + 1`, with the middle state
///   coupled to the last pair by `sqrt(2) e`; the odd sector has size `half`
///   and no middle state.
fn parity_resolved_eigen(h: &TridiagonalHamiltonian) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = h.diagonal();
    let e = h.offdiagonal();
    let dim = d.len();
    let half = dim / 2;

    let mut even_d = d[..half].to_vec();
    let mut even_e = e[..half - 1].to_vec();
    let mut odd_d = d[..half].to_vec();
    let odd_e = e[..half - 1].to_vec();
    if dim % 2 == 0 {
        even_d[half - 1] += e[half - 1];
        odd_d[half - 1] -= e[half - 1];
    } else {
        even_d.push(d[half]);
        even_e.push(std::f64::consts::SQRT_2 * e[half - 1]);
    }

    let (even_vals, even_vecs) = tridiagonal_eigen(&even_d, &even_e)?;
    let (odd_vals, odd_vecs) = tridiagonal_eigen(&odd_d, &odd_e)?;

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut values = Vec::with_capacity(dim);
    let mut vectors = vec![0.0; dim * dim];
    let mut columns = vectors.chunks_exact_mut(dim);

    let even_size = even_d.len();
    for (j, &lambda) in even_vals.iter().enumerate() {
        let u = &even_vecs[j * even_size..(j + 1) * even_size];
        let v = columns.next().expect("one column per eigenvalue");
        for n in 0..half {
            v[n] = r * u[n];
            v[dim - 1 - n] = r * u[n];
        }
        if dim % 2 == 1 {
            v[half] = u[half];
        }
        values.push(lambda);
    }
    for (j, &lambda) in odd_vals.iter().enumerate() {
        let u = &odd_vecs[j * half..(j + 1) * half];
        let v = columns.next().expect("one column per eigenvalue");
        for n in 0..half {
            v[n] = r * u[n];
            v[dim - 1 - n] = -r * u[n];
        }
        values.push(lambda);
    }
    Ok((values, vectors))
}

/// Spectral propagator bound to one initial state.
///
/// Holds the overlaps `a_n = <psi_n|phi>` so that evaluating the state at
/// many times costs one `O(dim^2)` pass per time.
#[derive(Clone, Debug)]
pub struct Propagator<'a> {
    decomp: &'a SpectralDecomposition,
    overlaps: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    pub fn new(decomp: &'a SpectralDecomposition, initial: &StateVector) -> Result<Self> {
        if initial.dim() != decomp.dim() {
            return Err(Error::DimensionMismatch {
                expected: decomp.dim(),
                got: initial.dim(),
            });
        }
        let overlaps = decomp
            .eigenvectors()
            .map(|v| {
                v.iter()
                    .zip(initial.coefficients())
                    .map(|(&x, &c)| c * x)
                    .sum()
            })
            .collect();
        Ok(Self { decomp, overlaps })
    }

    pub fn overlaps(&self) -> &[Complex64] {
        &self.overlaps
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        let dim = self.decomp.dim();
        let mut coefficients = vec![Complex64::new(0.0, 0.0); dim];
        for ((a, &lambda), v) in self
            .overlaps
            .iter()
            .zip(self.decomp.eigenvalues())
            .zip(self.decomp.eigenvectors())
        {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (sin, cos) = (lambda * t).sin_cos();
            let b = a * Complex64::new(cos, -sin);
            for (c, &x) in coefficients.iter_mut().zip(v) {
                c.re += b.re * x;
                c.im += b.im * x;
            }
        }
        StateVector { coefficients }
    }
}

/// State at time `t` evolved from `initial`.
pub fn evolve(
    decomp: &SpectralDecomposition,
    initial: &StateVector,
    t: f64,
) -> Result<StateVector> {
    Ok(Propagator::new(decomp, initial)?.state_at(t))
}

/// States at every time of `t_grid`, sharing one set of overlaps.
pub fn evolve_series(
    decomp: &SpectralDecomposition,
    initial: &StateVector,
    t_grid: &[f64],
) -> Result<Vec<StateVector>> {
    if let Some(bad) = t_grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidScenario(format!("time grid contains {bad}")));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidScenario(
            "time grid must be nondecreasing".into(),
        ));
    }
    let propagator = Propagator::new(decomp, initial)?;
    Ok(t_grid.iter().map(|&t| propagator.state_at(t)).collect())
}
