//! Symmetric tridiagonal eigensolver.
//!
//! Implicit QL with Wilkinson shifts, accumulating the rotations into the
//! eigenvector matrix (the `tql2` scheme of Bowdler, Martin, Reinsch and
//! Wilkinson). Cost is O(n^2) for the eigenvalues and O(n^3) with vectors.

use crate::error::{Error, Result};

/// Sweep cap per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 50;

/// Full eigendecomposition of a symmetric tridiagonal matrix.
///
/// Returns eigenvalues in the order QL deflates them (unsorted) together
/// with column-major eigenvectors: column `j` occupies
/// `vectors[j * n..(j + 1) * n]`.
pub fn tridiagonal_eigen(diagonal: &[f64], offdiagonal: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diagonal.len();
    if offdiagonal.len() + 1 != n.max(1) {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            got: offdiagonal.len(),
        });
    }
    let mut d = diagonal.to_vec();
    let mut e = offdiagonal.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l,
                    max_iter: MAX_QL_ITERATIONS,
                });
            }

            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (left, right) = z.split_at_mut((i + 1) * n);
                let zi = &mut left[i * n..];
                let zj = &mut right[..n];
                for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}
