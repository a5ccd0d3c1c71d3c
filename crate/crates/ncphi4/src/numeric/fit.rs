//! Three-column linear least squares with column equilibration and one step
//! of iterative refinement. Backs the divergence-structure fits, whose basis
//! {Lambda^2, ln Lambda, 1} spans many orders of magnitude across the cutoff
//! window.

use crate::error::{Error, Result};

/// Solve `min ||A c - y||_2` for a tall 3-column design matrix given as
/// per-column slices.
pub(crate) fn least_squares_3(cols: [&[f64]; 3], y: &[f64]) -> Result<[f64; 3]> {
    let n = y.len();
    debug_assert!(cols.iter().all(|c| c.len() == n));

    // column equilibration
    let mut scale = [0.0f64; 3];
    for (j, col) in cols.iter().enumerate() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::SingularFit);
        }
        scale[j] = norm;
    }

    let gram = |ja: usize, jb: usize| -> f64 {
        cols[ja]
            .iter()
            .zip(cols[jb])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / (scale[ja] * scale[jb])
    };
    let mut g = [[0.0f64; 3]; 3];
    for ja in 0..3 {
        for jb in 0..3 {
            g[ja][jb] = gram(ja, jb);
        }
    }
    let rhs_of = |res: &[f64]| -> [f64; 3] {
        let mut out = [0.0f64; 3];
        for (j, col) in cols.iter().enumerate() {
            out[j] = col.iter().zip(res).map(|(a, r)| a * r).sum::<f64>() / scale[j];
        }
        out
    };

    let mut c_scaled = solve_3x3(g, rhs_of(y))?;

    // one refinement pass on the original (unscaled) residual
    let residual: Vec<f64> = (0..n)
        .map(|i| {
            y[i] - (0..3)
                .map(|j| cols[j][i] / scale[j] * c_scaled[j])
                .sum::<f64>()
        })
        .collect();
    let delta = solve_3x3(g, rhs_of(&residual))?;
    for j in 0..3 {
        c_scaled[j] += delta[j];
    }

    Ok([
        c_scaled[0] / scale[0],
        c_scaled[1] / scale[1],
        c_scaled[2] / scale[2],
    ])
}

/// Gaussian elimination with partial pivoting.
fn solve_3x3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Result<[f64; 3]> {
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-14 {
            return Err(Error::SingularFit);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_combination() {
        let lambdas: Vec<f64> = (0..9)
            .map(|i| 100.0 * (10_000.0f64 / 100.0).powf(i as f64 / 8.0))
            .collect();
        let c1: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
        let c2: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
        let c3: Vec<f64> = vec![1.0; lambdas.len()];
        let y: Vec<f64> = (0..lambdas.len())
            .map(|i| 3.5 * c1[i] - 2.0 * c2[i] + 0.25 * c3[i])
            .collect();
        let c = least_squares_3([&c1, &c2, &c3], &y).unwrap();
        assert!((c[0] - 3.5).abs() < 1e-10, "c_quad {}", c[0]);
        assert!((c[1] + 2.0).abs() < 1e-8, "c_log {}", c[1]);
        assert!((c[2] - 0.25).abs() < 1e-8, "c_const {}", c[2]);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let ones = vec![1.0; 8];
        let y = vec![2.0; 8];
        let err = least_squares_3([&ones, &ones, &ones], &y).unwrap_err();
        assert!(matches!(err, Error::SingularFit));
    }
}
