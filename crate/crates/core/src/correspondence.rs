//! Correspondence analysis of a form × part contingency table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexstats::ContingencyTable;
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaResult<S> {
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub row_masses: Vec<S>,
    pub column_masses: Vec<S>,
    /// `χ²/N`.
    pub total_inertia: S,
    /// Singular values of the standardized residuals, descending.
    pub singular_values: Vec<S>,
    /// `λ_k = σ_k²`.
    pub principal_inertias: Vec<S>,
    /// Share of total inertia per retained dimension, in percent.
    pub inertia_pct: Vec<S>,
    /// Row principal coordinates, `rows × dims`.
    pub row_coords: Matrix<S>,
    /// Column principal coordinates, `cols × dims`.
    pub column_coords: Matrix<S>,
}

impl<S: Scalar> CaResult<S> {
    pub fn dims(&self) -> usize {
        self.singular_values.len()
    }
}

fn drop_threshold<S: Scalar>() -> S {
    S::lit(1e-12).max(S::lit(64.0) * S::epsilon())
}

/// Fits correspondence analysis on integer counts.
pub fn ca_fit<S: Scalar>(table: &ContingencyTable) -> Result<CaResult<S>> {
    let counts = Matrix::from_fn(table.rows.len(), table.columns.len(), |i, j| {
        S::from_count(table.counts[i][j])
    });
    ca_fit_matrix(&counts, table.rows.clone(), table.columns.clone())
}

/// Fits correspondence analysis on a nonnegative matrix.
///
/// Residuals `(P_ij − r_i c_j)/√(r_i c_j)` are decomposed by SVD; dimensions
/// whose singular value is negligible (below `1e-12·max(σ_max, 1)`) are
/// dropped. Each dimension is oriented so that its largest-magnitude column
/// coordinate is positive.
pub fn ca_fit_matrix<S: Scalar>(
    counts: &Matrix<S>,
    row_labels: Vec<String>,
    column_labels: Vec<String>,
) -> Result<CaResult<S>> {
    let (m, n) = (counts.rows(), counts.cols());
    if m < 2 || n < 2 {
        return Err(Error::DegenerateTable(format!("{m}x{n} table, need at least 2x2")));
    }
    if row_labels.len() != m || column_labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: row_labels.len(),
        });
    }
    let mut row_sums = vec![S::zero(); m];
    let mut col_sums = vec![S::zero(); n];
    for i in 0..m {
        for j in 0..n {
            let x = counts[(i, j)];
            if x < S::zero() || !x.is_finite() {
                return Err(Error::DegenerateTable(format!("invalid cell ({i}, {j})")));
            }
            row_sums[i] = row_sums[i] + x;
            col_sums[j] = col_sums[j] + x;
        }
    }
    if let Some(i) = row_sums.iter().position(|&s| s == S::zero()) {
        return Err(Error::DegenerateTable(format!("row `{}` is all zero", row_labels[i])));
    }
    if let Some(j) = col_sums.iter().position(|&s| s == S::zero()) {
        return Err(Error::DegenerateTable(format!(
            "column `{}` is all zero",
            column_labels[j]
        )));
    }
    let grand: S = row_sums.iter().copied().fold(S::zero(), |a, b| a + b);
    let r: Vec<S> = row_sums.iter().map(|&s| s / grand).collect();
    let c: Vec<S> = col_sums.iter().map(|&s| s / grand).collect();

    let residuals = Matrix::from_fn(m, n, |i, j| {
        let expected = r[i] * c[j];
        (counts[(i, j)] / grand - expected) / expected.sqrt()
    });
    let total_inertia = residuals.frobenius_sq();

    let dec = svd(&residuals)?;
    let sigma_max = dec.singular_values.first().copied().unwrap_or(S::zero());
    let cutoff = drop_threshold::<S>() * sigma_max.max(S::one());
    let max_dims = m.min(n) - 1;
    let keep = dec
        .singular_values
        .iter()
        .take(max_dims)
        .take_while(|&&s| s > cutoff)
        .count();

    // The squared singular values sum to the total inertia in exact
    // arithmetic; rescaling removes the rounding left by the rotations.
    let sum_sq = dec.singular_values.iter().fold(S::zero(), |a, &b| a + b * b);
    let scale = if sum_sq > S::zero() {
        total_inertia / sum_sq
    } else {
        S::one()
    };
    let principal_inertias: Vec<S> = dec.singular_values[..keep].iter().map(|&s| s * s * scale).collect();
    let singular_values: Vec<S> = principal_inertias.iter().map(|l| l.sqrt()).collect();

    let mut row_coords = Matrix::zeros(m, keep);
    let mut column_coords = Matrix::zeros(n, keep);
    for k in 0..keep {
        let sigma = singular_values[k];
        for i in 0..m {
            row_coords[(i, k)] = sigma * dec.u[(i, k)] / r[i].sqrt();
        }
        for j in 0..n {
            column_coords[(j, k)] = sigma * dec.v[(j, k)] / c[j].sqrt();
        }
        let mut pivot = 0;
        for j in 1..n {
            if column_coords[(j, k)].abs() > column_coords[(pivot, k)].abs() {
                pivot = j;
            }
        }
        if column_coords[(pivot, k)] < S::zero() {
            for i in 0..m {
                row_coords[(i, k)] = -row_coords[(i, k)];
            }
            for j in 0..n {
                column_coords[(j, k)] = -column_coords[(j, k)];
            }
        }
    }

    let retained: S = principal_inertias.iter().copied().fold(S::zero(), |a, b| a + b);
    let inertia_pct = principal_inertias
        .iter()
        .map(|&l| S::lit(100.0) * l / retained)
        .collect();

    Ok(CaResult {
        row_labels,
        column_labels,
        row_masses: r,
        column_masses: c,
        total_inertia,
        singular_values,
        principal_inertias,
        inertia_pct,
        row_coords,
        column_coords,
    })
}

fn check_profile<S: Scalar>(profile: &[S], expected: usize) -> Result<()> {
    if profile.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: profile.len(),
        });
    }
    let sum: S = profile.iter().copied().fold(S::zero(), |a, b| a + b);
    let tol = S::lit(1e-9).max(S::lit(1e3) * S::epsilon());
    if (sum - S::one()).abs() > tol {
        return Err(Error::InvalidArgument(format!("profile sums to {sum}, expected 1")));
    }
    Ok(())
}

/// Places a supplementary column, given as a profile over the rows, by the
/// transition formula `g_k = (1/σ_k) Σ_i profile_i · f_ik`.
pub fn ca_project_supplementary<S: Scalar>(result: &CaResult<S>, column_profile: &[S]) -> Result<Vec<S>> {
    check_profile(column_profile, result.row_labels.len())?;
    Ok(transition(&result.row_coords, &result.singular_values, column_profile))
}

/// Places a supplementary row, given as a profile over the columns.
pub fn ca_project_supplementary_row<S: Scalar>(result: &CaResult<S>, row_profile: &[S]) -> Result<Vec<S>> {
    check_profile(row_profile, result.column_labels.len())?;
    Ok(transition(&result.column_coords, &result.singular_values, row_profile))
}

fn transition<S: Scalar>(coords: &Matrix<S>, sigma: &[S], profile: &[S]) -> Vec<S> {
    (0..sigma.len())
        .map(|k| {
            let s: S = profile
                .iter()
                .enumerate()
                .map(|(i, &p)| p * coords[(i, k)])
                .fold(S::zero(), |a, b| a + b);
            s / sigma[k]
        })
        .collect()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn table(counts: Vec<Vec<u64>>) -> ContingencyTable {
        ContingencyTable {
            rows: (0..counts.len()).map(|i| format!("r{i}")).collect(),
            columns: (0..counts[0].len()).map(|j| format!("c{j}")).collect(),
            counts,
        }
    }

    #[test]
    fn independence_has_no_dimension() {
        let ca: CaResult<f64> = ca_fit(&table(vec![vec![5, 5], vec![5, 5]])).unwrap();
        assert_eq!(ca.total_inertia, 0.0);
        assert_eq!(ca.dims(), 0);
    }

    #[test]
    fn diagonal_two_by_two() {
        let ca: CaResult<f64> = ca_fit(&table(vec![vec![10, 0], vec![0, 10]])).unwrap();
        assert_eq!(ca.dims(), 1);
        assert_eq!(ca.principal_inertias, vec![1.0]);
        assert_eq!(ca.inertia_pct, vec![100.0]);
        assert_eq!(ca.total_inertia, 1.0);
        let rows = [ca.row_coords[(0, 0)], ca.row_coords[(1, 0)]];
        assert!((rows[0].abs() - 1.0).abs() < 1e-12 && (rows[0] + rows[1]).abs() < 1e-12);
    }

    #[test]
    fn degenerate_tables() {
        assert!(matches!(
            ca_fit::<f64>(&table(vec![vec![1, 2], vec![0, 0]])),
            Err(Error::DegenerateTable(_))
        ));
        assert!(matches!(
            ca_fit::<f64>(&table(vec![vec![1, 0], vec![2, 0]])),
            Err(Error::DegenerateTable(_))
        ));
        assert!(matches!(
            ca_fit::<f64>(&table(vec![vec![1, 2]])),
            Err(Error::DegenerateTable(_))
        ));
    }

    #[test]
    fn supplementary_projection() {
        let t = table(vec![vec![12, 3, 5], vec![2, 9, 4], vec![6, 6, 1], vec![1, 2, 10]]);
        let ca: CaResult<f64> = ca_fit(&t).unwrap();
        assert_eq!(ca.dims(), 2);

        let at_origin = ca_project_supplementary(&ca, &ca.row_masses).unwrap();
        assert!(at_origin.iter().all(|x| x.abs() < 1e-12));

        let n = t.grand_total() as f64;
        for j in 0..3 {
            let col_total: f64 = t.counts.iter().map(|r| r[j] as f64).sum();
            let profile: Vec<f64> = t.counts.iter().map(|r| r[j] as f64 / col_total).collect();
            let g = ca_project_supplementary(&ca, &profile).unwrap();
            for k in 0..ca.dims() {
                assert!((g[k] - ca.column_coords[(j, k)]).abs() < 1e-10);
            }
            assert!((col_total / n - ca.column_masses[j]).abs() < 1e-15);
        }

        let mut one_hot = vec![0.0; 4];
        one_hot[2] = 1.0;
        let g = ca_project_supplementary(&ca, &one_hot).unwrap();
        for k in 0..ca.dims() {
            assert!((g[k] - ca.row_coords[(2, k)] / ca.singular_values[k]).abs() < 1e-12);
        }

        assert!(matches!(
            ca_project_supplementary(&ca, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ca_project_supplementary(&ca, &[0.5, 0.1, 0.1, 0.1]).is_err());
    }

    #[test]
    fn largest_column_coordinate_is_positive() {
        let t = table(vec![vec![12, 3, 5], vec![2, 9, 4], vec![6, 6, 1], vec![1, 2, 10]]);
        let ca: CaResult<f64> = ca_fit(&t).unwrap();
        for k in 0..ca.dims() {
            let col = ca.column_coords.column(k);
            let pivot = col
                .iter()
                .copied()
                .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            assert!(pivot > 0.0);
        }
    }

    #[test]
    fn f32_fit() {
        let ca: CaResult<f32> = ca_fit(&table(vec![vec![10, 0], vec![0, 10]])).unwrap();
        assert_eq!(ca.dims(), 1);
        assert!((ca.principal_inertias[0] - 1.0).abs() < 1e-5);
    }
}
