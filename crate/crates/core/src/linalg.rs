//! Small dense helpers shared by the model modules.

use nalgebra::{Const, DMatrix, DimMin, SMatrix};

use crate::error::{Error, Result};

/// Systems with a larger 2-norm condition number are reported as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// 2-norm condition number from the singular values.
pub fn condition_number<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let sv = DMatrix::from_column_slice(N, N, m.as_slice()).singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `m x = rhs` for a small square system, rejecting near-singular matrices.
pub fn solve<const N: usize, const K: usize>(
    what: &'static str,
    m: &SMatrix<f64, N, N>,
    rhs: &SMatrix<f64, N, K>,
) -> Result<SMatrix<f64, N, K>>
where
    Const<N>: DimMin<Const<N>, Output = Const<N>>,
{
    let condition = condition_number(m);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { what, condition });
    }
    m.lu().solve(rhs).ok_or(Error::Singular { what, condition })
}

/// Skew-symmetric part `(m - mᵀ)/2`.
pub fn skew_part<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m - m.transpose()) * 0.5
}

/// Symmetric part `(m + mᵀ)/2`.
pub fn sym_part<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m + m.transpose()) * 0.5
}

/// Slope of the least-squares line through `(ln x, ln y)`.
///
/// Used for convergence-order checks; all inputs must be positive.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
