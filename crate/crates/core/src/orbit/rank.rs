use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;

use super::gram::GramMatrix;

/// Relative factor of the default rank threshold `τ = 1e-8 · max(1, λ_max)`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-8;

/// Numerical rank of a positive semidefinite matrix with the spectrum it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Descending eigenvalues.
    pub eigenvalues: Vec<f64>,
    pub tolerance_used: f64,
    /// `true` when the default relative policy chose the threshold.
    pub relative: bool,
}

/// Rank of a symmetric `d × d` row-major matrix: the number of eigenvalues above the threshold.
/// `tolerance = Some(t)` uses the absolute threshold `t`.
pub fn rank_symmetric(d: usize, values: &[f64], tolerance: Option<f64>) -> Result<RankResult> {
    if values.iter().any(|x| x.is_nan()) {
        return Err(Error::NotANumber);
    }
    let eigenvalues = symmetric_eigenvalues(d, values);
    let (tolerance_used, relative) = match tolerance {
        Some(t) => (t, false),
        None => (DEFAULT_RELATIVE_TOL * eigenvalues.first().copied().unwrap_or(0.0).max(1.0), true),
    };
    let rank = eigenvalues.iter().filter(|&&x| x > tolerance_used).count();
    Ok(RankResult { rank, eigenvalues, tolerance_used, relative })
}

/// `rank_psd(G, τ)`.
pub fn rank_psd(gram: &GramMatrix, tolerance: Option<f64>) -> Result<RankResult> {
    rank_symmetric(gram.dim(), gram.values(), tolerance)
}
