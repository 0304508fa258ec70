//! Spectra of quaternion Hermitian matrices through the complex embedding.
//!
//! The 2p×2p embedding of a p×p quaternion Hermitian matrix has every
//! eigenvalue with even multiplicity. Sorting the 2p values and averaging the
//! consecutive pairs `(2i, 2i+1)` gives the p quaternion eigenvalues.

mod cmatrix;
mod eigh;

pub use cmatrix::CMatrix;
pub use eigh::{eigh, eigvalsh, tql_implicit, Eigh, HERMITIAN_RTOL, MAX_QL_ITERATIONS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// Relative pair tolerance: `pair_tol = PAIR_RTOL · max(1, ‖A‖₂)`.
pub const PAIR_RTOL: f64 = 1e-8;

/// Negative eigenvalues down to `-PSD_SLACK · max(1, s_max)` are treated as
/// round-off of a positive semidefinite matrix.
pub const PSD_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianSpectrum {
    /// Ascending eigenvalues of the complex embedding (length 2p).
    pub values: Vec<f64>,
    /// Collapsed quaternion eigenvalues (length p), ascending.
    pub paired_values: Vec<f64>,
    /// Largest `|values[2i+1] - values[2i]|`.
    pub max_pair_gap: f64,
}

impl HermitianSpectrum {
    /// Collapses an ascending, even-length list of embedding eigenvalues.
    pub fn from_embedding_values(values: Vec<f64>) -> Result<Self> {
        if !values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "embedding spectrum must have even length, got {}",
                values.len()
            )));
        }
        let mut paired_values = Vec::with_capacity(values.len() / 2);
        let mut max_pair_gap = 0.0f64;
        for pair in values.chunks_exact(2) {
            paired_values.push(0.5 * (pair[0] + pair[1]));
            max_pair_gap = max_pair_gap.max((pair[1] - pair[0]).abs());
        }
        Ok(Self { values, paired_values, max_pair_gap })
    }

    /// Builds a spectrum directly from quaternion eigenvalues (each doubled).
    pub fn from_paired_values(paired: &[f64]) -> Self {
        let mut sorted = paired.to_vec();
        sorted.sort_by(f64::total_cmp);
        let values = sorted.iter().flat_map(|&v| [v, v]).collect();
        Self { values, paired_values: sorted, max_pair_gap: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.paired_values.len()
    }

    pub fn max(&self) -> f64 {
        self.paired_values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.paired_values.first().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue magnitude, i.e. the 2-norm of the Hermitian matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    pub fn pair_tolerance(&self) -> f64 {
        PAIR_RTOL * self.spectral_radius().max(1.0)
    }

    /// `(1/p) Σ λ^k` over the collapsed eigenvalues.
    pub fn power_mean(&self, k: u32) -> f64 {
        if self.paired_values.is_empty() {
            return 0.0;
        }
        let sum: f64 = self.paired_values.iter().map(|v| v.powi(k as i32)).sum();
        sum / self.paired_values.len() as f64
    }
}

/// Spectrum of a quaternion Hermitian matrix.
pub fn spectrum(a: &QMatrix) -> Result<HermitianSpectrum> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let values = eigvalsh(&a.embed())?;
    let spec = HermitianSpectrum::from_embedding_values(values)?;
    let tolerance = spec.pair_tolerance();
    if spec.max_pair_gap > tolerance {
        return Err(Error::PairingViolation { gap: spec.max_pair_gap, tolerance });
    }
    Ok(spec)
}

/// `(s_min, s_max)` of a p×p sample covariance built from n samples.
///
/// For `p > n` the `p - n` smallest eigenvalues are structurally zero and
/// `s_min` is the `(p - n + 1)`-th smallest.
pub fn extreme_eigs(s: &QMatrix, p: usize, n: usize) -> Result<(f64, f64)> {
    if s.rows() != p {
        return Err(Error::DimensionMismatch(format!("expected {p} rows, got {}", s.rows())));
    }
    let spec = spectrum(s)?;
    extreme_from_spectrum(&spec, n)
}

/// Same as [`extreme_eigs`] on an already computed spectrum.
pub fn extreme_from_spectrum(spec: &HermitianSpectrum, n: usize) -> Result<(f64, f64)> {
    let p = spec.dim();
    if p == 0 {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let s_max = spec.max();
    let floor = -PSD_SLACK * s_max.abs().max(1.0);
    if spec.min() < floor {
        return Err(Error::InvalidArgument(format!(
            "matrix is not positive semidefinite (smallest eigenvalue {:.3e})",
            spec.min()
        )));
    }
    let idx = p.saturating_sub(n);
    let s_min = spec.paired_values[idx];
    Ok((s_min.max(0.0), s_max.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;

    #[test]
    fn scalar_quaternion() {
        let a = QMatrix::from_vec(1, 1, vec![Quaternion::real(2.5)]).unwrap();
        let s = spectrum(&a).unwrap();
        assert_eq!(s.paired_values, vec![2.5]);
        assert_eq!(s.max_pair_gap, 0.0);
    }

    #[test]
    fn identity_spectrum() {
        let s = spectrum(&QMatrix::identity(4)).unwrap();
        assert_eq!(s.paired_values, vec![1.0; 4]);
        assert_eq!(extreme_eigs(&QMatrix::identity(4), 4, 10).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn p_le_n_uses_smallest() {
        let d = QMatrix::diagonal(&[Quaternion::real(0.5), Quaternion::real(3.0), Quaternion::real(1.0)]);
        assert_eq!(extreme_eigs(&d, 3, 5).unwrap(), (0.5, 3.0));
    }

    #[test]
    fn p_gt_n_skips_structural_zeros() {
        let d = QMatrix::diagonal(&[
            Quaternion::real(0.0),
            Quaternion::real(2.0),
            Quaternion::real(0.0),
            Quaternion::real(0.7),
        ]);
        assert_eq!(extreme_eigs(&d, 4, 2).unwrap(), (0.7, 2.0));
    }

    #[test]
    fn non_psd_rejected() {
        let d = QMatrix::diagonal(&[Quaternion::real(-1.0), Quaternion::real(2.0)]);
        assert!(extreme_eigs(&d, 2, 2).is_err());
    }

    #[test]
    fn odd_embedding_length_rejected() {
        assert!(HermitianSpectrum::from_embedding_values(vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn pairing_violation_detected_by_collapse() {
        let s = HermitianSpectrum::from_embedding_values(vec![0.0, 0.5, 1.0, 1.0]).unwrap();
        assert!(s.max_pair_gap > s.pair_tolerance());
    }
}
