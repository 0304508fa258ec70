//! Monte Carlo harness: extreme eigenvalues and spectral fit of quaternion
//! sample covariance matrices, numeric checks of the Diamond-power bounds and
//! recursions, and the divergence demos for heavy tails and nonzero means.
//!
//! Trial `t` of a run draws its data matrix from generator stream `t` of the
//! configured seed, so every record is a pure function of `(seed, config, t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp_law::MpLaw;
use crate::qmatrix::{cj_coefficients, expansion_rhs, r_family, QMatrix};
use crate::randgen::{sample_matrix, truncate_centralize, EntryDistribution, TruncationSchedule};
use crate::spectra::{extreme_from_spectrum, spectrum, HermitianSpectrum, PSD_SLACK};

/// Eigenvalues below `ZERO_RTOL · s_max` count as structural zeros.
pub const ZERO_RTOL: f64 = 1e-10;
/// Largest moment order accepted by [`moment_compare`].
pub const MAX_MOMENT_K: usize = 8;
/// Largest `l` accepted by [`diamond_bound_check`].
pub const MAX_BOUND_L: usize = 3;
/// Largest `k` accepted by [`expansion_check`].
pub const MAX_EXPANSION_K: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub p: usize,
    pub n: usize,
    pub dist: EntryDistribution,
    pub trials: usize,
    pub seed: u64,
    /// Number of trace moments recorded per trial.
    pub k_moments: usize,
}

impl TrialConfig {
    pub fn new(p: usize, n: usize, dist: EntryDistribution, trials: usize, seed: u64) -> Self {
        Self { p, n, dist, trials, seed, k_moments: 4 }
    }

    pub fn with_moments(mut self, k: usize) -> Self {
        self.k_moments = k;
        self
    }

    /// `y_n = p / n`.
    pub fn y(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    pub fn sigma2(&self) -> f64 {
        self.dist.sigma2()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 || self.n < 2 {
            return Err(Error::InvalidArgument(format!("need p, n >= 2, got p = {}, n = {}", self.p, self.n)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        if self.k_moments > MAX_MOMENT_K {
            return Err(Error::GuardExceeded(format!("k_moments = {} exceeds {MAX_MOMENT_K}", self.k_moments)));
        }
        self.dist.validate()
    }

    /// Data matrix of trial `t`.
    pub fn sample(&self, trial: usize) -> QMatrix {
        sample_matrix(&self.dist, self.p, self.n, self.seed, trial as u64)
    }

    /// Truncated and centralized data matrix of trial `t`.
    pub fn sample_truncated(&self, trial: usize) -> QMatrix {
        truncate_centralize(&self.sample(trial), self.n, &TruncationSchedule::default())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub y_n: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub ks: f64,
    /// `(1/p) tr S^k` for `k = 1..=K`.
    pub moments: Vec<f64>,
    pub zero_count: usize,
}

fn in_trial<T>(trial: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Trial { trial, source: Box::new(e) })
}

/// `S = X X* / n`.
pub fn sample_covariance(x: &QMatrix) -> QMatrix {
    x.gram().scale(1.0 / x.cols() as f64)
}

/// `max_u (1/n) Σ_v norm(x_uv)²`, the largest diagonal entry of `S`.
pub fn row_mean_statistic(x: &QMatrix) -> f64 {
    let n = x.cols() as f64;
    (0..x.rows())
        .map(|u| x.row(u).iter().map(|q| q.norm_sqr()).sum::<f64>() / n)
        .fold(0.0, f64::max)
}

/// Extreme eigenvalues, Kolmogorov distance and trace moments for every trial.
pub fn run_extremes(cfg: &TrialConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let law = MpLaw::new(cfg.y(), cfg.sigma2())?;
    (0..cfg.trials)
        .map(|t| in_trial(t, trial_record(cfg, &law, t)))
        .collect()
}

fn trial_record(cfg: &TrialConfig, law: &MpLaw, trial: usize) -> Result<TrialRecord> {
    let s = sample_covariance(&cfg.sample(trial));
    let spec = spectrum(&s)?;
    let (s_min, s_max) = extreme_from_spectrum(&spec, cfg.n)?;
    let threshold = ZERO_RTOL * s_max;
    Ok(TrialRecord {
        trial,
        y_n: cfg.y(),
        s_min,
        s_max,
        ks: ks_distance(&spec, law)?,
        moments: (1..=cfg.k_moments as u32).map(|k| spec.power_mean(k)).collect(),
        zero_count: spec.paired_values.iter().filter(|&&v| v < threshold).count(),
    })
}

/// Kolmogorov distance between the empirical distribution of the collapsed
/// eigenvalues and `law`, checked at and just below every eigenvalue.
///
/// Eigenvalues within round-off of zero are treated as exact zeros so they
/// line up with the atom of the law when `y > 1`.
pub fn ks_distance(spec: &HermitianSpectrum, law: &MpLaw) -> Result<f64> {
    let p = spec.dim();
    if p == 0 {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let floor = PSD_SLACK * spec.spectral_radius().max(1.0);
    let vals: Vec<f64> = spec
        .paired_values
        .iter()
        .map(|&v| if v.abs() <= floor { 0.0 } else { v })
        .collect();
    let pf = p as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < p {
        let x = vals[i];
        let mut j = i;
        while j + 1 < p && vals[j + 1] == x {
            j += 1;
        }
        let below = (law.cdf_left(x)? - i as f64 / pf).abs();
        let at = (law.cdf(x)? - (j + 1) as f64 / pf).abs();
        worst = worst.max(below).max(at);
        i = j + 1;
    }
    Ok(worst.min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub k: usize,
    /// Trial average of `(1/p) tr S^k`.
    pub empirical: f64,
    pub theory: f64,
    pub rel_error: f64,
}

/// Trial-averaged trace moments against the limit law at `y_n`.
pub fn moment_compare(cfg: &TrialConfig, k_max: usize) -> Result<Vec<MomentRow>> {
    if k_max > MAX_MOMENT_K {
        return Err(Error::GuardExceeded(format!("K = {k_max} exceeds {MAX_MOMENT_K}")));
    }
    let records = run_extremes(&cfg.clone().with_moments(k_max))?;
    Ok(moment_rows(&records, &MpLaw::new(cfg.y(), cfg.sigma2())?))
}

/// Moment table from already computed records.
pub fn moment_rows(records: &[TrialRecord], law: &MpLaw) -> Vec<MomentRow> {
    let k_max = records.iter().map(|r| r.moments.len()).min().unwrap_or(0);
    (1..=k_max)
        .map(|k| {
            let empirical = records.iter().map(|r| r.moments[k - 1]).sum::<f64>() / records.len() as f64;
            let theory = law.moment(k as u32);
            MomentRow { k, empirical, theory, rel_error: (empirical - theory).abs() / theory }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub trial: usize,
    pub n: usize,
    pub observed: f64,
    pub target: f64,
    /// `target - observed`.
    pub margin: f64,
}

/// `(2l+1)(l+1) y^{(l-1)/2} σ^{2l}`.
pub fn diamond_power_bound(l: usize, y: f64, sigma2: f64) -> f64 {
    let l_f = l as f64;
    (2.0 * l_f + 1.0) * (l_f + 1.0) * y.powf((l_f - 1.0) / 2.0) * sigma2.powi(l as i32)
}

/// `‖R_n(l)‖₂` on truncated, centralized data against the asymptotic bound.
pub fn diamond_bound_check(cfg: &TrialConfig, l: usize) -> Result<Vec<CheckRow>> {
    if l == 0 || l > MAX_BOUND_L {
        return Err(Error::GuardExceeded(format!("l must lie in 1..={MAX_BOUND_L}, got {l}")));
    }
    cfg.validate()?;
    let bound = diamond_power_bound(l, cfg.y(), cfg.sigma2());
    (0..cfg.trials)
        .map(|t| {
            in_trial(t, (|| {
                let x = cfg.sample_truncated(t);
                let fam = r_family(&x, l)?;
                let observed = fam[l].norm2_hermitian()?;
                Ok(CheckRow { trial: t, n: cfg.n, observed, target: bound, margin: bound - observed })
            })())
        })
        .collect()
}

/// `‖R(1)R(k) - R(k+1) - yσ²R(k) - yσ⁴R(k-1)‖₂` for one data matrix, with
/// `y = p/n` read off its shape.
pub fn recursion_residual_for(x: &QMatrix, k: usize, sigma2: f64) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!("recursion check needs k in {{1, 2}}, got {k}")));
    }
    let y = x.rows() as f64 / x.cols() as f64;
    recursion_residual_in(&r_family(x, k + 1)?, k, y, sigma2)
}

/// Recursion residual from a precomputed `[R(0), ..., R(m)]`, `m >= k + 1`.
pub fn recursion_residual_in(fam: &[QMatrix], k: usize, y: f64, sigma2: f64) -> Result<f64> {
    if k == 0 || fam.len() < k + 2 {
        return Err(Error::InvalidArgument(format!("need R(0..={}) for k = {k}", k + 1)));
    }
    let mut res = fam[1].matmul(&fam[k])?;
    res.axpy(-1.0, &fam[k + 1])?;
    res.axpy(-y * sigma2, &fam[k])?;
    res.axpy(-y * sigma2 * sigma2, &fam[k - 1])?;
    if k == 1 {
        res.norm2_hermitian()
    } else {
        res.norm2()
    }
}

pub fn recursion_residual(cfg: &TrialConfig, k: usize) -> Result<Vec<CheckRow>> {
    cfg.validate()?;
    (0..cfg.trials)
        .map(|t| {
            let observed = in_trial(t, recursion_residual_for(&cfg.sample_truncated(t), k, cfg.sigma2()))?;
            Ok(CheckRow { trial: t, n: cfg.n, observed, target: 0.0, margin: 0.0 - observed })
        })
        .collect()
}

/// `‖(R(1) - yσ²I)^k - Σ_r (±) σ^{2(k-r)} R(r) Σ_j C_j(k,r) y^{k-r-j}‖₂`.
pub fn expansion_residual_for(x: &QMatrix, k: usize, sigma2: f64) -> Result<f64> {
    if k == 0 || k > MAX_EXPANSION_K {
        return Err(Error::GuardExceeded(format!("k must lie in 1..={MAX_EXPANSION_K}, got {k}")));
    }
    let y = x.rows() as f64 / x.cols() as f64;
    expansion_residual_in(&r_family(x, k)?, k, y, sigma2)
}

/// Expansion residual from a precomputed `[R(0), ..., R(m)]`, `m >= k`.
pub fn expansion_residual_in(fam: &[QMatrix], k: usize, y: f64, sigma2: f64) -> Result<f64> {
    if k == 0 || k > MAX_EXPANSION_K || fam.len() < k + 1 {
        return Err(Error::InvalidArgument(format!("need R(0..={k}) and 1 <= k <= {MAX_EXPANSION_K}")));
    }
    let fam = &fam[..=k];
    let mut base = fam[1].clone();
    base.axpy(-y * sigma2, &fam[0])?;
    let mut lhs = base.clone();
    for _ in 1..k {
        lhs = lhs.matmul(&base)?;
    }
    let rhs = expansion_rhs(fam, &cj_coefficients(k), y, sigma2)?;
    lhs.sub(&rhs)?.norm2_hermitian()
}

pub fn expansion_check(cfg: &TrialConfig, k: usize) -> Result<Vec<CheckRow>> {
    cfg.validate()?;
    (0..cfg.trials)
        .map(|t| {
            let observed = in_trial(t, expansion_residual_for(&cfg.sample_truncated(t), k, cfg.sigma2()))?;
            Ok(CheckRow { trial: t, n: cfg.n, observed, target: 0.0, margin: 0.0 - observed })
        })
        .collect()
}

/// Both sides of
/// `‖S - σ²(1+y)I‖₂ <= ‖S - σ²I - R(1)‖₂ + ‖R(1) - yσ²I‖₂`.
pub fn triangle_decomposition_for(x: &QMatrix, sigma2: f64) -> Result<(f64, f64)> {
    let p = x.rows();
    let y = p as f64 / x.cols() as f64;
    let eye = QMatrix::identity(p);
    let s = sample_covariance(x);
    let r1 = s.without_diagonal();

    let mut whole = s.clone();
    whole.axpy(-sigma2 * (1.0 + y), &eye)?;
    let mut diag_part = s.sub(&r1)?;
    diag_part.axpy(-sigma2, &eye)?;
    let mut off_part = r1;
    off_part.axpy(-y * sigma2, &eye)?;
    Ok((whole.norm2_hermitian()?, diag_part.norm2_hermitian()? + off_part.norm2_hermitian()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NecessityKind {
    HeavyTail,
    NonzeroMean,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessityRow {
    pub p: usize,
    pub n: usize,
    pub row_mean: f64,
    pub s_max: f64,
    /// `σ²(1+√y)²`.
    pub edge: f64,
}

/// Largest eigenvalue and the row-mean lower bound across growing `n` at
/// fixed ratio `y`, with Pareto (α = 3) or shifted-mean (`ℏ = e`) entries.
pub fn necessity_demo(
    kind: NecessityKind,
    y: f64,
    sigma2: f64,
    sizes: &[usize],
    seed: u64,
) -> Result<Vec<NecessityRow>> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sizes must be non-empty and strictly ascending".into()));
    }
    let dist = match kind {
        NecessityKind::HeavyTail => EntryDistribution::pareto_heavy(sigma2),
        NecessityKind::NonzeroMean => EntryDistribution::shifted_mean(sigma2, crate::Quaternion::E),
    };
    let edge = MpLaw::new(y, sigma2)?.support().1;
    sizes
        .iter()
        .map(|&n| {
            let p = ((y * n as f64).round() as usize).max(1);
            let x = sample_matrix(&dist, p, n, seed, 0);
            let spec = spectrum(&sample_covariance(&x))?;
            Ok(NecessityRow { p, n, row_mean: row_mean_statistic(&x), s_max: spec.max(), edge })
        })
        .collect()
}

/// Median of a non-empty slice.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(dist: EntryDistribution) -> TrialConfig {
        TrialConfig::new(6, 12, dist, 2, 11)
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::new(1, 5, EntryDistribution::gaussian(1.0), 1, 0).validate().is_err());
        assert!(TrialConfig::new(3, 5, EntryDistribution::gaussian(1.0), 0, 0).validate().is_err());
        assert!(small(EntryDistribution::gaussian(1.0)).with_moments(9).validate().is_err());
    }

    #[test]
    fn records_are_deterministic() {
        let cfg = small(EntryDistribution::gaussian(1.0));
        let a = run_extremes(&cfg).unwrap();
        assert_eq!(a, run_extremes(&cfg).unwrap());
        assert_eq!(a.len(), 2);
        for r in &a {
            assert!(r.s_min <= r.s_max && (0.0..=1.0).contains(&r.ks));
            assert_eq!(r.moments.len(), 4);
        }
    }

    #[test]
    fn first_moment_is_mean_squared_norm() {
        let cfg = small(EntryDistribution::signed_unit(1.0));
        let r = &run_extremes(&cfg).unwrap()[0];
        assert!((r.moments[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_count_when_p_exceeds_n() {
        let cfg = TrialConfig::new(10, 4, EntryDistribution::gaussian(1.0), 2, 5);
        for r in run_extremes(&cfg).unwrap() {
            assert_eq!(r.zero_count, 6);
            assert!(r.s_min > 0.0);
        }
    }

    #[test]
    fn ks_of_quantile_spectrum() {
        let law = MpLaw::new(0.25, 1.0).unwrap();
        let p = 50;
        let q: Vec<f64> = (0..p).map(|i| law.quantile((i as f64 + 0.5) / p as f64).unwrap()).collect();
        let ks = ks_distance(&HermitianSpectrum::from_paired_values(&q), &law).unwrap();
        assert!(ks <= 1.0 / p as f64, "{ks}");
        let far = ks_distance(&HermitianSpectrum::from_paired_values(&[10.0; 5]), &law).unwrap();
        assert!((far - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_with_atom() {
        let law = MpLaw::new(2.0, 1.0).unwrap();
        let mut vals = vec![1e-14; 5];
        vals.extend((0..5).map(|i| law.quantile(0.5 + (i as f64 + 0.5) / 10.0).unwrap()));
        let ks = ks_distance(&HermitianSpectrum::from_paired_values(&vals), &law).unwrap();
        assert!(ks <= 0.1 + 1e-12, "{ks}");
    }

    #[test]
    fn zero_matrix_recursion_and_expansion() {
        let x = QMatrix::zeros(3, 6);
        let r = recursion_residual_for(&x, 1, 2.0).unwrap();
        assert!((r - 0.5 * 4.0).abs() < 1e-14);
        assert!(recursion_residual_for(&x, 3, 1.0).is_err());
    }

    #[test]
    fn expansion_exact_at_k1() {
        let cfg = small(EntryDistribution::gaussian(1.0));
        for row in expansion_check(&cfg, 1).unwrap() {
            assert!(row.observed <= 1e-12);
        }
        assert!(expansion_check(&cfg, 5).is_err());
    }

    #[test]
    fn bound_formula() {
        assert_eq!(diamond_power_bound(1, 0.3, 1.0), 6.0);
        assert!((diamond_power_bound(2, 0.25, 1.0) - 15.0 * 0.5).abs() < 1e-12);
        assert!(diamond_bound_check(&small(EntryDistribution::gaussian(1.0)), 4).is_err());
    }

    #[test]
    fn triangle_holds() {
        let x = small(EntryDistribution::gaussian(1.0)).sample(0);
        let (lhs, rhs) = triangle_decomposition_for(&x, 1.0).unwrap();
        assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn necessity_rejects_unsorted_sizes() {
        assert!(necessity_demo(NecessityKind::HeavyTail, 0.25, 1.0, &[40, 20], 0).is_err());
        let rows = necessity_demo(NecessityKind::NonzeroMean, 0.5, 1.0, &[8, 16], 0).unwrap();
        assert_eq!(rows[1].p, 8);
        assert!(rows.iter().all(|r| r.s_max >= r.row_mean - 1e-9));
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
