//! The Marčenko–Pastur law with ratio `y` and scale `σ²`.
//!
//! Support `[σ²(1-√y)², σ²(1+√y)²]`, density
//! `√((b-x)(x-a)) / (2π x y σ²)` on it, plus an atom of mass `1 - 1/y` at the
//! origin when `y > 1`.
//!
//! Integrals of the density use the substitution `x = a + (b-a)·sin²θ`, which
//! turns the square-root edges into a smooth integrand on `[0, π/2]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Absolute tolerance for CDF and moment quadrature.
pub const QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpLaw {
    pub y: f64,
    pub sigma2: f64,
}

impl MpLaw {
    pub fn new(y: f64, sigma2: f64) -> Result<Self> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::InvalidArgument(format!("ratio y must be positive, got {y}")));
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma2 must be positive, got {sigma2}")));
        }
        Ok(Self { y, sigma2 })
    }

    /// `(a, b)`.
    pub fn support(&self) -> (f64, f64) {
        let r = self.y.sqrt();
        (self.sigma2 * (1.0 - r).powi(2), self.sigma2 * (1.0 + r).powi(2))
    }

    /// Mass of the atom at zero.
    pub fn atom_mass(&self) -> f64 {
        if self.y > 1.0 {
            1.0 - 1.0 / self.y
        } else {
            0.0
        }
    }

    /// Absolutely continuous part; the atom is excluded.
    pub fn density(&self, x: f64) -> Result<f64> {
        if x <= 0.0 || x.is_nan() {
            return Err(Error::InvalidArgument(format!("density needs x > 0, got {x}")));
        }
        Ok(self.density_unchecked(x))
    }

    fn density_unchecked(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x < a || x > b {
            return 0.0;
        }
        let prod = ((b - x) * (x - a)).max(0.0);
        prod.sqrt() / (2.0 * PI * x * self.y * self.sigma2)
    }

    /// `∫_a^x t^k f(t) dt` for `x` in the support.
    fn integrate_density(&self, x: f64, k: u32) -> Result<f64> {
        let (a, b) = self.support();
        let width = b - a;
        let frac = ((x - a) / width).clamp(0.0, 1.0);
        let theta_hi = frac.sqrt().asin();
        let scale = width * width / (PI * self.y * self.sigma2);
        let integrand = |theta: f64| {
            let (s, c) = theta.sin_cos();
            let s2 = s * s;
            let t = a + width * s2;
            // s²/t, with the a = 0 limit at θ = 0
            let ratio = if t > 0.0 { s2 / t } else { 1.0 / width };
            scale * ratio * c * c * t.powi(k as i32)
        };
        adaptive_simpson(integrand, 0.0, theta_hi, QUAD_TOL)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let (a, b) = self.support();
        if x >= b {
            return Ok(1.0);
        }
        let atom = self.atom_mass();
        if x <= a {
            return Ok(atom);
        }
        Ok((atom + self.integrate_density(x, 0)?).clamp(0.0, 1.0))
    }

    /// Left limit `F(x-)`; differs from [`cdf`](Self::cdf) only at the atom.
    pub fn cdf_left(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        self.cdf(x)
    }

    /// Mass of the continuous part, `min(1, 1/y)`, by quadrature.
    pub fn density_mass(&self) -> Result<f64> {
        let (_, b) = self.support();
        self.integrate_density(b, 0)
    }

    /// `m_k = σ^{2k} Σ_{r<k} y^r N(k, r+1)` with Narayana numbers `N`;
    /// `m_0 = 1`. The atom contributes nothing for k ≥ 1.
    pub fn moment(&self, k: u32) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let poly: f64 = (0..k).map(|r| narayana(k, r + 1) as f64 * self.y.powi(r as i32)).sum();
        self.sigma2.powi(k as i32) * poly
    }

    /// `∫ x^k dF` by quadrature (atom included for k = 0).
    pub fn moment_by_quadrature(&self, k: u32) -> Result<f64> {
        let (_, b) = self.support();
        let cont = self.integrate_density(b, k)?;
        Ok(if k == 0 { cont + self.atom_mass() } else { cont })
    }

    /// Quantile of the law by bisection on the CDF.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::InvalidArgument(format!("probability {prob} outside [0, 1]")));
        }
        if prob <= self.atom_mass() {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = self.support();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < prob {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi.max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `(x, density, cdf)` on `points` equally spaced abscissae spanning the
    /// support (the origin is included when there is an atom).
    pub fn grid(&self, points: usize) -> Result<Vec<(f64, f64, f64)>> {
        if points < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        let (a, b) = self.support();
        let lo = if self.atom_mass() > 0.0 { 0.0 } else { a };
        let step = (b - lo) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let x = if i + 1 == points { b } else { lo + step * i as f64 };
                let dens = if x > 0.0 { self.density_unchecked(x) } else { 0.0 };
                Ok((x, dens, self.cdf(x)?))
            })
            .collect()
    }
}

/// `C(n, k)` exactly.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Narayana number `N(k, s) = C(k, s) C(k, s-1) / k`, for `1 <= s <= k`.
pub fn narayana(k: u32, s: u32) -> u128 {
    if k == 0 || s == 0 || s > k {
        return 0;
    }
    binomial(k, s) * binomial(k, s - 1) / k as u128
}

/// Catalan number `C_k`.
pub fn catalan(k: u32) -> u128 {
    binomial(2 * k, k) / (k as u128 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(y: f64, s2: f64) -> MpLaw {
        MpLaw::new(y, s2).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(law(0.25, 1.0).support(), (0.25, 2.25));
        assert_eq!(law(1.0, 3.0).support(), (0.0, 12.0));
        let (a, b) = law(2.0, 1.0).support();
        assert!((a - 0.171_572_875_253_809_9).abs() < 1e-12);
        assert!((b - 5.828_427_124_746_19).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(MpLaw::new(0.0, 1.0).is_err());
        assert!(MpLaw::new(1.0, -1.0).is_err());
        assert!(MpLaw::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn density_examples() {
        let l = law(0.25, 1.0);
        assert_eq!(l.density(0.1).unwrap(), 0.0);
        assert_eq!(l.density(3.0).unwrap(), 0.0);
        assert!(l.density(0.0).is_err());
        assert!(l.density(-1.0).is_err());
        let v = law(1.0, 1.0).density(2.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
        // continuous at the edges
        assert_eq!(l.density(0.25).unwrap(), 0.0);
        assert_eq!(l.density(2.25).unwrap(), 0.0);
    }

    #[test]
    fn cdf_examples() {
        let l = law(2.0, 1.0);
        assert_eq!(l.cdf(-0.1).unwrap(), 0.0);
        assert_eq!(l.cdf(0.0).unwrap(), 0.5);
        assert_eq!(l.cdf_left(0.0).unwrap(), 0.0);
        assert_eq!(l.cdf(10.0).unwrap(), 1.0);
        let q = law(0.25, 1.0);
        let mid = q.cdf(1.25).unwrap();
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(law(0.3, 2.0).moment(0), 1.0);
        assert!((law(0.3, 2.0).moment(1) - 2.0).abs() < 1e-15);
        assert!((law(0.3, 2.0).moment(2) - 4.0 * 1.3).abs() < 1e-12);
        assert_eq!(law(1.0, 1.0).moment(4), 14.0);
    }

    #[test]
    fn combinatorial_numbers() {
        assert_eq!((1..=5).map(catalan).collect::<Vec<_>>(), vec![1, 2, 5, 14, 42]);
        assert_eq!((1..=4).map(|s| narayana(4, s)).collect::<Vec<_>>(), vec![1, 6, 6, 1]);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let l = law(0.5, 1.0);
        for &p in &[0.1, 0.5, 0.9] {
            let x = l.quantile(p).unwrap();
            assert!((l.cdf(x).unwrap() - p).abs() < 1e-9);
        }
        assert_eq!(law(2.0, 1.0).quantile(0.3).unwrap(), 0.0);
    }

    #[test]
    fn grid_shape() {
        let g = law(0.25, 1.0).grid(11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0].0, 0.25);
        assert_eq!(g[10], (2.25, 0.0, 1.0));
        assert!(law(0.25, 1.0).grid(1).is_err());
    }
}
