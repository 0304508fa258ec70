//! The normalized alternating Diamond powers `R(l)` of a data matrix and the
//! coefficient table that expands `(R(1) - yσ²I)^k` in them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;

use super::diamond::{diamond_suffixes, DiamondChain};
use super::QMatrix;

/// `R(l) = n^{-l} · X ⋄ X* ⋄ ... ⋄ X ⋄ X*` (2l factors), `R(0) = I`.
pub fn build_r(x: &QMatrix, l: usize) -> Result<QMatrix> {
    Ok(r_family(x, l)?.pop().expect("family has l+1 members"))
}

/// `[R(0), R(1), ..., R(max_l)]` from a single suffix sweep.
///
/// The suffix of the 2L-factor alternating chain that starts at factor
/// `2(L-m)` is exactly the unnormalized `R(m)`.
pub fn r_family(x: &QMatrix, max_l: usize) -> Result<Vec<QMatrix>> {
    let p = x.rows();
    let n = x.cols() as f64;
    let mut family = vec![QMatrix::identity(p)];
    if max_l == 0 {
        return Ok(family);
    }
    let chain = DiamondChain::alternating(x, max_l)?;
    let suffixes = diamond_suffixes(&chain);
    for m in 1..=max_l {
        let raw = &suffixes[2 * (max_l - m)];
        family.push(raw.scale(n.powi(-(m as i32))));
    }
    Ok(family)
}

/// `C_j(k, r)` for `0 <= r <= k`, `0 <= j <= (k-r)/2`, such that
///
/// ```text
/// (R(1) - yσ²I)^k ≈ Σ_r (-1)^{r+1} σ^{2(k-r)} R(r) Σ_j C_j(k, r) y^{k-r-j}
/// ```
///
/// when `R(1)R(r) = R(r+1) + yσ²R(r) + yσ⁴R(r-1)` (for r ≥ 1) and
/// `R(1)R(0) = R(1)` are taken as exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CjTable {
    pub k: usize,
    /// Keyed by `(j, r)`.
    pub entries: BTreeMap<(usize, usize), i64>,
}

impl CjTable {
    pub fn get(&self, j: usize, r: usize) -> i64 {
        self.entries.get(&(j, r)).copied().unwrap_or(0)
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.values().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Scalar weight of `R(r)` at dimension ratio `y` and variance `sigma2`.
    pub fn weight(&self, r: usize, y: f64, sigma2: f64) -> f64 {
        let k = self.k;
        let sign = if (r + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        let inner: f64 = (0..=(k - r) / 2)
            .map(|j| self.get(j, r) as f64 * y.powi((k - r - j) as i32))
            .sum();
        sign * sigma2.powi((k - r) as i32) * inner
    }
}

/// A monomial `R(r) · y^a · (σ²)^b`.
type Monomial = (usize, u32, u32);

/// Symbolic expansion of `(R - yσ²I)^k` under the exact recursion.
pub fn cj_coefficients(k: usize) -> CjTable {
    assert!(k >= 1, "cj_coefficients needs k >= 1");
    let mut poly: BTreeMap<Monomial, i64> = BTreeMap::new();
    poly.insert((1, 0, 0), 1);
    poly.insert((0, 1, 1), -1);

    for _ in 1..k {
        let mut next: BTreeMap<Monomial, i64> = BTreeMap::new();
        let mut add = |key: Monomial, c: i64| *next.entry(key).or_insert(0) += c;
        for (&(r, a, b), &c) in &poly {
            // R · R(r)
            if r == 0 {
                add((1, a, b), c);
            } else {
                add((r + 1, a, b), c);
                add((r, a + 1, b + 1), c);
                add((r - 1, a + 1, b + 2), c);
            }
            // -yσ² · R(r)
            add((r, a + 1, b + 1), -c);
        }
        next.retain(|_, c| *c != 0);
        poly = next;
    }

    let mut entries = BTreeMap::new();
    for (&(r, a, b), &c) in &poly {
        debug_assert_eq!(b as usize, k - r, "σ² degree must be k - r");
        let j = k - r - a as usize;
        let sign = if (r + 1) % 2 == 0 { 1 } else { -1 };
        entries.insert((j, r), sign * c);
    }
    CjTable { k, entries }
}

/// `Σ_r (-1)^{r+1} σ^{2(k-r)} R(r) Σ_j C_j(k, r) y^{k-r-j}` given
/// `family = [R(0), ..., R(k)]`.
pub fn expansion_rhs(family: &[QMatrix], table: &CjTable, y: f64, sigma2: f64) -> Result<QMatrix> {
    let (rows, cols) = family[0].shape();
    let mut out = QMatrix::zeros(rows, cols);
    for (r, rr) in family.iter().enumerate().take(table.k + 1) {
        out.axpy(table.weight(r, y, sigma2), rr)?;
    }
    Ok(out)
}
