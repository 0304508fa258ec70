//! The Diamond product: a chained product `H_1 ⋄ ... ⋄ H_k` whose index
//! chains `t_1 = α, t_2, ..., t_k, t_{k+1} = β` skip every term with
//! `t_j = t_{j+2}` for `j = 1..k-1`.
//!
//! [`diamond`] uses the three-term recursion
//!
//! ```text
//! A ⋄ H_2 ⋄ ... ⋄ H_k = A (H_2 ⋄ ... ⋄ H_k)
//!                      - diag(A H_2) (H_3 ⋄ ... ⋄ H_k)
//!                      + (a_jl h2_lj h3_jl) ⋄ H_4 ⋄ ... ⋄ H_k
//! ```
//!
//! where `diag(A H_2)` keeps only the (α, α) entries and the third factor has
//! entry (j, l) zero when `l` is out of range for `A`'s columns or `j` for
//! `H_2`'s columns. [`diamond_bruteforce`] sums the index chains directly and
//! is kept as a test oracle.

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

use super::QMatrix;

/// Maximum number of (α, β, chain) terms [`diamond_bruteforce`] will visit.
pub const BRUTEFORCE_GUARD: u128 = 10_000_000;

#[derive(Clone, Debug)]
pub struct DiamondChain {
    factors: Vec<QMatrix>,
}

impl DiamondChain {
    pub fn new(factors: Vec<QMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("Diamond chain needs at least one factor".into()));
        }
        for (j, w) in factors.windows(2).enumerate() {
            if w[0].cols() != w[1].rows() {
                return Err(Error::DimensionMismatch(format!(
                    "factor {} is {}x{} but factor {} is {}x{}",
                    j + 1,
                    w[0].rows(),
                    w[0].cols(),
                    j + 2,
                    w[1].rows(),
                    w[1].cols()
                )));
            }
        }
        Ok(Self { factors })
    }

    /// `X, X*, X, X*, ...` with `2·pairs` factors.
    pub fn alternating(x: &QMatrix, pairs: usize) -> Result<Self> {
        let xa = x.adjoint();
        let factors = (0..2 * pairs).map(|i| if i % 2 == 0 { x.clone() } else { xa.clone() }).collect();
        Self::new(factors)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[QMatrix] {
        &self.factors
    }
}

/// `H_1 ⋄ ... ⋄ H_k`.
pub fn diamond(chain: &DiamondChain) -> QMatrix {
    diamond_suffixes(chain).swap_remove(0)
}

/// All suffix products: element `m` is `H_{m+1} ⋄ ... ⋄ H_k`.
pub fn diamond_suffixes(chain: &DiamondChain) -> Vec<QMatrix> {
    let f = chain.factors();
    let k = f.len();
    let mut suffix: Vec<QMatrix> = Vec::with_capacity(k);
    suffix.push(f[k - 1].clone());
    for m in (0..k - 1).rev() {
        // suffix is stored reversed while building: last pushed is H_{m+2} ⋄ ...
        let tails: Vec<&QMatrix> = suffix.iter().rev().collect();
        let next = lead(&f[m], &f[m + 1..], &tails);
        suffix.push(next);
    }
    suffix.reverse();
    suffix
}

/// `a ⋄ tail[0] ⋄ ... ⋄ tail[t-1]`, given `suffix[i] = tail[i] ⋄ ... ⋄ tail[t-1]`.
fn lead(a: &QMatrix, tail: &[QMatrix], suffix: &[&QMatrix]) -> QMatrix {
    let Some(h2) = tail.first() else {
        return a.clone();
    };
    let mut out = a.matmul(suffix[0]).expect("chained dimensions");

    // diag(a·h2) entries; only α < h2.cols() exist
    let nd = a.rows().min(h2.cols());
    let q: Vec<Quaternion> = (0..nd)
        .map(|alpha| a.row(alpha).iter().enumerate().map(|(l, &x)| x * h2[(l, alpha)]).sum())
        .collect();

    if tail.len() == 1 {
        for (alpha, &qa) in q.iter().enumerate() {
            out[(alpha, alpha)] -= qa;
        }
        return out;
    }

    let next = suffix[1];
    for (alpha, &qa) in q.iter().enumerate() {
        if qa.is_zero() {
            continue;
        }
        let src = next.row(alpha);
        for (o, &s) in out.row_mut(alpha).iter_mut().zip(src) {
            *o -= qa * s;
        }
    }

    let h3 = &tail[1];
    let third = QMatrix::from_fn(a.rows(), h3.cols(), |j, l| {
        if l < a.cols() && j < h2.cols() {
            a[(j, l)] * h2[(l, j)] * h3[(j, l)]
        } else {
            Quaternion::ZERO
        }
    });
    let rest = lead(&third, &tail[2..], &suffix[2..]);
    for (o, &r) in out.as_mut_slice().iter_mut().zip(rest.as_slice()) {
        *o += r;
    }
    out
}

/// Direct constrained sum over index chains. Refuses chains whose term count
/// exceeds [`BRUTEFORCE_GUARD`].
pub fn diamond_bruteforce(chain: &DiamondChain) -> Result<QMatrix> {
    let f = chain.factors();
    let k = f.len();
    let rows = f[0].rows();
    let cols = f[k - 1].cols();
    let inner: u128 = f[1..].iter().map(|h| h.rows() as u128).product();
    let total = rows as u128 * cols as u128 * inner;
    if total > BRUTEFORCE_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{total} index chains exceed the brute-force limit of {BRUTEFORCE_GUARD}"
        )));
    }

    let mut out = QMatrix::zeros(rows, cols);
    let mut t = vec![0usize; k + 1];
    for alpha in 0..rows {
        for beta in 0..cols {
            t[0] = alpha;
            t[k] = beta;
            out[(alpha, beta)] = chain_sum(f, &mut t, 1, Quaternion::E);
        }
    }
    Ok(out)
}

/// Sums over `t[pos..k]` (0-based indices; `t[0]` and `t[k]` fixed), where
/// `acc` is the product of the first `pos - 1` factors.
fn chain_sum(f: &[QMatrix], t: &mut [usize], pos: usize, acc: Quaternion) -> Quaternion {
    let k = f.len();
    if pos == k {
        // close the chain: last factor, then the final lag-two constraint
        if k >= 2 && t[k - 2] == t[k] {
            return Quaternion::ZERO;
        }
        return acc * f[k - 1][(t[k - 1], t[k])];
    }
    let mut total = Quaternion::ZERO;
    for idx in 0..f[pos].rows() {
        if pos >= 2 && t[pos - 2] == idx {
            continue;
        }
        t[pos] = idx;
        let factor = f[pos - 1][(t[pos - 1], idx)];
        if factor.is_zero() {
            continue;
        }
        total += chain_sum(f, t, pos + 1, acc * factor);
    }
    total
}
