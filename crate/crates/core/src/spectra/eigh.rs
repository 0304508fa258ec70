//! Complex Hermitian eigensolver.
//!
//! Householder reduction to Hermitian tridiagonal form, a diagonal phase
//! similarity that makes the tridiagonal real, then implicit QL with
//! Wilkinson shifts. Only the lower triangle of the input is read after the
//! Hermitian check.

use num_complex::Complex64;

use super::cmatrix::CMatrix;
use crate::error::{Error, Result};

/// Iteration cap per eigenvalue in the QL sweep.
pub const MAX_QL_ITERATIONS: usize = 30;

/// Relative tolerance for the Hermitian check on the input.
pub const HERMITIAN_RTOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Eigh {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: Option<CMatrix>,
}

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues (and optionally eigenvectors) of a complex Hermitian matrix.
pub fn eigh(c: &CMatrix, want_vectors: bool) -> Result<Eigh> {
    if c.rows() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let tolerance = HERMITIAN_RTOL * c.frobenius();
    let asymmetry = c.hermitian_defect();
    if asymmetry > tolerance {
        return Err(Error::NotHermitian { asymmetry, tolerance });
    }
    let n = c.rows();
    if n == 0 {
        return Ok(Eigh { values: Vec::new(), vectors: want_vectors.then(|| CMatrix::zeros(0, 0)) });
    }

    let mut work = c.as_slice().to_vec();
    let tri = tridiagonalize(&mut work, n, want_vectors);

    let mut diag = tri.diag.clone();
    let mut off: Vec<f64> = tri.off.iter().map(|z| z.norm()).collect();
    off.push(0.0);

    // rows of `zt` are the eigenvectors of the real tridiagonal
    let mut zt = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tql_implicit(&mut diag, &mut off, zt.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();

    let vectors = zt.map(|zt| {
        let phases = tri.phases();
        // V = U · D · Z, columns ordered by ascending eigenvalue
        let mut v = CMatrix::from_fn(n, n, |i, j| phases[i] * zt[order[j] * n + i]);
        tri.apply_reflectors(&mut v);
        v
    });

    Ok(Eigh { values, vectors })
}

/// Eigenvalues only.
pub fn eigvalsh(c: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(c, false)?.values)
}

struct Tridiagonal {
    n: usize,
    diag: Vec<f64>,
    /// `off[k]` is the (k+1, k) entry.
    off: Vec<Complex64>,
    /// Householder vectors acting on indices `k+1..n`, with their weights.
    reflectors: Vec<(usize, Vec<Complex64>, f64)>,
}

impl Tridiagonal {
    /// Unit phases `d` with `T = D·T_real·D*`.
    fn phases(&self) -> Vec<Complex64> {
        let mut ph = Vec::with_capacity(self.n);
        ph.push(Complex64::new(1.0, 0.0));
        for k in 0..self.off.len() {
            let e = self.off[k];
            let r = e.norm();
            let unit = if r > 0.0 { e / r } else { Complex64::new(1.0, 0.0) };
            ph.push(ph[k] * unit);
        }
        ph
    }

    /// `v <- P_0 P_1 ... P_m v`.
    fn apply_reflectors(&self, v: &mut CMatrix) {
        let cols = v.cols();
        let mut proj = vec![CZERO; cols];
        for (k, u, w) in self.reflectors.iter().rev() {
            let start = k + 1;
            proj.iter_mut().for_each(|p| *p = CZERO);
            for (t, ui) in u.iter().enumerate() {
                let uc = ui.conj();
                for (p, &x) in proj.iter_mut().zip(v.row(start + t)) {
                    *p += uc * x;
                }
            }
            for (t, &ui) in u.iter().enumerate() {
                let s = ui * *w;
                for (j, p) in proj.iter().enumerate() {
                    v[(start + t, j)] -= s * p;
                }
            }
        }
    }
}

/// Reduces the Hermitian matrix held (lower triangle) in `a` to tridiagonal
/// form with Hermitian reflectors `P = I - w·u·u*`.
fn tridiagonalize(a: &mut [Complex64], n: usize, keep_reflectors: bool) -> Tridiagonal {
    let mut diag = vec![0.0; n];
    let mut off = vec![CZERO; n.saturating_sub(1)];
    let mut reflectors = Vec::new();
    let mut p = vec![CZERO; n];

    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k].re;
        let alpha = a[(k + 1) * n + k];
        let tail: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            off[k] = alpha;
            continue;
        }
        let xnorm = (alpha.norm_sqr() + tail).sqrt();
        let phase = if alpha.norm() > 0.0 { alpha / alpha.norm() } else { Complex64::new(1.0, 0.0) };
        let beta = -phase * xnorm;
        off[k] = beta;

        let m = n - k - 1;
        let mut u: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        u[0] = alpha - beta;
        let unorm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let w = 2.0 / unorm2;

        // p = w · A22 · u from the lower triangle
        let p = &mut p[..m];
        p.iter_mut().for_each(|z| *z = CZERO);
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + (k + 1)..(k + 1 + i) * n + (k + 1) + i + 1];
            let ui = u[i];
            let mut acc = row[i] * ui;
            for j in 0..i {
                let aij = row[j];
                acc += aij * u[j];
                p[j] += aij.conj() * ui;
            }
            p[i] += acc;
        }
        let mut uhp = CZERO;
        for i in 0..m {
            p[i] *= w;
            uhp += u[i].conj() * p[i];
        }
        let kappa = 0.5 * w * uhp.re;
        for i in 0..m {
            p[i] -= u[i] * kappa;
        }
        // A22 <- A22 - u q* - q u*, lower triangle
        for i in 0..m {
            let ui = u[i];
            let qi = p[i];
            let row = &mut a[(k + 1 + i) * n + (k + 1)..(k + 1 + i) * n + (k + 1) + i + 1];
            for j in 0..=i {
                row[j] -= ui * p[j].conj() + qi * u[j].conj();
            }
        }

        if keep_reflectors {
            reflectors.push((k, u, w));
        }
    }
    diag[n - 1] = a[(n - 1) * n + (n - 1)].re;

    Tridiagonal { n, diag, off, reflectors }
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix.
///
/// `off[i]` couples `i` and `i+1`; `off[n-1]` must be zero. When `zt` is given,
/// its rows are rotated along so that row `j` ends up as the eigenvector of
/// `diag[j]`.
pub fn tql_implicit(diag: &mut [f64], off: &mut [f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    // deflation is relative to the whole matrix so zero clusters converge
    let scale = diag.iter().zip(off.iter()).map(|(d, e)| d.abs() + e.abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd.max(scale) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { index: l });
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (x, y) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *y;
                        *y = s * *x + c * t;
                        *x = c * *x - s * t;
                    }
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = CMatrix::from_diagonal(&[3.0, -1.0, 2.0, 0.5]);
        let vals = eigvalsh(&m).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two() {
        let m = CMatrix::from_fn(2, 2, |i, j| if i == j { c(2.0, 0.0) } else { c(1.0, 0.0) });
        let vals = eigvalsh(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(1.0, 0.0),
        });
        let e = eigh(&m, true).unwrap();
        assert!(e.values[0].abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0));
        assert!(matches!(eigh(&m, false), Err(Error::NotHermitian { .. })));
        let r = CMatrix::zeros(2, 3);
        assert!(matches!(eigh(&r, false), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn zero_and_one_by_one() {
        assert!(eigvalsh(&CMatrix::zeros(0, 0)).unwrap().is_empty());
        assert_eq!(eigvalsh(&CMatrix::from_diagonal(&[4.5])).unwrap(), vec![4.5]);
        assert_eq!(eigvalsh(&CMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn reconstruction_on_structured_matrix() {
        let n = 7;
        let m = CMatrix::from_fn(n, n, |i, j| {
            let d = i as f64 - j as f64;
            c(1.0 / (1.0 + d.abs()), 0.3 * d)
        });
        let e = eigh(&m, true).unwrap();
        let v = e.vectors.unwrap();
        let lam = CMatrix::from_diagonal(&e.values);
        let rebuilt = v.matmul(&lam).matmul(&v.adjoint());
        assert!(m.sub(&rebuilt).max_abs() < 1e-12);
        let gram = v.adjoint().matmul(&v);
        assert!(gram.sub(&CMatrix::identity(n)).max_abs() < 1e-12);
    }
}
