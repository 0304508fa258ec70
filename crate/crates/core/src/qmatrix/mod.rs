//! Dense quaternion matrices.
//!
//! Entries are stored row-major as [`Quaternion`] values. The complex
//! embedding replaces every entry by its 2×2 block, so a p×n matrix maps to a
//! 2p×2n complex matrix and products, adjoints and real scalings commute with
//! the embedding.

mod diamond;
mod expansion;

pub use diamond::{diamond, diamond_bruteforce, diamond_suffixes, DiamondChain, BRUTEFORCE_GUARD};
pub use expansion::{build_r, cj_coefficients, expansion_rhs, r_family, CjTable};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::spectra::{eigvalsh, CMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    /// The quaternion identity `diag(e, ..., e)`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::E;
        }
        m
    }

    pub fn filled(rows: usize, cols: usize, value: Quaternion) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn diagonal(entries: &[Quaternion]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &q) in entries.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Quaternion] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Quaternion] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|q| q.scale(s)).collect() }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&q| f(q)).collect() }
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(&x, &y)| x + y).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(&x, &y)| x - y).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        self.check_same_shape(other, "axpy")?;
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            *x += y.scale(s);
        }
        Ok(())
    }

    /// Matrix product over quaternion arithmetic.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · self*`, computed on the lower triangle and mirrored so the
    /// result is exactly Hermitian.
    pub fn gram(&self) -> Self {
        let p = self.rows;
        let mut out = Self::zeros(p, p);
        for a in 0..p {
            let ra = self.row(a);
            for b in 0..=a {
                let rb = self.row(b);
                let mut acc = Quaternion::ZERO;
                for (&x, &y) in ra.iter().zip(rb) {
                    acc += x * y.conj();
                }
                out[(a, b)] = acc;
                out[(b, a)] = acc.conj();
            }
            let d = out[(a, a)];
            out[(a, a)] = Quaternion::real(d.a);
        }
        out
    }

    /// Entrywise (Hadamard) quaternion product `(a_jl · b_jl)`.
    pub fn star(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "star")?;
        let data = self.data.iter().zip(&rhs.data).map(|(&x, &y)| x * y).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Block diagonal part `diag(a_11, ..., a_pp)` of a square matrix.
    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| if i == j { self[(i, j)] } else { Quaternion::ZERO })
    }

    /// Copy with the diagonal entries set to zero.
    pub fn without_diagonal(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = Quaternion::ZERO;
        }
        m
    }

    /// The 2p×2n complex embedding.
    pub fn embed(&self) -> CMatrix {
        let mut c = CMatrix::zeros(2 * self.rows, 2 * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self[(i, j)].embed2();
                for (r, block_row) in block.iter().enumerate() {
                    for (s, &z) in block_row.iter().enumerate() {
                        c[(2 * i + r, 2 * j + s)] = z;
                    }
                }
            }
        }
        c
    }

    /// Inverse of [`embed`](Self::embed); reads the first row of every block.
    pub fn from_embedding(c: &CMatrix) -> Result<Self> {
        if !c.rows().is_multiple_of(2) || !c.cols().is_multiple_of(2) {
            return Err(Error::DimensionMismatch("embedding must have even dimensions".into()));
        }
        Ok(Self::from_fn(c.rows() / 2, c.cols() / 2, |i, j| {
            let z0: Complex64 = c[(2 * i, 2 * j)];
            let z1: Complex64 = c[(2 * i, 2 * j + 1)];
            Quaternion::new(z0.re, z0.im, z1.re, z1.im)
        }))
    }

    /// Largest `‖a_ij - conj(a_ji)‖`; zero for a quaternion Hermitian matrix.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Operator 2-norm: the largest singular value of the embedding, i.e. the
    /// square root of the top eigenvalue of the smaller Gram matrix.
    pub fn norm2(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let gram = if self.rows <= self.cols { self.gram() } else { self.adjoint().gram() };
        let top = eigvalsh(&gram.embed())?.last().copied().unwrap_or(0.0);
        Ok(top.max(0.0).sqrt())
    }

    /// 2-norm of a quaternion Hermitian matrix, from its own spectrum.
    pub fn norm2_hermitian(&self) -> Result<f64> {
        let vals = eigvalsh(&self.embed())?;
        Ok(vals.first().map_or(0.0, |v| v.abs()).max(vals.last().map_or(0.0, |v| v.abs())))
    }

    /// Trace as a quaternion.
    pub fn trace(&self) -> Quaternion {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}
