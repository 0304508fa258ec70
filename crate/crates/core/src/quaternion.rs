//! Quaternion scalars `a·e + b·i + c·j + d·k` and their 2×2 complex form.
//!
//! The basis is the one where `e` is the identity, `i = diag(i, -i)`,
//! `j = [[0, 1], [-1, 0]]` and `k = [[0, i], [i, 0]]`, so a quaternion maps to
//! `[[a+bi, c+di], [-c+di, a-bi]]`. Arithmetic is done on the four real
//! coefficients; the complex block is only built on request.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Absolute tolerance used by approximate comparisons.
pub const ATOL: f64 = 1e-12;
/// Relative tolerance used by approximate comparisons.
pub const RTOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const E: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Real multiple of the identity element.
    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    /// Hamilton product `self · rhs`.
    #[inline]
    pub fn mul(self, rhs: Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (rhs.a, rhs.b, rhs.c, rhs.d);
        Self {
            a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            c: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            d: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// The 2×2 complex block `[[λ, ω], [-conj(ω), conj(λ)]]` with `λ = a+bi`, `ω = c+di`.
    pub fn embed2(self) -> [[Complex64; 2]; 2] {
        let lambda = Complex64::new(self.a, self.b);
        let omega = Complex64::new(self.c, self.d);
        [[lambda, omega], [-omega.conj(), lambda.conj()]]
    }

    /// Inverse of [`embed2`](Self::embed2). Only the first row is read.
    pub fn from_embed2(block: &[[Complex64; 2]; 2]) -> Self {
        Self::new(block[0][0].re, block[0][0].im, block[0][1].re, block[0][1].im)
    }

    /// Determinant of the 2×2 complex form, which equals `norm²`.
    pub fn det_embed2(self) -> f64 {
        let m = self.embed2();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        det.re
    }

    /// Coefficient-wise comparison with `|x - y| <= ATOL + RTOL·max(|x|, |y|)`.
    pub fn approx_eq(self, other: Self) -> bool {
        self.approx_eq_tol(other, ATOL, RTOL)
    }

    pub fn approx_eq_tol(self, other: Self, atol: f64, rtol: f64) -> bool {
        let scale = self.norm().max(other.norm());
        (self - other).norm() <= atol + rtol * scale
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.a += rhs.a;
        self.b += rhs.b;
        self.c += rhs.c;
        self.d += rhs.d;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.a -= rhs.a;
        self.b -= rhs.b;
        self.c -= rhs.c;
        self.d -= rhs.d;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Quaternion::mul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.a, self.b, self.c, self.d)
    }
}
