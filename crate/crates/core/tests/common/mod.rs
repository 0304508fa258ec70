#![allow(dead_code)]

use proptest::prelude::*;
use qrmt::spectra::CMatrix;
use qrmt::{QMatrix, Quaternion};
use rand::Rng;

pub fn quat() -> impl Strategy<Value = Quaternion> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
}

pub fn qmat(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(quat(), rows * cols).prop_map(move |v| QMatrix::from_vec(rows, cols, v).unwrap())
}

pub fn qmat_upto(max: usize) -> impl Strategy<Value = QMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| qmat(r, c))
}

/// Hermitian `A + A*`.
pub fn hermitian(p: usize) -> impl Strategy<Value = QMatrix> {
    qmat(p, p).prop_map(|a| a.add(&a.adjoint()).unwrap())
}

pub fn random_quat<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_qmatrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| random_quat(rng))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, p: usize) -> QMatrix {
    let a = random_qmatrix(rng, p, p);
    a.add(&a.adjoint()).unwrap()
}

pub fn random_unit_quat<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let q = random_quat(rng);
        if q.norm() > 1e-3 {
            return q.scale(1.0 / q.norm());
        }
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.sub(b).max_abs()
}
