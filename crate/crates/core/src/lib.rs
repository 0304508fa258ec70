//! Quaternion random-matrix laboratory.
//!
//! Quaternion scalars and matrices (with the star and Diamond products), a
//! Hermitian eigensolver working on the 2p×2p complex embedding, the
//! Marčenko–Pastur law, canonical-graph moment combinatorics and a Monte Carlo
//! harness for the extreme eigenvalues of quaternion sample covariance matrices.

pub mod error;
pub mod experiments;
pub mod graphs;
pub mod io;
pub mod mp_law;
pub mod qmatrix;
pub mod quad;
pub mod quaternion;
pub mod randgen;
pub mod spectra;

pub use error::{Error, Result};
pub use mp_law::MpLaw;
pub use qmatrix::{DiamondChain, QMatrix};
pub use quaternion::Quaternion;
pub use spectra::HermitianSpectrum;
