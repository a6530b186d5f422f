//! Banded and dense real matrices with the factorizations the block-operator
//! code needs: banded Cholesky (solves and definiteness tests), eigenvalue
//! bisection on definiteness, and a dense symmetric eigensolver used by the
//! verification oracles and by Rayleigh-Ritz projections.

mod band;
mod dense;

pub use band::{lambda_max, lambda_min, BandCholesky, BandMatrix, NotPositiveDefinite};
pub use dense::DenseMatrix;
