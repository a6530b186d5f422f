//! Random structured block operators for property tests and benchmarks.

use rand::Rng;

use crate::blockop::{BlockOperator, C1Policy};
use crate::linalg::BandMatrix;
use crate::scalar::Scalar;

/// Sizes and constants of a random instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleShape {
    pub n: usize,
    /// Half-bandwidth of `P`.
    pub p_band: usize,
    pub t_lower: usize,
    pub t_upper: usize,
    /// Half-bandwidth of `S`; 0 gives a diagonal `S`.
    pub s_band: usize,
    /// Lower bound placed under the spectrum of `S`.
    pub c1: f64,
    /// Target `λ_min(M_0)`; `P` is shifted to hit it.
    pub margin: f64,
}

impl SampleShape {
    /// Draws a shape with `2 <= n <= n_max`, bandwidths up to 2,
    /// `c1` in `[0.2, 2]` and margin in `[0.05, 3]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> Self {
        Self {
            n: rng.gen_range(2..=n_max.max(2)),
            p_band: rng.gen_range(0..=2),
            t_lower: rng.gen_range(0..=2),
            t_upper: rng.gen_range(0..=2),
            s_band: rng.gen_range(0..=2),
            c1: rng.gen_range(0.2..=2.0),
            margin: rng.gen_range(0.05..=3.0),
        }
    }
}

fn random_band<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, kl: usize, ku: usize, scale: f64) -> BandMatrix<T> {
    let mut m = BandMatrix::zeros(n, kl, ku);
    for i in 0..n {
        for j in m.row_range(i) {
            m.set(i, j, T::lit(rng.gen_range(-scale..=scale)));
        }
    }
    m
}

/// Draws `H` with `S = GᵀG + c1 I` and `P` shifted so that `λ_min(M_0)`
/// equals `shape.margin` up to rounding.
pub fn sample_operator<T: Scalar, R: Rng + ?Sized>(rng: &mut R, shape: &SampleShape) -> BlockOperator<T> {
    let n = shape.n;
    let t = random_band(rng, n, shape.t_lower, shape.t_upper, 2.0);
    let g: BandMatrix<T> = random_band(rng, n, shape.s_band, 0, 1.0);
    let s = g.weighted_gram(&vec![T::one(); n]).shift_diagonal(T::lit(shape.c1));
    let raw = random_band::<T, R>(rng, n, shape.p_band, shape.p_band, 1.0);
    let p = raw.add(&raw.transpose()).scaled(T::lit(0.5));
    let draft = BlockOperator::assemble(p.clone(), t.clone(), s.clone(), C1Policy::Compute)
        .expect("S is positive definite by construction");
    let m = draft.positivity_margin(T::zero()).expect("draft margin");
    let p = p.shift_diagonal(T::lit(shape.margin) - m);
    BlockOperator::assemble(p, t, s, C1Policy::Compute).expect("shifted instance")
}
