//! Elimination solve of `H (u, v) = (F1, F2)`:
//!
//! ```text
//!     M_0 u = F1 + Tᵀ S⁻¹ F2,      v = S⁻¹ (T u - F2)
//! ```
//!
//! plus the symmetry identity behind it and a shift-invert eigensolver for
//! eigenvalues of `H` in the spectral gap whose inner solve is this
//! elimination applied to `H - σ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blockop::{BlockOperator, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{BandCholesky, DenseMatrix};
use crate::scalar::{dot, norm2, Scalar};

/// Right-hand side `(F1, F2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsPair<T> {
    pub f1: Vec<T>,
    pub f2: Vec<T>,
}

impl<T: Scalar> RhsPair<T> {
    pub fn new(f1: Vec<T>, f2: Vec<T>) -> Result<Self> {
        if f1.len() != f2.len() {
            return Err(Error::DimensionMismatch {
                what: "right-hand side components",
                expected: f1.len(),
                found: f2.len(),
            });
        }
        Ok(Self { f1, f2 })
    }

    pub fn norm(&self) -> T {
        (dot(&self.f1, &self.f1) + dot(&self.f2, &self.f2)).sqrt()
    }
}

impl<T: Scalar> From<StateVector<T>> for RhsPair<T> {
    fn from(w: StateVector<T>) -> Self {
        Self { f1: w.u, f2: w.v }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub solution: StateVector<T>,
    /// `||H x - F||_2`, recomputed with [`BlockOperator::apply`].
    pub residual_norm: T,
    /// `||M_0||_∞ / λ_min(M_0)` with `λ_min` from inverse iteration.
    pub schur_condition_estimate: T,
    /// Set when the condition estimate exceeds the solver's cap.
    pub ill_conditioned: bool,
}

/// Both sides of `(H w, w̃) = (M_0 u, ũ) - (S (v - S⁻¹Tu), ṽ - S⁻¹Tũ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub absdiff: T,
    /// The right-hand side with `w` and `w̃` exchanged.
    pub rhs_swapped: T,
    pub symmetric: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenOptions {
    pub max_iterations: usize,
    /// Vectors carried beyond the `k` requested ones.
    pub extra_vectors: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            extra_vectors: 8,
            seed: 0x5eed_d1ac,
        }
    }
}

pub const DEFAULT_CONDITION_CAP: f64 = 1e14;

/// Factorizations of `S + σ` and `M_σ = P - σ + Tᵀ (S + σ)⁻¹ T`, i.e. the
/// elimination data of `H - σ`.
#[derive(Debug, Clone)]
pub struct SchurFactorization<T> {
    shift: T,
    s_chol: BandCholesky<T>,
    m_chol: BandCholesky<T>,
    m_norm: T,
}

impl<T: Scalar> SchurFactorization<T> {
    pub fn new(op: &BlockOperator<T>, shift: T) -> Result<Self> {
        let m = op.schur_form_matrix(shift)?;
        let s_chol = op.factor_s(shift)?;
        let m_chol = BandCholesky::factor(&m, T::zero()).map_err(|e| {
            Error::HypothesisFailed(format!(
                "Schur complement M = P - {:e} + Tᵀ (S + {:e})⁻¹ T is not positive definite \
                 (non-positive pivot at row {}); Hardy-type positivity fails at this shift",
                shift.as_f64(),
                shift.as_f64(),
                e.index
            ))
        })?;
        Ok(Self {
            shift,
            s_chol,
            m_chol,
            m_norm: m.inf_norm(),
        })
    }

    pub fn shift(&self) -> T {
        self.shift
    }

    /// Solves `(H - σ) (u, v) = (F1, F2)`.
    pub fn solve(&self, op: &BlockOperator<T>, f1: &[T], f2: &[T]) -> StateVector<T> {
        let y = self.s_chol.solve(f2);
        let lifted = op.t.mul_vec_transpose(&y);
        let g: Vec<T> = f1.iter().zip(&lifted).map(|(&a, &b)| a + b).collect();
        let u = self.m_chol.solve(&g);
        let tu = op.t.mul_vec(&u);
        let r: Vec<T> = tu.iter().zip(f2).map(|(&a, &b)| a - b).collect();
        let v = self.s_chol.solve(&r);
        StateVector { u, v }
    }

    /// `||M||_∞ / λ_min(M)` with `λ_min` from a few steps of inverse iteration.
    pub fn condition_estimate(&self) -> T {
        let n = self.m_chol.n();
        let mut x: Vec<T> = (0..n)
            .map(|i| T::one() + T::lit(0.5) * T::from_count(i % 3))
            .collect();
        let mut growth = T::zero();
        for _ in 0..24 {
            let nx = norm2(&x);
            x.iter_mut().for_each(|xi| *xi = *xi / nx);
            let y = self.m_chol.solve(&x);
            growth = norm2(&y);
            x = y;
        }
        self.m_norm * growth
    }
}

/// Elimination solver for one operator, memoizing factorizations per shift.
///
/// The memo only avoids refactoring; results are identical to building a
/// fresh [`SchurFactorization`] for every call.
pub struct SchurSolver<'a, T> {
    op: &'a BlockOperator<T>,
    condition_cap: T,
    cache: Mutex<HashMap<u64, Arc<SchurFactorization<T>>>>,
}

impl<'a, T: Scalar> SchurSolver<'a, T> {
    pub fn new(op: &'a BlockOperator<T>) -> Self {
        Self {
            op,
            condition_cap: T::lit(DEFAULT_CONDITION_CAP),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_condition_cap(mut self, cap: T) -> Self {
        self.condition_cap = cap;
        self
    }

    pub fn operator(&self) -> &BlockOperator<T> {
        self.op
    }

    pub fn factorization(&self, shift: T) -> Result<Arc<SchurFactorization<T>>> {
        if shift < T::zero() {
            return Err(Error::NegativeShiftUnsupported(shift.as_f64()));
        }
        let key = shift.as_f64().to_bits();
        if let Some(f) = self.cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(f));
        }
        let f = Arc::new(SchurFactorization::new(self.op, shift)?);
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&f));
        Ok(f)
    }

    pub fn solve(&self, rhs: &RhsPair<T>) -> Result<SolveReport<T>> {
        let n = self.op.n();
        for (what, len) in [("F1", rhs.f1.len()), ("F2", rhs.f2.len())] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: n,
                    found: len,
                });
            }
        }
        let fact = self.factorization(T::zero())?;
        let solution = fact.solve(self.op, &rhs.f1, &rhs.f2);
        let hx = self.op.apply(&solution)?;
        let residual_norm = hx
            .u
            .iter()
            .zip(&rhs.f1)
            .chain(hx.v.iter().zip(&rhs.f2))
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt();
        let schur_condition_estimate = fact.condition_estimate();
        Ok(SolveReport {
            solution,
            residual_norm,
            schur_condition_estimate,
            ill_conditioned: !(schur_condition_estimate <= self.condition_cap),
        })
    }
}

impl<T: Scalar> BlockOperator<T> {
    /// Solves `H (u, v) = (F1, F2)` by Schur elimination. Requires
    /// `M_0 ≻ 0`.
    pub fn solve(&self, rhs: &RhsPair<T>) -> Result<SolveReport<T>> {
        SchurSolver::new(self).solve(rhs)
    }

    /// `H - σ I`, which keeps the block structure with `S + σ` and
    /// `c1 + σ` for `σ >= 0`.
    pub fn shifted(&self, sigma: T) -> Result<Self> {
        if !(sigma >= T::zero()) {
            return Err(Error::NegativeShiftUnsupported(sigma.as_f64()));
        }
        Ok(Self {
            p: self.p.shift_diagonal(-sigma),
            q: self.q.clone(),
            t: self.t.clone(),
            s: self.s.shift_diagonal(sigma),
            c1: self.c1 + sigma,
        })
    }

    fn symmetry_rhs(&self, s_chol: &BandCholesky<T>, w: &StateVector<T>, wt: &StateVector<T>) -> T {
        let k_u = s_chol.solve(&self.t.mul_vec(&w.u));
        let k_ut = s_chol.solve(&self.t.mul_vec(&wt.u));
        // M_0 u through P u + Tᵀ (S⁻¹ T u), never forming M_0
        let m0u: Vec<T> = self
            .p
            .mul_vec(&w.u)
            .iter()
            .zip(self.t.mul_vec_transpose(&k_u))
            .map(|(&a, b)| a + b)
            .collect();
        let z: Vec<T> = w.v.iter().zip(&k_u).map(|(&a, &b)| a - b).collect();
        let zt: Vec<T> = wt.v.iter().zip(&k_ut).map(|(&a, &b)| a - b).collect();
        dot(&m0u, &wt.u) - dot(&self.s.mul_vec(&z), &zt)
    }

    pub fn symmetry_identity_check(
        &self,
        w: &StateVector<T>,
        wt: &StateVector<T>,
    ) -> Result<SymmetryCheck<T>> {
        let hw = self.apply(w)?;
        self.apply(wt)?;
        let lhs = hw.dot(wt);
        let s_chol = self.factor_s(T::zero())?;
        let rhs = self.symmetry_rhs(&s_chol, w, wt);
        let rhs_swapped = self.symmetry_rhs(&s_chol, wt, w);
        let scale = T::one() + rhs.abs().max(rhs_swapped.abs());
        Ok(SymmetryCheck {
            lhs,
            rhs,
            absdiff: (lhs - rhs).abs(),
            rhs_swapped,
            symmetric: (rhs - rhs_swapped).abs() <= T::lit(1e-10) * scale,
        })
    }

    /// The `k` eigenpairs of `H` nearest `sigma`, sorted by eigenvalue, by
    /// shift-invert subspace iteration with Rayleigh-Ritz extraction.
    ///
    /// Each returned pair satisfies `||H x - λ x|| <= tol (1 + |λ|)` with
    /// `||x|| = 1`. Requires `M_σ ≻ 0`, i.e. `sigma` below the lowest gap
    /// eigenvalue; if the factorization breaks down the shift is nudged
    /// down by `1e-6 (1 + |σ|)` once before giving up.
    pub fn gap_eigenvalues(
        &self,
        sigma: T,
        k: usize,
        tol: T,
        opts: &EigenOptions,
    ) -> Result<Vec<(T, StateVector<T>)>> {
        if !(sigma >= T::zero()) {
            return Err(Error::NegativeShiftUnsupported(sigma.as_f64()));
        }
        let dim = 2 * self.n();
        if k == 0 || k > dim {
            return Err(Error::InvalidArgument(format!(
                "requested {k} eigenpairs of an operator of dimension {dim}"
            )));
        }
        let fact = match SchurFactorization::new(self, sigma) {
            Ok(f) => f,
            Err(Error::HypothesisFailed(msg)) => {
                let jittered = sigma - T::lit(1e-6) * (T::one() + sigma.abs());
                if jittered < T::zero() {
                    return Err(Error::HypothesisFailed(msg));
                }
                SchurFactorization::new(self, jittered)?
            }
            Err(e) => return Err(e),
        };
        let shift = fact.shift();
        let p = dim.min((2 * k).max(k + opts.extra_vectors));

        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let random_vector = |rng: &mut ChaCha8Rng| -> Vec<T> {
            (0..dim).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()
        };
        let mut x: Vec<Vec<T>> = (0..p).map(|_| random_vector(&mut rng)).collect();
        let mut worst = T::infinity();

        for _ in 0..opts.max_iterations {
            let y: Vec<Vec<T>> = x
                .iter()
                .map(|col| {
                    let w = StateVector::from_stacked(col);
                    fact.solve(self, &w.u, &w.v).stacked()
                })
                .collect();
            let q = orthonormalize(y, || random_vector(&mut rng));
            let hq: Vec<Vec<T>> = q
                .iter()
                .map(|col| self.apply(&StateVector::from_stacked(col)).unwrap().stacked())
                .collect();
            let mut g = DenseMatrix::zeros(p, p);
            for i in 0..p {
                for j in i..p {
                    let v = (dot(&q[i], &hq[j]) + dot(&q[j], &hq[i])) / T::lit(2.0);
                    g[(i, j)] = v;
                    g[(j, i)] = v;
                }
            }
            let (theta, wmat) = g.symmetric_eigen();
            let combine = |basis: &[Vec<T>], col: usize| -> Vec<T> {
                let mut out = vec![T::zero(); dim];
                for (b, vec) in basis.iter().enumerate() {
                    let c = wmat[(b, col)];
                    for (o, &e) in out.iter_mut().zip(vec) {
                        *o = *o + c * e;
                    }
                }
                out
            };
            let mut order: Vec<usize> = (0..p).collect();
            order.sort_by(|&a, &b| {
                let da = (theta[a] - shift).abs();
                let db = (theta[b] - shift).abs();
                da.partial_cmp(&db)
                    .unwrap()
                    .then(theta[a].partial_cmp(&theta[b]).unwrap())
            });
            let ritz: Vec<Vec<T>> = order.iter().map(|&c| combine(&q, c)).collect();
            let h_ritz: Vec<Vec<T>> = order.iter().take(k).map(|&c| combine(&hq, c)).collect();

            worst = T::zero();
            let mut converged = true;
            for (i, &c) in order.iter().take(k).enumerate() {
                let lam = theta[c];
                let res: T = ritz[i]
                    .iter()
                    .zip(&h_ritz[i])
                    .map(|(&xv, &hv)| (hv - lam * xv) * (hv - lam * xv))
                    .sum::<T>()
                    .sqrt();
                worst = worst.max(res / (T::one() + lam.abs()));
                converged &= res <= tol * (T::one() + lam.abs());
            }
            if converged {
                let mut pairs: Vec<(T, StateVector<T>)> = order
                    .iter()
                    .take(k)
                    .zip(&ritz)
                    .map(|(&c, v)| (theta[c], StateVector::from_stacked(v)))
                    .collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                return Ok(pairs);
            }
            x = ritz;
        }
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual: worst.as_f64(),
        })
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass; columns that
/// collapse are replaced by fresh vectors from `refill`.
fn orthonormalize<T: Scalar>(mut cols: Vec<Vec<T>>, mut refill: impl FnMut() -> Vec<T>) -> Vec<Vec<T>> {
    let tiny = T::lit(1e-10);
    for j in 0..cols.len() {
        let mut attempts = 0;
        loop {
            let before = norm2(&cols[j]);
            for _ in 0..2 {
                for i in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let c = dot(&done[i], &rest[0]);
                    for (x, &qi) in rest[0].iter_mut().zip(&done[i]) {
                        *x = *x - c * qi;
                    }
                }
            }
            let after = norm2(&cols[j]);
            if after > tiny * before && after > T::zero() {
                cols[j].iter_mut().for_each(|x| *x = *x / after);
                break;
            }
            attempts += 1;
            assert!(attempts < 16, "cannot extend orthonormal basis");
            cols[j] = refill();
        }
    }
    cols
}
