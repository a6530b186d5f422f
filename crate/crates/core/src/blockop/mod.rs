//! Symmetric indefinite 2x2 block operators
//!
//! ```text
//!     H = | P   Q |      Q = Tᵀ,  P = Pᵀ,  S = Sᵀ,  S >= c1 I > 0
//!         | T  -S |
//! ```
//!
//! together with the Schur-complement forms
//! `M_α = (P - α I) + Tᵀ (S + α I)⁻¹ T`, their positivity margins, the
//! critical constant `c2` (largest `α` with `M_α ⪰ 0`) and the embedding
//! estimate `M_0 ⪰ δ (I + KᵀK)`, `K = S⁻¹T`.

mod text;

use crate::error::{Error, Result};
use crate::linalg::{lambda_max, lambda_min, BandCholesky, BandMatrix, DenseMatrix};
use crate::scalar::{dot, Scalar};

/// Relative PSD acceptance threshold: `M ⪰ 0` iff `λ_min(M) >= -ε (1 + ||M||_∞)`.
pub const DEFAULT_PSD_EPS: f64 = 1e-9;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-8;
/// Largest full-operator dimension `2N` handled by dense oracles.
pub const DEFAULT_DENSE_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub bisection: T,
    pub psd_eps: T,
    pub dense_cap: usize,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            bisection: T::lit(DEFAULT_BISECTION_TOL),
            psd_eps: T::lit(DEFAULT_PSD_EPS),
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Negative slack allowed on `λ_min` of a matrix with the given norm.
    pub fn psd_slack(&self, norm: T) -> T {
        self.psd_eps * (T::one() + norm)
    }
}

/// How the lower bound `c1` on the spectrum of `S` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum C1Policy<T> {
    /// `c1 = λ_min(S)`.
    Compute,
    /// Caller-supplied bound, verified against `λ_min(S)`.
    Asserted(T),
}

/// Pair `(u, v)` of upper and lower components.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Scalar> StateVector<T> {
    pub fn new(u: Vec<T>, v: Vec<T>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                what: "state vector components",
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Self { u, v })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            u: vec![T::zero(); n],
            v: vec![T::zero(); n],
        }
    }

    /// Splits a stacked vector `[u; v]` of even length.
    pub fn from_stacked(x: &[T]) -> Self {
        assert!(x.len().is_multiple_of(2), "stacked vector must have even length");
        let n = x.len() / 2;
        Self {
            u: x[..n].to_vec(),
            v: x[n..].to_vec(),
        }
    }

    pub fn stacked(&self) -> Vec<T> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn dot(&self, other: &Self) -> T {
        dot(&self.u, &other.u) + dot(&self.v, &other.v)
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }
}

/// Positivity margin of `q_α`: the smallest eigenvalue of `M_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormReport<T> {
    pub alpha: T,
    pub margin: T,
    /// `|λ_max / λ_min|` of `M_α`, infinite when `λ_min <= 0`.
    pub form_matrix_condition: T,
}

/// Outcome of the discrete embedding check `M_0 - δ (I + KᵀK) ⪰ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Embedding<T> {
    pub delta: T,
    pub c2: T,
    pub lambda_min: T,
    pub certified: bool,
}

/// The blocks of `H` on a space of dimension `2N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator<T> {
    pub(crate) p: BandMatrix<T>,
    pub(crate) q: BandMatrix<T>,
    pub(crate) t: BandMatrix<T>,
    pub(crate) s: BandMatrix<T>,
    pub(crate) c1: T,
}

fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha >= T::zero() {
        Ok(())
    } else {
        Err(Error::NegativeAlpha(alpha.as_f64()))
    }
}

impl<T: Scalar> BlockOperator<T> {
    /// Builds `H` from `P`, `T` and `S`; `Q` is set to `Tᵀ`.
    pub fn assemble(
        p: BandMatrix<T>,
        t: BandMatrix<T>,
        s: BandMatrix<T>,
        c1_policy: C1Policy<T>,
    ) -> Result<Self> {
        let n = p.n();
        if n == 0 {
            return Err(Error::InvalidArgument("empty block operator".into()));
        }
        check_dim("T", n, t.n())?;
        check_dim("S", n, s.n())?;
        if !p.is_symmetric() {
            return Err(Error::NotSymmetric { block: "P" });
        }
        if !s.is_symmetric() {
            return Err(Error::NotSymmetric { block: "S" });
        }
        let s_min = if s.is_diagonal() {
            s.diagonal().into_iter().fold(T::infinity(), T::min)
        } else {
            lambda_min(&s)
        };
        if !(s_min > T::zero()) {
            return Err(Error::NonPositiveS {
                lambda_min: s_min.as_f64(),
            });
        }
        let c1 = match c1_policy {
            C1Policy::Compute => s_min,
            C1Policy::Asserted(c) => {
                // s_min is exact for diagonal S and accurate to about ε‖S‖ otherwise
                let slack = T::lit(64.0) * T::epsilon() * (T::one() + s.inf_norm());
                let verified = c > T::zero()
                    && (c <= s_min || BandCholesky::factor(&s, c).is_ok() || !s.is_diagonal() && c <= s_min + slack);
                if !verified {
                    return Err(Error::InvalidC1 {
                        asserted: c.as_f64(),
                        lambda_min: s_min.as_f64(),
                    });
                }
                c
            }
        };
        let q = t.transpose();
        Ok(Self { p, q, t, s, c1 })
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn p(&self) -> &BandMatrix<T> {
        &self.p
    }

    pub fn q(&self) -> &BandMatrix<T> {
        &self.q
    }

    pub fn t(&self) -> &BandMatrix<T> {
        &self.t
    }

    pub fn s(&self) -> &BandMatrix<T> {
        &self.s
    }

    pub fn c1(&self) -> T {
        self.c1
    }

    /// Re-checks the structural hypotheses: `Q = Tᵀ` exactly, `P`, `S`
    /// symmetric, and `S - c1 I` positive semidefinite.
    pub fn validate(&self) -> Result<()> {
        if self.q != self.t.transpose() {
            return Err(Error::HypothesisFailed("Q is not the transpose of T".into()));
        }
        if !self.p.is_symmetric() {
            return Err(Error::NotSymmetric { block: "P" });
        }
        if !self.s.is_symmetric() {
            return Err(Error::NotSymmetric { block: "S" });
        }
        let s_min = lambda_min(&self.s);
        let slack = Tolerances::default().psd_slack(self.s.inf_norm());
        if !(self.c1 > T::zero()) || s_min < self.c1 - slack {
            return Err(Error::InvalidC1 {
                asserted: self.c1.as_f64(),
                lambda_min: s_min.as_f64(),
            });
        }
        Ok(())
    }

    /// `H (u, v) = (P u + Q v, T u - S v)`.
    pub fn apply(&self, w: &StateVector<T>) -> Result<StateVector<T>> {
        check_dim("u", self.n(), w.u.len())?;
        check_dim("v", self.n(), w.v.len())?;
        let pu = self.p.mul_vec(&w.u);
        let qv = self.q.mul_vec(&w.v);
        let tu = self.t.mul_vec(&w.u);
        let sv = self.s.mul_vec(&w.v);
        Ok(StateVector {
            u: pu.iter().zip(&qv).map(|(&a, &b)| a + b).collect(),
            v: tu.iter().zip(&sv).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// The full `2N x 2N` matrix of `H`, exactly symmetric.
    pub fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.n();
        let mut h = DenseMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in self.p.row_range(i) {
                h[(i, j)] = self.p.get(i, j);
            }
            for j in self.q.row_range(i) {
                h[(i, n + j)] = self.q.get(i, j);
            }
            for j in self.t.row_range(i) {
                h[(n + i, j)] = self.t.get(i, j);
            }
            for j in self.s.row_range(i) {
                h[(n + i, n + j)] = -self.s.get(i, j);
            }
        }
        h
    }

    /// Cholesky factor of `S + α I`.
    pub(crate) fn factor_s(&self, alpha: T) -> Result<BandCholesky<T>> {
        BandCholesky::factor(&self.s, -alpha).map_err(|_| Error::NonPositiveS {
            lambda_min: lambda_min(&self.s).as_f64(),
        })
    }

    /// Columns of `(S + α I)⁻¹ T`, by factor-and-solve.
    fn resolvent_times_t(&self, chol: &BandCholesky<T>) -> DenseMatrix<T> {
        let n = self.n();
        let cols: Vec<Vec<T>> = (0..n)
            .map(|j| {
                let col: Vec<T> = (0..n).map(|i| self.t.get(i, j)).collect();
                chol.solve(&col)
            })
            .collect();
        DenseMatrix::from_columns(&cols)
    }

    /// `Tᵀ W T` for `W = (S + α I)⁻¹` (`power = 1`) or `W = (S + α I)⁻²`
    /// (`power = 2`), exactly symmetric.
    fn t_resolvent_t(&self, alpha: T, power: u32) -> Result<BandMatrix<T>> {
        if self.s.is_diagonal() {
            let w: Vec<T> = self
                .s
                .diagonal()
                .into_iter()
                .map(|d| (d + alpha).powi(-(power as i32)))
                .collect();
            return Ok(self.t.weighted_gram(&w));
        }
        let chol = self.factor_s(alpha)?;
        let x = self.resolvent_times_t(&chol);
        let n = self.n();
        let mut g = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = match power {
                    1 => (0..n).map(|k| self.t.get(k, i) * x[(k, j)]).sum(),
                    _ => (0..n).map(|k| x[(k, i)] * x[(k, j)]).sum(),
                };
                g[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                // average to remove rounding asymmetry of the solve path
                let avg = if power == 1 {
                    let other: T = (0..n).map(|k| self.t.get(k, j) * x[(k, i)]).sum();
                    (g[i * n + j] + other) / T::lit(2.0)
                } else {
                    g[i * n + j]
                };
                g[i * n + j] = avg;
                g[j * n + i] = avg;
            }
        }
        Ok(BandMatrix::from_row_major(n, &g))
    }

    /// `M_α = (P - α I) + Tᵀ (S + α I)⁻¹ T`; `M_0` is the Schur complement
    /// of `-S` in `H`.
    pub fn schur_form_matrix(&self, alpha: T) -> Result<BandMatrix<T>> {
        check_alpha(alpha)?;
        let coupling = self.t_resolvent_t(alpha, 1)?;
        Ok(self.p.shift_diagonal(-alpha).add(&coupling))
    }

    /// `λ_min(M_α)`; nonnegative values certify `q_α >= 0`.
    pub fn positivity_margin(&self, alpha: T) -> Result<T> {
        Ok(lambda_min(&self.schur_form_matrix(alpha)?))
    }

    pub fn form_report(&self, alpha: T) -> Result<FormReport<T>> {
        let m = self.schur_form_matrix(alpha)?;
        let margin = lambda_min(&m);
        let form_matrix_condition = if margin > T::zero() {
            (lambda_max(&m) / margin).abs()
        } else {
            T::infinity()
        };
        Ok(FormReport {
            alpha,
            margin,
            form_matrix_condition,
        })
    }

    /// `q_α(u, u) = ((S + α)⁻¹ T u, T u) + ((P - α) u, u)`, evaluated by
    /// solving with `S + α` rather than through `M_α`.
    pub fn quadratic_form(&self, alpha: T, u: &[T]) -> Result<T> {
        check_alpha(alpha)?;
        check_dim("u", self.n(), u.len())?;
        let tu = self.t.mul_vec(u);
        let y = self.factor_s(alpha)?.solve(&tu);
        let pu = self.p.mul_vec(u);
        Ok(dot(&y, &tu) + dot(&pu, u) - alpha * dot(u, u))
    }

    fn is_form_positive(&self, alpha: T) -> Result<bool> {
        let m = self.schur_form_matrix(alpha)?;
        Ok(BandCholesky::factor(&m, T::zero()).is_ok())
    }

    /// Largest `c2 >= 0` with `M_{c2} ⪰ 0`, bracketed in `[0, λ_min(M_0)]`
    /// (the margin drops at least as fast as `α` grows) and bisected to
    /// width `tol`. Returns the lower end of the final bracket.
    pub fn find_c2(&self, tol: T) -> Result<T> {
        if !(tol > T::zero()) {
            return Err(Error::InvalidArgument("bisection tolerance must be positive".into()));
        }
        let m0 = self.positivity_margin(T::zero())?;
        if !(m0 > T::zero()) {
            return Err(Error::HypothesisFailed(format!(
                "Hardy-type positivity fails: the Schur complement form q_0 is not positive \
                 definite (lambda_min(M_0) = {:e})",
                m0.as_f64()
            )));
        }
        let mut lo = T::zero();
        let mut hi = m0;
        if self.is_form_positive(hi)? {
            return Ok(hi);
        }
        while hi - lo > tol {
            let mid = lo + (hi - lo) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.is_form_positive(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Independent route to `c2`: the `(N+1)`-th smallest eigenvalue of the
    /// dense `H`. By inertia additivity `M_α ⪰ 0` exactly when `α` does not
    /// exceed it.
    pub fn inertia_c2_oracle(&self, dense_cap: usize) -> Result<T> {
        let n = self.n();
        if 2 * n > dense_cap {
            return Err(Error::TooLarge {
                dim: 2 * n,
                cap: dense_cap,
            });
        }
        Ok(self.to_dense().symmetric_eigenvalues()[n])
    }

    /// `δ = c1 c2 / (c1 + c2)` and the check `λ_min(M_0 - δ (I + KᵀK)) >= -ε`.
    pub fn embedding_delta(&self, tol: &Tolerances<T>) -> Result<Embedding<T>> {
        let c2 = self.find_c2(tol.bisection)?;
        if !(c2 > T::zero()) {
            return Err(Error::HypothesisFailed(format!(
                "embedding needs c2 > 0, found c2 = {:e}",
                c2.as_f64()
            )));
        }
        let delta = self.c1 * c2 / (self.c1 + c2);
        let m0 = self.schur_form_matrix(T::zero())?;
        let ktk = self.t_resolvent_t(T::zero(), 2)?;
        let e = m0.add(&ktk.shift_diagonal(T::one()).scaled(-delta));
        let lambda = lambda_min(&e);
        Ok(Embedding {
            delta,
            c2,
            lambda_min: lambda,
            certified: lambda >= -tol.psd_slack(e.inf_norm()),
        })
    }

    /// Checks `S⁻¹ - (S + α)⁻¹ ⪰ δ S⁻²` for `0 < δ <= c1 α / (c1 + α)`.
    pub fn resolvent_difference_check(&self, alpha: T, delta: T, psd_eps: T) -> Result<bool> {
        if !(alpha > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {:e}",
                alpha.as_f64()
            )));
        }
        if !(delta > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {:e}",
                delta.as_f64()
            )));
        }
        let bound = self.c1 * alpha / (self.c1 + alpha);
        if delta > bound {
            return Err(Error::DeltaOutOfRange {
                delta: delta.as_f64(),
                bound: bound.as_f64(),
            });
        }
        let n = self.n();
        let r = if self.s.is_diagonal() {
            let d: Vec<T> = self
                .s
                .diagonal()
                .into_iter()
                .map(|s| s.recip() - (s + alpha).recip() - delta / (s * s))
                .collect();
            BandMatrix::from_diagonal(&d)
        } else {
            let identity: Vec<Vec<T>> = (0..n)
                .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
                .collect();
            let s_chol = self.factor_s(T::zero())?;
            let sa_chol = self.factor_s(alpha)?;
            let s_inv = DenseMatrix::from_columns(
                &identity.iter().map(|e| s_chol.solve(e)).collect::<Vec<_>>(),
            );
            let sa_inv = DenseMatrix::from_columns(
                &identity.iter().map(|e| sa_chol.solve(e)).collect::<Vec<_>>(),
            );
            let s_inv2 = s_inv.mul(&s_inv);
            let mut r = vec![T::zero(); n * n];
            for i in 0..n {
                for j in i..n {
                    let x = |a: usize, b: usize| {
                        s_inv[(a, b)] - sa_inv[(a, b)] - delta * s_inv2[(a, b)]
                    };
                    let v = (x(i, j) + x(j, i)) / T::lit(2.0);
                    r[i * n + j] = v;
                    r[j * n + i] = v;
                }
            }
            BandMatrix::from_row_major(n, &r)
        };
        let slack = psd_eps * (T::one() + r.inf_norm());
        Ok(lambda_min(&r) >= -slack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar_op(p: f64, t: f64, s: f64) -> BlockOperator<f64> {
        BlockOperator::assemble(
            BandMatrix::from_diagonal(&[p]),
            BandMatrix::from_diagonal(&[t]),
            BandMatrix::from_diagonal(&[s]),
            C1Policy::Compute,
        )
        .unwrap()
    }

    fn root_2_1_1() -> f64 {
        (1.0 + 13f64.sqrt()) / 2.0
    }

    #[test]
    fn assemble_scalar_case() {
        let b = scalar_op(2.0, 1.0, 1.0);
        assert_eq!(b.q().get(0, 0), 1.0);
        assert_eq!(b.c1(), 1.0);
        assert!(b.validate().is_ok());
    }

    #[test]
    fn assemble_rejects_negative_s() {
        let err = BlockOperator::assemble(
            BandMatrix::from_diagonal(&[1.0]),
            BandMatrix::from_diagonal(&[1.0]),
            BandMatrix::from_diagonal(&[-1.0]),
            C1Policy::Compute,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveS { .. }));
        assert!(err.is_hypothesis_violation());
    }

    #[test]
    fn assemble_diagonal_case() {
        let b = BlockOperator::assemble(
            BandMatrix::identity(2),
            BandMatrix::zeros(2, 0, 0),
            BandMatrix::identity(2).scaled(2.0),
            C1Policy::Compute,
        )
        .unwrap();
        assert_eq!(b.c1(), 2.0);
        assert_eq!(b.q().to_row_major(), vec![0.0; 4]);
    }

    #[test]
    fn assemble_dimension_and_symmetry_errors() {
        let err = BlockOperator::assemble(
            BandMatrix::<f64>::identity(2),
            BandMatrix::identity(3),
            BandMatrix::identity(2),
            C1Policy::Compute,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let err = BlockOperator::assemble(
            BandMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]),
            BandMatrix::identity(2),
            BandMatrix::identity(2),
            C1Policy::Compute,
        )
        .unwrap_err();
        assert_eq!(err, Error::NotSymmetric { block: "P" });
    }

    #[test]
    fn asserted_c1_is_verified() {
        let mk = |c| {
            BlockOperator::assemble(
                BandMatrix::identity(2),
                BandMatrix::identity(2),
                BandMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
                C1Policy::Asserted(c),
            )
        };
        assert_eq!(mk(0.9).unwrap().c1(), 0.9);
        assert!(matches!(mk(1.1), Err(Error::InvalidC1 { .. })));
        assert!(matches!(mk(-1.0), Err(Error::InvalidC1 { .. })));
    }

    #[test]
    fn apply_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        let w = StateVector::new(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(b.apply(&w).unwrap(), StateVector::new(vec![3.0], vec![0.0]).unwrap());
        assert_eq!(b.apply(&StateVector::zeros(1)).unwrap(), StateVector::zeros(1));

        let dec = BlockOperator::assemble(
            BandMatrix::identity(3),
            BandMatrix::zeros(3, 0, 0),
            BandMatrix::identity(3),
            C1Policy::Compute,
        )
        .unwrap();
        let w = StateVector::new(vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 4.0]).unwrap();
        let hw = dec.apply(&w).unwrap();
        assert_eq!(hw.u, w.u);
        assert_eq!(hw.v, vec![1.0, -0.5, -4.0]);
        assert!(matches!(
            dec.apply(&StateVector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn schur_form_matrix_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        assert_eq!(b.schur_form_matrix(0.0).unwrap().get(0, 0), 3.0);
        assert_eq!(b.schur_form_matrix(1.0).unwrap().get(0, 0), 1.5);
        assert_eq!(b.schur_form_matrix(-0.1), Err(Error::NegativeAlpha(-0.1)));

        let free = BlockOperator::assemble(
            BandMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]),
            BandMatrix::zeros(2, 0, 0),
            BandMatrix::identity(2),
            C1Policy::Compute,
        )
        .unwrap();
        let m = free.schur_form_matrix(0.5).unwrap();
        assert_eq!(m.to_row_major(), vec![2.5, 1.0, 1.0, 1.5]);
    }

    #[test]
    fn positivity_margin_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        assert_relative_eq!(b.positivity_margin(0.0).unwrap(), 3.0, epsilon = 1e-14);
        assert!(b.positivity_margin(root_2_1_1()).unwrap().abs() < 1e-12);
        let id = BlockOperator::assemble(
            BandMatrix::identity(4),
            BandMatrix::zeros(4, 0, 0),
            BandMatrix::identity(4),
            C1Policy::Compute,
        )
        .unwrap();
        assert_eq!(id.positivity_margin(0.0).unwrap(), 1.0);
    }

    #[test]
    fn find_c2_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        let c2 = b.find_c2(1e-8).unwrap();
        assert!((c2 - root_2_1_1()).abs() <= 1e-8);
        assert!(c2 <= root_2_1_1());

        let free = BlockOperator::assemble(
            BandMatrix::identity(3).scaled(5.0),
            BandMatrix::zeros(3, 0, 0),
            BandMatrix::identity(3),
            C1Policy::Compute,
        )
        .unwrap();
        assert!((free.find_c2(1e-8f64).unwrap() - 5.0).abs() <= 1e-8);

        let bad = scalar_op(-2.0, 1.0, 1.0);
        assert!(matches!(bad.find_c2(1e-8), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn inertia_oracle_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        assert_relative_eq!(b.inertia_c2_oracle(1000).unwrap(), root_2_1_1(), epsilon = 1e-14);
        let dec = scalar_op(1.0, 0.0, 1.0);
        assert_relative_eq!(dec.inertia_c2_oracle(1000).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(
            b.inertia_c2_oracle(1),
            Err(Error::TooLarge { dim: 2, cap: 1 })
        );
    }

    #[test]
    fn embedding_examples() {
        let b = scalar_op(2.0, 1.0, 1.0);
        let e = b.embedding_delta(&Tolerances::default()).unwrap();
        assert!((e.delta - root_2_1_1() / (1.0 + root_2_1_1())).abs() < 1e-8);
        assert!((e.lambda_min - (3.0 - 2.0 * e.delta)).abs() < 1e-8);
        assert!((e.lambda_min - 1.605551).abs() < 1e-6);
        assert!(e.certified);

        let free = scalar_op(5.0, 0.0, 1.0);
        let e = free.embedding_delta(&Tolerances::default()).unwrap();
        assert!((e.delta - 5.0 / 6.0).abs() < 1e-8);
        assert!(e.certified);
    }

    #[test]
    fn resolvent_difference_examples() {
        let one = scalar_op(1.0, 0.0, 1.0);
        assert!(one.resolvent_difference_check(1.0, 0.5, 1e-9).unwrap());
        assert!(one.resolvent_difference_check(1.0, 0.25, 1e-9).unwrap());
        assert!(matches!(
            one.resolvent_difference_check(1.0, 0.6, 1e-9),
            Err(Error::DeltaOutOfRange { .. })
        ));
        let two = BlockOperator::assemble(
            BandMatrix::identity(3),
            BandMatrix::zeros(3, 0, 0),
            BandMatrix::identity(3).scaled(2.0),
            C1Policy::Compute,
        )
        .unwrap();
        assert!(two.resolvent_difference_check(2.0, 1.0, 1e-9).unwrap());
    }

    #[test]
    fn dense_s_path_matches_hand_computation() {
        // S = [[2,1],[1,2]], T = I, P = 0 -> M_0 = S⁻¹ = [[2,-1],[-1,2]] / 3
        let b = BlockOperator::assemble(
            BandMatrix::zeros(2, 0, 0),
            BandMatrix::identity(2),
            BandMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
            C1Policy::Compute,
        )
        .unwrap();
        assert_relative_eq!(b.c1(), 1.0, epsilon = 1e-12);
        let m = b.schur_form_matrix(0.0).unwrap();
        assert!(m.is_symmetric());
        assert_relative_eq!(m.get(0, 0), 2.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(m.get(0, 1), -1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(b.positivity_margin(0.0).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        // M_α has eigenvalues 1/(3+α) - α and 1/(1+α) - α
        let c2_exact = (-3.0 + 13f64.sqrt()) / 2.0;
        assert!((b.find_c2(1e-10).unwrap() - c2_exact).abs() < 1e-9);
        assert!((b.inertia_c2_oracle(1000).unwrap() - c2_exact).abs() < 1e-12);
    }

    #[test]
    fn form_report_condition() {
        let b = BlockOperator::assemble(
            BandMatrix::from_diagonal(&[1.0, 4.0]),
            BandMatrix::zeros(2, 0, 0),
            BandMatrix::identity(2),
            C1Policy::Compute,
        )
        .unwrap();
        let r = b.form_report(0.0).unwrap();
        assert_relative_eq!(r.margin, 1.0);
        assert_relative_eq!(r.form_matrix_condition, 4.0, epsilon = 1e-12);
        assert!(b.form_report(2.0f64).unwrap().form_matrix_condition.is_infinite());
    }

    #[test]
    fn quadratic_form_two_paths() {
        let b = BlockOperator::assemble(
            BandMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, -1.0]]),
            BandMatrix::from_rows(&[vec![1.0, 2.0], vec![-1.0, 0.5]]),
            BandMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]),
            C1Policy::Compute,
        )
        .unwrap();
        let u = [0.3, -1.2];
        for alpha in [0.0, 0.7, 2.0] {
            let m = b.schur_form_matrix(alpha).unwrap();
            let via_matrix = dot(&m.mul_vec(&u), &u);
            assert_relative_eq!(b.quadratic_form(alpha, &u).unwrap(), via_matrix, max_relative = 1e-12);
        }
    }

    #[test]
    fn single_precision_scalar_case() {
        let b = BlockOperator::<f32>::assemble(
            BandMatrix::from_diagonal(&[2.0]),
            BandMatrix::from_diagonal(&[1.0]),
            BandMatrix::from_diagonal(&[1.0]),
            C1Policy::Compute,
        )
        .unwrap();
        let c2 = b.find_c2(1e-5).unwrap();
        assert!((c2 - 2.302_775_6).abs() < 1e-4);
    }
}
