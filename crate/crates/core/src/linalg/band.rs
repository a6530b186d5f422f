use std::ops::Range;

use crate::scalar::Scalar;

/// Square matrix stored by rows inside a band `j - i in [-kl, ku]`.
///
/// Dense matrices are the special case `kl = ku = n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let cap = n.saturating_sub(1);
        let (kl, ku) = (kl.min(cap), ku.min(cap));
        Self {
            n,
            kl,
            ku,
            data: vec![T::zero(); n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        Self {
            n: diag.len(),
            kl: 0,
            ku: 0,
            data: diag.to_vec(),
        }
    }

    /// Builds a band matrix from `n * n` row-major entries, using the tightest
    /// band that holds every nonzero entry.
    pub fn from_row_major(n: usize, entries: &[T]) -> Self {
        assert_eq!(entries.len(), n * n, "expected {n}x{n} entries");
        let (mut kl, mut ku) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                if entries[i * n + j] != T::zero() {
                    if i > j {
                        kl = kl.max(i - j);
                    } else {
                        ku = ku.max(j - i);
                    }
                }
            }
        }
        let mut m = Self::zeros(n, kl, ku);
        for i in 0..n {
            for j in m.row_range(i) {
                m.set(i, j, entries[i * n + j]);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let flat: Vec<T> = rows
            .iter()
            .inspect(|r| assert_eq!(r.len(), n, "rows must be square"))
            .flatten()
            .copied()
            .collect();
        Self::from_row_major(n, &flat)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    #[inline]
    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    pub fn is_diagonal(&self) -> bool {
        self.kl == 0 && self.ku == 0
    }

    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    /// Column indices of the stored band in row `i`.
    #[inline]
    pub fn row_range(&self, i: usize) -> Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if i < self.n && j < self.n && self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            T::zero()
        }
    }

    /// Panics if `(i, j)` lies outside the stored band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(
            i < self.n && j < self.n && self.in_band(i, j),
            "({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn to_row_major(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.n * self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                out[i * self.n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `selfᵀ x`
    pub fn mul_vec_transpose(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            let xi = x[i];
            for j in self.row_range(i) {
                y[j] = y[j] + self.get(i, j) * xi;
            }
        }
        y
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n, self.ku, self.kl);
        for i in 0..self.n {
            for j in self.row_range(i) {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self + shift * I`
    pub fn shift_diagonal(&self, shift: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let k = m.idx(i, i);
            m.data[k] = m.data[k] + shift;
        }
        m
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            data: self.data.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = Self::zeros(self.n, self.kl.max(other.kl), self.ku.max(other.ku));
        for src in [self, other] {
            for i in 0..src.n {
                for j in src.row_range(i) {
                    let k = m.idx(i, j);
                    m.data[k] = m.data[k] + src.get(i, j);
                }
            }
        }
        m
    }

    /// Exact entrywise symmetry.
    pub fn is_symmetric(&self) -> bool {
        let b = self.kl.max(self.ku);
        (0..self.n).all(|i| {
            (i + 1..(i + b + 1).min(self.n)).all(|j| self.get(i, j) == self.get(j, i))
        })
    }

    pub fn inf_norm(&self) -> T {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j).abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum of a symmetric matrix.
    pub fn gershgorin(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..self.n {
            let radius: T = self
                .row_range(i)
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).abs())
                .sum();
            let d = self.get(i, i);
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    /// `selfᵀ diag(weights) self`, banded with half-bandwidth `kl + ku`.
    ///
    /// Only the upper triangle is accumulated and then mirrored, so the result
    /// is exactly symmetric.
    pub fn weighted_gram(&self, weights: &[T]) -> Self {
        assert_eq!(weights.len(), self.n);
        let b = self.kl + self.ku;
        let mut g = Self::zeros(self.n, b, b);
        for k in 0..self.n {
            let cols = self.row_range(k);
            for i in cols.clone() {
                let aki = self.get(k, i) * weights[k];
                if aki == T::zero() {
                    continue;
                }
                for j in i..cols.end {
                    let idx = g.idx(i, j);
                    g.data[idx] = g.data[idx] + aki * self.get(k, j);
                }
            }
        }
        for i in 0..self.n {
            for j in i + 1..(i + g.ku + 1).min(self.n) {
                let x = g.get(i, j);
                g.set(j, i, x);
            }
        }
        g
    }
}

/// Failure of a Cholesky factorization: the pivot at `index` was not positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub index: usize,
}

/// Cholesky factor `L` of a symmetric positive definite band matrix, with
/// `L` stored by rows inside its lower band.
#[derive(Debug, Clone)]
pub struct BandCholesky<T> {
    n: usize,
    b: usize,
    l: Vec<T>,
}

impl<T: Scalar> BandCholesky<T> {
    /// Factors `a - shift * I`, reading only the lower band of `a`.
    pub fn factor(a: &BandMatrix<T>, shift: T) -> Result<Self, NotPositiveDefinite> {
        let n = a.n();
        let b = a.lower_bandwidth().max(a.upper_bandwidth());
        let w = b + 1;
        let mut l = vec![T::zero(); n * w];
        // L[i][j] lives at l[i * w + (j + b - i)]
        for i in 0..n {
            let start = i.saturating_sub(b);
            for j in start..=i {
                let mut s = a.get(i, j);
                if i == j {
                    s = s - shift;
                }
                let kstart = start.max(j.saturating_sub(b));
                for k in kstart..j {
                    s = s - l[i * w + (k + b - i)] * l[j * w + (k + b - j)];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return Err(NotPositiveDefinite { index: i });
                    }
                    l[i * w + b] = s.sqrt();
                } else {
                    l[i * w + (j + b - i)] = s / l[j * w + b];
                }
            }
        }
        Ok(Self { n, b, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.l[i * (self.b + 1) + (j + self.b - i)]
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        assert_eq!(rhs.len(), self.n);
        let mut y = rhs.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in i.saturating_sub(self.b)..i {
                s = s - self.at(i, k) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.b + 1).min(self.n) {
                s = s - self.at(k, i) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        y
    }

    /// Smallest and largest diagonal entry of `L`.
    pub fn pivot_range(&self) -> (T, T) {
        (0..self.n).map(|i| self.at(i, i)).fold(
            (T::infinity(), T::neg_infinity()),
            |(lo, hi), d| (lo.min(d), hi.max(d)),
        )
    }
}

/// Smallest eigenvalue of a symmetric band matrix, by bisection on the
/// success of `Cholesky(A - x I)`.
///
/// The result is accurate to roughly `n * eps * ||A||`.
pub fn lambda_min<T: Scalar>(a: &BandMatrix<T>) -> T {
    assert!(a.n() > 0, "empty matrix");
    let (glo, _) = a.gershgorin();
    let mut hi = a.diagonal().into_iter().fold(T::infinity(), T::min);
    let mut lo = glo.min(hi);
    let eps = T::epsilon();
    let floor = (eps * a.inf_norm() * T::lit(0.01)).max(T::min_positive_value());
    for _ in 0..256 {
        if hi - lo <= (eps * (lo.abs() + hi.abs())).max(floor) {
            break;
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        if BandCholesky::factor(a, mid).is_ok() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}

pub fn lambda_max<T: Scalar>(a: &BandMatrix<T>) -> T {
    -lambda_min(&a.scaled(-T::one()))
}
