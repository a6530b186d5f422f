use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Eigenvalues of a symmetric matrix in ascending order.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        let mut work = SymmetricEigen::new(self);
        work.tred2();
        work.tql2(false);
        work.d
    }

    /// Eigenvalues in ascending order together with the matrix whose columns
    /// are the corresponding orthonormal eigenvectors.
    pub fn symmetric_eigen(&self) -> (Vec<T>, Self) {
        let mut work = SymmetricEigen::new(self);
        work.tred2();
        work.tql2(true);
        let n = work.n;
        (work.d, Self::from_row_major(n, n, work.v))
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Householder tridiagonalization followed by implicit QL, after the
/// EISPACK tred2/tql2 pair.
struct SymmetricEigen<T> {
    n: usize,
    v: Vec<T>,
    d: Vec<T>,
    e: Vec<T>,
}

impl<T: Scalar> SymmetricEigen<T> {
    fn new(a: &DenseMatrix<T>) -> Self {
        assert_eq!(a.rows, a.cols, "symmetric eigensolver needs a square matrix");
        let n = a.rows;
        Self {
            n,
            v: a.data.clone(),
            d: vec![T::zero(); n],
            e: vec![T::zero(); n],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.v[i * self.n + j]
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, x: T) {
        self.v[i * self.n + j] = x;
    }

    fn tred2(&mut self) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let zero = T::zero();
        for j in 0..n {
            self.d[j] = self.at(n - 1, j);
        }
        for i in (1..n).rev() {
            let mut scale = zero;
            let mut h = zero;
            for k in 0..i {
                scale = scale + self.d[k].abs();
            }
            if scale == zero {
                self.e[i] = self.d[i - 1];
                for j in 0..i {
                    self.d[j] = self.at(i - 1, j);
                    self.put(i, j, zero);
                    self.put(j, i, zero);
                }
            } else {
                for k in 0..i {
                    self.d[k] = self.d[k] / scale;
                    h = h + self.d[k] * self.d[k];
                }
                let mut f = self.d[i - 1];
                let mut g = h.sqrt();
                if f > zero {
                    g = -g;
                }
                self.e[i] = scale * g;
                h = h - f * g;
                self.d[i - 1] = f - g;
                for j in 0..i {
                    self.e[j] = zero;
                }
                for j in 0..i {
                    f = self.d[j];
                    self.put(j, i, f);
                    g = self.e[j] + self.at(j, j) * f;
                    for k in j + 1..i {
                        g = g + self.at(k, j) * self.d[k];
                        self.e[k] = self.e[k] + self.at(k, j) * f;
                    }
                    self.e[j] = g;
                }
                f = zero;
                for j in 0..i {
                    self.e[j] = self.e[j] / h;
                    f = f + self.e[j] * self.d[j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    self.e[j] = self.e[j] - hh * self.d[j];
                }
                for j in 0..i {
                    f = self.d[j];
                    g = self.e[j];
                    for k in j..i {
                        let x = self.at(k, j) - (f * self.e[k] + g * self.d[k]);
                        self.put(k, j, x);
                    }
                    self.d[j] = self.at(i - 1, j);
                    self.put(i, j, zero);
                }
            }
            self.d[i] = h;
        }
        // accumulate transformations
        for i in 0..n - 1 {
            let x = self.at(i, i);
            self.put(n - 1, i, x);
            self.put(i, i, T::one());
            let h = self.d[i + 1];
            if h != zero {
                for k in 0..=i {
                    self.d[k] = self.at(k, i + 1) / h;
                }
                for j in 0..=i {
                    let mut g = zero;
                    for k in 0..=i {
                        g = g + self.at(k, i + 1) * self.at(k, j);
                    }
                    for k in 0..=i {
                        let x = self.at(k, j) - g * self.d[k];
                        self.put(k, j, x);
                    }
                }
            }
            for k in 0..=i {
                self.put(k, i + 1, zero);
            }
        }
        for j in 0..n {
            self.d[j] = self.at(n - 1, j);
            self.put(n - 1, j, zero);
        }
        self.put(n - 1, n - 1, T::one());
        self.e[0] = zero;
    }

    fn tql2(&mut self, vectors: bool) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let zero = T::zero();
        let two = T::lit(2.0);
        for i in 1..n {
            self.e[i - 1] = self.e[i];
        }
        self.e[n - 1] = zero;
        let mut f = zero;
        let mut tst1 = zero;
        let eps = T::epsilon();
        for l in 0..n {
            tst1 = tst1.max(self.d[l].abs() + self.e[l].abs());
            let mut m = l;
            while m < n - 1 && self.e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m > l {
                let mut iter = 0;
                loop {
                    iter += 1;
                    let mut g = self.d[l];
                    let mut p = (self.d[l + 1] - g) / (two * self.e[l]);
                    let mut r = p.hypot(T::one());
                    if p < zero {
                        r = -r;
                    }
                    self.d[l] = self.e[l] / (p + r);
                    self.d[l + 1] = self.e[l] * (p + r);
                    let dl1 = self.d[l + 1];
                    let mut h = g - self.d[l];
                    for i in l + 2..n {
                        self.d[i] = self.d[i] - h;
                    }
                    f = f + h;
                    p = self.d[m];
                    let mut c = T::one();
                    let mut c2 = c;
                    let mut c3 = c;
                    let el1 = self.e[l + 1];
                    let mut s = zero;
                    let mut s2 = zero;
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = c;
                        s2 = s;
                        g = c * self.e[i];
                        h = c * p;
                        r = p.hypot(self.e[i]);
                        self.e[i + 1] = s * r;
                        s = self.e[i] / r;
                        c = p / r;
                        p = c * self.d[i] - s * g;
                        self.d[i + 1] = h + s * (c * g + s * self.d[i]);
                        if vectors {
                            for k in 0..n {
                                let h = self.at(k, i + 1);
                                let vi = self.at(k, i);
                                self.put(k, i + 1, s * vi + c * h);
                                self.put(k, i, c * vi - s * h);
                            }
                        }
                    }
                    p = -s * s2 * c3 * el1 * self.e[l] / dl1;
                    self.e[l] = s * p;
                    self.d[l] = c * p;
                    if self.e[l].abs() <= eps * tst1 || iter >= 64 {
                        break;
                    }
                }
            }
            self.d[l] = self.d[l] + f;
            self.e[l] = zero;
        }
        // selection sort, ascending
        for i in 0..n.saturating_sub(1) {
            let mut k = i;
            let mut p = self.d[i];
            for j in i + 1..n {
                if self.d[j] < p {
                    k = j;
                    p = self.d[j];
                }
            }
            if k != i {
                self.d.swap(i, k);
                if vectors {
                    for j in 0..n {
                        let a = self.at(j, i);
                        let b = self.at(j, k);
                        self.put(j, i, b);
                        self.put(j, k, a);
                    }
                }
            }
        }
    }
}
