use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::Signed;

use super::scalar::{GaussScalar, Scalar};
use crate::error::{HodgeError, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type Mat = Matrix<GaussScalar>;
pub type FMat = Matrix<Complex64>;

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, in an ambient space of dimension `n`.
    pub fn from_cols(n: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[T]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cell = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Smallest `k` with `A^k = 0`, if `A` is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let mut p = Self::identity(self.rows);
        for k in 0..=self.rows {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Truncated exponential, exact when `self` is nilpotent.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        let k = self.nilpotency_index().ok_or(HodgeError::NotNilpotent)?;
        Ok(self.exp_series(k))
    }

    /// `sum_{j<terms} A^j / j!`.
    pub fn exp_series(&self, terms: usize) -> Self {
        let n = self.rows;
        let mut out = Self::identity(n);
        let mut term = Self::identity(n);
        for j in 1..terms {
            term = term.mul(self).scale(&(T::one() / T::from_i64(j as i64)));
            out = out.add(&term);
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a.clone() * other[(k, l)].clone();
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// `u^T A v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        dot(u, &self.mul_vec(v))
    }

    /// Row reduction with partial pivoting on magnitude for floats, first nonzero for exact.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = T::choose_pivot(&m, r, c) else { continue };
            m.swap_rows(r, p);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let x = m[(r, j)].clone();
                m[(r, j)] = x * inv.clone();
            }
            m[(r, c)] = T::one();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pj = &m[(r, j)];
                    if pj.is_zero() {
                        continue;
                    }
                    let d = f.clone() * pj.clone();
                    let x = m[(i, j)].clone();
                    m[(i, j)] = x - d;
                }
                m[(i, c)] = T::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{ v : A v = 0 }` as column vectors.
    pub fn kernel_vectors(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(HodgeError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(HodgeError::InvalidInput("singular matrix".into()));
        }
        Ok(r.submatrix(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = T::choose_pivot(&m, c, c) else { return T::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                let f = m[(i, c)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let d = f.clone() * m[(c, j)].clone();
                    let x = m[(i, j)].clone();
                    m[(i, j)] = x - d;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> FMat {
        self.map(Scalar::to_c64)
    }
}

/// Pivot selection differs between exact and floating arithmetic.
pub trait PivotChoice: Sized {
    fn choose_pivot(m: &Matrix<Self>, from_row: usize, col: usize) -> Option<usize>;
}

impl PivotChoice for GaussScalar {
    fn choose_pivot(m: &Matrix<Self>, from_row: usize, col: usize) -> Option<usize> {
        (from_row..m.rows).find(|&i| !m[(i, col)].is_zero())
    }
}

impl PivotChoice for Complex64 {
    fn choose_pivot(m: &Matrix<Self>, from_row: usize, col: usize) -> Option<usize> {
        let (best, mag) = (from_row..m.rows)
            .map(|i| (i, m[(i, col)].norm()))
            .fold((from_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > 1e-12).then_some(best)
    }
}

/// Exact test that a Hermitian matrix is positive definite: LDL* with positive real pivots.
pub fn is_hermitian_positive_definite(h: &Mat) -> bool {
    if !h.is_square() || *h != h.adjoint() {
        return false;
    }
    let n = h.rows();
    let mut m = h.clone();
    for c in 0..n {
        let piv = m[(c, c)].clone();
        if !num_traits::Zero::is_zero(&piv.im) || !piv.re.is_positive() {
            return false;
        }
        for i in c + 1..n {
            let f = m[(i, c)].clone() / piv.clone();
            if Scalar::is_zero(&f) {
                continue;
            }
            for j in c..n {
                let d = f.clone() * m[(c, j)].clone();
                let x = m[(i, j)].clone();
                m[(i, j)] = x - d;
            }
        }
    }
    true
}

pub fn dot<T: Scalar>(u: &[T], v: &[T]) -> T {
    assert_eq!(u.len(), v.len());
    let mut acc = T::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a.clone() * b.clone();
        }
    }
    acc
}

pub fn vec_add<T: Scalar>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<T: Scalar>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_scale<T: Scalar>(c: &T, v: &[T]) -> Vec<T> {
    v.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn vec_conj<T: Scalar>(v: &[T]) -> Vec<T> {
    v.iter().map(Scalar::conj).collect()
}

pub fn vec_is_zero<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::scalar::{gi, gr};

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| gi(x, 0)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_of_rank_two() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, m(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = a.kernel_vectors();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![gi(-1, 0), gi(-1, 0), gi(1, 0)]);
        assert!(vec_is_zero(&a.mul_vec(&k[0])));
    }

    #[test]
    fn complex_inverse_and_det() {
        let a = Mat::from_rows(&[vec![gi(1, 1), gi(0, 1)], vec![gi(2, 0), gi(1, -1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        // (1+i)(1-i) - 2i
        assert_eq!(a.determinant(), gi(2, -2));
    }

    #[test]
    fn exp_of_shift() {
        let n = m(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(n.nilpotency_index(), Some(3));
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(e[(2, 0)], gr(1, 2));
        assert!(m(&[&[1, 0], &[0, 0]]).exp_nilpotent().is_err());
    }

    #[test]
    fn hermitian_definiteness() {
        let a = Mat::from_rows(&[vec![gi(2, 0), gi(0, 1)], vec![gi(0, -1), gi(2, 0)]]);
        assert!(is_hermitian_positive_definite(&a));
        let b = Mat::from_rows(&[vec![gi(1, 0), gi(0, 2)], vec![gi(0, -2), gi(1, 0)]]);
        assert!(!is_hermitian_positive_definite(&b));
        assert!(!is_hermitian_positive_definite(&Mat::from_rows(&[vec![gi(1, 1)]])));
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let k = a.kron(&Mat::identity(2));
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k[(2, 0)], gi(3, 0));
        assert_eq!(k[(3, 3)], gi(4, 0));
    }

    #[test]
    fn float_rref_matches_exact() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (r, piv) = a.to_f64().rref();
        assert_eq!(piv, vec![0, 1]);
        assert!((r[(1, 2)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
