use super::matrix::{vec_is_zero, Matrix};
use super::scalar::{GaussScalar, Scalar};

/// Linear subspace of `T^n`, stored as a reduced row echelon basis.
///
/// Over the exact field the basis is canonical, so `==` is equality of subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Scalar = GaussScalar> {
    ambient: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_rows(Matrix::identity(ambient))
    }

    /// Row space of `m`.
    pub fn from_rows(m: Matrix<T>) -> Self {
        let ambient = m.cols();
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..ambient).collect();
        Subspace { ambient, basis: r.submatrix(&keep, &all), pivots }
    }

    /// Column space of `m`.
    pub fn from_cols(m: &Matrix<T>) -> Self {
        Self::from_rows(m.transpose())
    }

    pub fn span(ambient: usize, vectors: &[Vec<T>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        Self::from_rows(Matrix::from_rows(vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Basis vectors as rows.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        self.basis.row_vectors()
    }

    /// Basis vectors as columns of an `ambient x dim` matrix.
    pub fn as_cols(&self) -> Matrix<T> {
        self.basis.transpose()
    }

    /// Coordinates of `v` in the echelon basis; `None` when `v` is outside.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, x) in rest.iter_mut().enumerate() {
                let b = &self.basis[(k, j)];
                if !b.is_zero() {
                    *x = x.clone() - c.clone() * b.clone();
                }
            }
        }
        T::residual_is_zero(&rest).then_some(coords)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        other.basis.row_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Self::from_rows(self.basis.vstack(&other.basis))
    }

    pub fn sum_all<'a>(ambient: usize, spaces: impl IntoIterator<Item = &'a Self>) -> Self {
        let rows: Vec<Vec<T>> = spaces.into_iter().flat_map(|s| s.vectors()).collect();
        Self::span(ambient, &rows)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        if other.contains_space(self) {
            return self.clone();
        }
        if self.contains_space(other) {
            return other.clone();
        }
        // kernel of [S^T | -T^T] gives pairs (a, b) with S^T a = T^T b
        let s = self.basis.transpose();
        let t = other.basis.transpose().scale(&(-T::one()));
        let k = s.hstack(&t).kernel_vectors();
        let ds = self.dim();
        let vecs: Vec<Vec<T>> = k.iter().map(|kv| s.mul_vec(&kv[..ds])).collect();
        Self::span(self.ambient, &vecs)
    }

    pub fn conjugate(&self) -> Self {
        Self::from_rows(self.basis.conj())
    }

    /// `A(S)` for a square matrix `A`.
    pub fn image(&self, a: &Matrix<T>) -> Self {
        if self.is_zero() {
            return Self::zero(a.rows());
        }
        let imgs: Vec<Vec<T>> = self.vectors().iter().map(|v| a.mul_vec(v)).collect();
        Self::span(a.rows(), &imgs)
    }

    /// `{ v in S : A v in U }`.
    pub fn preimage_within(&self, a: &Matrix<T>, target: &Self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        // coordinates c with A S^T c in U, i.e. annihilated by U's complement equations
        let sc = self.as_cols();
        let img = a.mul(&sc);
        let eqs = target.annihilator();
        if eqs.is_zero() {
            return self.clone();
        }
        let cond = eqs.basis().mul(&img);
        let ks = cond.kernel_vectors();
        let vecs: Vec<Vec<T>> = ks.iter().map(|c| sc.mul_vec(c)).collect();
        Self::span(self.ambient, &vecs)
    }

    /// `{ x : x^T v = 0 for all v in S }`.
    pub fn annihilator(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        Self::span(self.ambient, &self.basis.kernel_vectors())
    }

    /// Vectors from `candidates` that extend a basis of `self`, chosen greedily in order.
    pub fn extend_by(&self, candidates: &[Vec<T>]) -> Vec<Vec<T>> {
        let mut cur = self.clone();
        let mut out = Vec::new();
        for v in candidates {
            if vec_is_zero(v) || cur.contains(v) {
                continue;
            }
            cur = cur.sum(&Self::span(self.ambient, std::slice::from_ref(v)));
            out.push(v.clone());
        }
        out
    }

    /// Vectors completing a basis of `self` to one of `larger`.
    pub fn complement_in(&self, larger: &Self) -> Vec<Vec<T>> {
        self.extend_by(&larger.vectors())
    }
}

/// Test for an all-zero residual, exact or within rounding.
pub trait Residual: Sized {
    fn residual_is_zero(v: &[Self]) -> bool;
}

impl Residual for GaussScalar {
    fn residual_is_zero(v: &[Self]) -> bool {
        vec_is_zero(v)
    }
}

impl Residual for num_complex::Complex64 {
    fn residual_is_zero(v: &[Self]) -> bool {
        v.iter().all(|x| x.norm() < 1e-9)
    }
}

/// Whether the spaces are independent, i.e. their dimensions add up to the dimension of the sum.
pub fn is_direct_sum<T: Scalar>(ambient: usize, spaces: &[&Subspace<T>]) -> bool {
    let total: usize = spaces.iter().map(|s| s.dim()).sum();
    Subspace::sum_all(ambient, spaces.iter().copied()).dim() == total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::scalar::gi;

    fn v(xs: &[i64]) -> Vec<GaussScalar> {
        xs.iter().map(|&x| gi(x, 0)).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let c = a.intersect(&b);
        assert_eq!(c, Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn conjugate_line() {
        let l = Subspace::span(2, &[vec![gi(1, 0), gi(0, 1)]]);
        let lb = l.conjugate();
        assert_ne!(l, lb);
        assert!(l.intersect(&lb).is_zero());
        assert!(is_direct_sum(2, &[&l, &lb]));
    }

    #[test]
    fn preimage_and_annihilator() {
        // shift e0 -> e1 -> e2
        let n = Matrix::from_rows(&[v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let target = Subspace::span(3, &[v(&[0, 0, 1])]);
        let pre = Subspace::full(3).preimage_within(&n, &target);
        assert_eq!(pre, Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]));
        let ann = target.annihilator();
        assert_eq!(ann, Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]));
    }

    #[test]
    fn coordinates_reconstruct() {
        let s = Subspace::span(3, &[v(&[1, 2, 0]), v(&[0, 1, 1])]);
        let w = v(&[2, 5, 1]);
        let c = s.coordinates(&w).unwrap();
        let back = s.basis().transpose().mul_vec(&c);
        assert_eq!(back, w);
        assert!(s.coordinates(&v(&[0, 0, 1])).is_none());
    }
}
