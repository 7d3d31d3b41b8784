//! The induced structure on a tensor product of exterior powers, Tate
//! normalization, and the marker vectors.

use itertools::Itertools;

use crate::error::{HodgeError, Result};
use crate::exactlin::{vec_conj, vec_scale, GaussScalar, Mat, Scalar, Subspace};
use crate::filtrations::{level, weight_filtration, DecreasingFiltration, IncreasingFiltration};
use crate::mhs::{deligne_split, DeligneSplitting, MixedHodge, NilpotentCone};
use crate::orbit::AdaptedBasis;

/// Hodge data on `V`: a weight `w` form, a Hodge filtration, and optionally a cone
/// whose weight filtration makes `(W, F)` a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureHodgeData {
    pub weight: i64,
    pub q: Mat,
    pub f: DecreasingFiltration,
    pub cone: NilpotentCone,
}

impl PureHodgeData {
    pub fn new(weight: i64, q: Mat, f: DecreasingFiltration, cone: NilpotentCone) -> Result<Self> {
        if !f.is_effective() {
            return Err(HodgeError::InvalidInput("Hodge filtration is not effective".into()));
        }
        if f.ambient_dim() != q.rows() {
            return Err(HodgeError::DimensionMismatch { expected: q.rows(), found: f.ambient_dim() });
        }
        Ok(PureHodgeData { weight, q, f, cone })
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    /// `W = W(N)[-w]` for the interior element, or the pure filtration without a cone.
    pub fn weight_filtration(&self) -> Result<IncreasingFiltration> {
        if self.cone.is_empty() {
            Ok(IncreasingFiltration::trivial(self.dim(), self.weight))
        } else {
            weight_filtration(&self.cone.interior(), self.weight)
        }
    }

    pub fn mixed(&self) -> Result<MixedHodge> {
        MixedHodge::new(self.weight, self.weight_filtration()?, self.f.clone(), self.q.clone())
    }

    /// `d_p = dim F^p` for `p` from `w` down to `ceil((w+1)/2)`.
    pub fn factor_degrees(&self) -> Vec<(i64, usize)> {
        let lo = (self.weight + 2).div_euclid(2);
        (lo..=self.weight).rev().map(|p| (p, self.f.get(p).dim())).collect()
    }
}

/// `H = ⊗ Λ^{d_p} V` with its induced form, filtrations, splitting and cone.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedStructure {
    pub v_dim: usize,
    /// Wedge degree of each tensor factor.
    pub degrees: Vec<usize>,
    pub n: i64,
    pub twist: i64,
    pub q: Mat,
    pub f: DecreasingFiltration,
    pub w: IncreasingFiltration,
    pub split: DeligneSplitting,
    pub cone: NilpotentCone,
}

impl InducedStructure {
    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn mixed(&self) -> MixedHodge {
        MixedHodge { n: self.n, w: self.w.clone(), f: self.f.clone(), q: self.q.clone() }
    }

    /// Action of `X in End(V)` on `H` as a derivation.
    pub fn induce_operator(&self, x: &Mat) -> Mat {
        tensor_derivation(&self.degrees.iter().map(|&k| wedge_derivation(x, k)).collect::<Vec<_>>())
    }

    /// Action of `g in GL(V)` on `H`.
    pub fn induce_group(&self, g: &Mat) -> Mat {
        self.degrees.iter().fold(Mat::identity(1), |acc, &k| acc.kron(&wedge_power(g, k)))
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// `Λ^k A`: entries are the `k x k` minors.
pub fn wedge_power(a: &Mat, k: usize) -> Mat {
    let rows = wedge_basis(a.rows(), k);
    let cols = wedge_basis(a.cols(), k);
    let mut out = Mat::zeros(rows.len(), cols.len());
    for (i, ri) in rows.iter().enumerate() {
        for (j, cj) in cols.iter().enumerate() {
            out[(i, j)] = a.submatrix(ri, cj).determinant();
        }
    }
    out
}

/// Determinant pairing on `Λ^k V`; same as `Λ^k Q`.
pub fn wedge_form(q: &Mat, k: usize) -> Mat {
    wedge_power(q, k)
}

/// Leibniz action of `X` on `Λ^k V`.
pub fn wedge_derivation(x: &Mat, k: usize) -> Mat {
    let n = x.rows();
    let basis = wedge_basis(n, k);
    let mut out = Mat::zeros(basis.len(), basis.len());
    for (col, mono) in basis.iter().enumerate() {
        for pos in 0..k {
            let src = mono[pos];
            for r in 0..n {
                let c = &x[(r, src)];
                if Scalar::is_zero(c) {
                    continue;
                }
                if r != src && mono.contains(&r) {
                    continue;
                }
                let mut m = mono.clone();
                m[pos] = r;
                let (sorted, sign) = sort_with_sign(m);
                let row = basis.binary_search(&sorted).expect("monomial in basis");
                let v = if sign { c.clone() } else { -c.clone() };
                let cell = out[(row, col)].clone();
                out[(row, col)] = cell + v;
            }
        }
    }
    out
}

/// Sorts distinct indices, returning `true` for an even permutation.
fn sort_with_sign(mut v: Vec<usize>) -> (Vec<usize>, bool) {
    let mut even = true;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                even = !even;
            }
        }
    }
    (v, even)
}

/// `X_1 ⊗ 1 ⊗ ... + 1 ⊗ X_2 ⊗ ... + ...`.
pub fn tensor_derivation(parts: &[Mat]) -> Mat {
    let dims: Vec<usize> = parts.iter().map(Mat::rows).collect();
    let total: usize = dims.iter().product();
    let mut out = Mat::zeros(total, total);
    for (i, x) in parts.iter().enumerate() {
        let term = dims.iter().enumerate().fold(Mat::identity(1), |acc, (j, &d)| {
            if i == j {
                acc.kron(x)
            } else {
                acc.kron(&Mat::identity(d))
            }
        });
        out = out.add(&term);
    }
    out
}

/// Basis of `V` with each vector in one Deligne piece, as columns, with bidegrees.
pub fn split_basis(split: &DeligneSplitting) -> (Mat, Vec<(i64, i64)>) {
    let d = split.ambient_dim();
    let mut cols = Vec::with_capacity(d);
    let mut degs = Vec::with_capacity(d);
    for (&k, s) in split.pieces() {
        for v in s.vectors() {
            cols.push(v);
            degs.push(k);
        }
    }
    (Mat::from_cols(d, &cols), degs)
}

/// The induced structure, before Tate normalization.
pub fn induce(v: &PureHodgeData) -> Result<InducedStructure> {
    let factors: Vec<(i64, usize)> = v.factor_degrees().into_iter().filter(|&(_, d)| d > 0).collect();
    if factors.is_empty() {
        return Err(HodgeError::InvalidInput("Hodge filtration has no nonzero step in the upper half".into()));
    }
    let degrees: Vec<usize> = factors.iter().map(|f| f.1).collect();
    let mixed = v.mixed()?;
    let split_v = deligne_split(&mixed)?;
    let (b, degs) = split_basis(&split_v);
    let n = v.weight * degrees.iter().sum::<usize>() as i64;

    let q = degrees.iter().fold(Mat::identity(1), |acc, &k| acc.kron(&wedge_form(&v.q, k)));
    let sign = if n.rem_euclid(2) == 0 { GaussScalar::one() } else { -GaussScalar::one() };
    if q.transpose() != q.scale(&sign) {
        return Err(HodgeError::InvalidInput(format!("induced form is not (-1)^{n}-symmetric")));
    }

    // bidegrees of tensor monomials in the split basis
    let mut mono_degs: Vec<(i64, i64)> = vec![(0, 0)];
    for &k in &degrees {
        let part: Vec<(i64, i64)> = wedge_basis(v.dim(), k)
            .iter()
            .map(|m| m.iter().fold((0, 0), |acc, &i| (acc.0 + degs[i].0, acc.1 + degs[i].1)))
            .collect();
        mono_degs = mono_degs.iter().cartesian_product(part.iter()).map(|(a, c)| (a.0 + c.0, a.1 + c.1)).collect();
    }
    let bh = degrees.iter().fold(Mat::identity(1), |acc, &k| acc.kron(&wedge_power(&b, k)));
    let dim = bh.rows();
    let cols = bh.col_vectors();
    let mut pieces: std::collections::BTreeMap<(i64, i64), Vec<Vec<GaussScalar>>> = Default::default();
    for (c, dg) in cols.into_iter().zip(&mono_degs) {
        pieces.entry(*dg).or_default().push(c);
    }
    let split = DeligneSplitting::from_pieces(dim, pieces.into_iter().map(|(k, vs)| (k, Subspace::span(dim, &vs))));
    let f_levels: Vec<(i64, Vec<GaussScalar>)> =
        split.pieces().iter().flat_map(|(&(p, _), s)| s.vectors().into_iter().map(move |x| (p, x))).collect();
    let w_levels: Vec<(i64, Vec<GaussScalar>)> =
        split.pieces().iter().flat_map(|(&(p, q), s)| s.vectors().into_iter().map(move |x| (p + q, x))).collect();
    let f = DecreasingFiltration::from_levels(dim, &f_levels);
    let w = if v.cone.is_empty() { IncreasingFiltration::trivial(dim, n) } else { IncreasingFiltration::from_levels(dim, &w_levels) };

    let mut h = InducedStructure {
        v_dim: v.dim(),
        degrees,
        n,
        twist: 0,
        q,
        f,
        w,
        split,
        cone: NilpotentCone::empty(),
    };
    let gens: Vec<Mat> = v.cone.generators().iter().map(|x| h.induce_operator(x)).collect();
    h.cone = NilpotentCone::new(gens, &h.q)?;
    Ok(h)
}

/// Twist so that `h^{n,0} = 1`: `k = n - max{p : F^p != 0}`.
pub fn tate_normalize(h: &InducedStructure) -> InducedStructure {
    let k = h.n - h.f.highest();
    if k == 0 {
        return h.clone();
    }
    let split = DeligneSplitting::from_pieces(
        h.dim(),
        h.split.pieces().iter().map(|(&(p, q), s)| ((p - k, q - k), s.clone())),
    );
    InducedStructure {
        n: h.n - 2 * k,
        twist: h.twist + k,
        f: h.f.shift(k),
        w: h.w.shift(2 * k),
        split,
        ..h.clone()
    }
}

/// The integer `m` and the distinguished basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Markers {
    pub m: i64,
    pub e0_index: usize,
    pub einf_index: usize,
    pub ed_index: usize,
    pub lambda: GaussScalar,
}

/// Locate `m, e_0, e_inf, e_d, lambda` in an adapted basis of `H`.
pub fn locate_markers(h: &InducedStructure, basis: &AdaptedBasis) -> Result<Markers> {
    let n = h.n;
    let d = h.dim();
    let top = h.f.get(n);
    if top.dim() != 1 {
        return Err(HodgeError::InvalidInput(format!("F^n has dimension {}, expected 1", top.dim())));
    }
    let e0_index = basis.index_spanning(&top).ok_or_else(|| HodgeError::NotAdapted("F^n is not spanned by a basis vector".into()))?;
    let e0 = basis.vector(e0_index);
    let m = level(&e0, &h.w)?;
    if m < n || m > 2 * n {
        return Err(HodgeError::InvalidInput(format!("level m = {m} outside [n, 2n]")));
    }
    let line = h.w.get(2 * n - m).intersect(&h.f.get(2 * n - m));
    if line.dim() != 1 {
        return Err(HodgeError::InvalidInput(format!("W_(2n-m) ∩ F^(2n-m) has dimension {}", line.dim())));
    }
    let einf_index = basis
        .index_spanning(&line)
        .ok_or_else(|| HodgeError::NotAdapted("W_(2n-m) ∩ F^(2n-m) is not spanned by a basis vector".into()))?;
    let einf_bar = vec_conj(&basis.vector(einf_index));
    let ed_index = basis
        .index_spanning(&Subspace::span(d, &[einf_bar.clone()]))
        .ok_or_else(|| HodgeError::NotAdapted("conjugate of e_inf is not a basis vector multiple".into()))?;
    let ed = basis.vector(ed_index);
    // conj(e_inf) = mu e_d, lambda = 1 / conj(mu)
    let pivot = ed.iter().position(|x| !Scalar::is_zero(x)).expect("nonzero basis vector");
    let mu = einf_bar[pivot].clone() / ed[pivot].clone();
    let lambda = GaussScalar::one() / Scalar::conj(&mu);
    debug_assert_eq!(vec_conj(&vec_scale(&lambda, &basis.vector(einf_index))), ed);
    Ok(Markers { m, e0_index, einf_index, ed_index, lambda })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::gi;

    fn ints(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| gi(x, 0)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn wedge_of_identity_and_minors() {
        let a = ints(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        let w = wedge_power(&a, 2);
        assert_eq!(w.rows(), 3);
        // rows {0,1}, cols {0,1}: det [[1,2],[0,1]] = 1
        assert_eq!(w[(0, 0)], gi(1, 0));
        // rows {0,2}, cols {0,1}: det [[1,2],[3,0]] = -6
        assert_eq!(w[(1, 0)], gi(-6, 0));
        assert_eq!(wedge_power(&a, 3)[(0, 0)], a.determinant());
    }

    #[test]
    fn wedge_power_is_multiplicative() {
        let a = ints(&[&[1, 2, 0, 1], &[0, 1, 0, 2], &[3, 0, 1, 0], &[1, 1, 1, 1]]);
        let b = ints(&[&[0, 1, 0, 0], &[1, 0, 2, 0], &[0, 0, 1, 3], &[2, 0, 0, 1]]);
        assert_eq!(wedge_power(&a.mul(&b), 2), wedge_power(&a, 2).mul(&wedge_power(&b, 2)));
    }

    #[test]
    fn derivation_is_linearized_group_action() {
        // d/dt Λ^k exp(tX) at 0 for nilpotent X: exp(Λ X) = Λ exp(X)
        let x = ints(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0]]);
        for k in 1..=3 {
            let lhs = wedge_derivation(&x, k).exp_nilpotent().unwrap();
            let rhs = wedge_power(&x.exp_nilpotent().unwrap(), k);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn derivation_respects_bracket() {
        let x = ints(&[&[1, 2, 0], &[0, -1, 1], &[0, 0, 3]]);
        let y = ints(&[&[0, 1, 0], &[2, 0, 0], &[1, 1, 1]]);
        let dx = wedge_derivation(&x, 2);
        let dy = wedge_derivation(&y, 2);
        assert_eq!(dx.bracket(&dy), wedge_derivation(&x.bracket(&y), 2));
    }

    #[test]
    fn sign_of_sort() {
        assert_eq!(sort_with_sign(vec![2, 0, 1]), (vec![0, 1, 2], true));
        assert_eq!(sort_with_sign(vec![1, 0]), (vec![0, 1], false));
    }
}
