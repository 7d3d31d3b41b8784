//! Infinitesimal automorphisms of a form, their bigrading, distinguished
//! subalgebras, centralizers, and the hermitian and smoothness criteria.

use std::collections::BTreeMap;

use crate::error::{HodgeError, Result};
use crate::exactlin::{GaussScalar, Mat, Scalar, Subspace};
use crate::induced::split_basis;
use crate::mhs::{deligne_split, DeligneSplitting, HodgeDiamond, MixedHodge};
use crate::verdict::Verdict;

/// Row-major flattening of a square matrix.
pub fn flatten(x: &Mat) -> Vec<GaussScalar> {
    x.data().to_vec()
}

pub fn unflatten(d: usize, v: &[GaussScalar]) -> Mat {
    Mat::from_vec(d, d, v.to_vec())
}

/// `{X : QX + X^T Q = 0}` with an explicit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraBasis {
    pub q: Mat,
    pub basis: Vec<Mat>,
}

impl LieAlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.q.rows()
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.q.mul(x).add(&x.transpose().mul(&self.q)).is_zero()
    }

    pub fn span(&self) -> Subspace {
        let d = self.ambient();
        Subspace::span(d * d, &self.basis.iter().map(flatten).collect::<Vec<_>>())
    }

    /// Structure-constant closure check: every bracket of basis elements stays inside.
    pub fn is_closed(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, x)| self.basis[i + 1..].iter().all(|y| self.contains(&x.bracket(y))))
    }
}

/// Basis of the Lie algebra of the form `q`.
pub fn lie_algebra(q: &Mat) -> Result<LieAlgebraBasis> {
    if !q.is_square() {
        return Err(HodgeError::DimensionMismatch { expected: q.rows(), found: q.cols() });
    }
    let d = q.rows();
    let qinv = q.inverse().map_err(|_| HodgeError::DegenerateForm)?;
    let qt = q.transpose();
    let eps = if qt == *q {
        Some(GaussScalar::one())
    } else if qt == q.scale(&-GaussScalar::one()) {
        Some(-GaussScalar::one())
    } else {
        None
    };
    let basis = match eps {
        // Y = QX satisfies Y + eps Y^T = 0
        Some(e) => {
            let mut out = Vec::new();
            for i in 0..d {
                for j in i..d {
                    let mut y = Mat::zeros(d, d);
                    if i == j {
                        if e == -GaussScalar::one() {
                            y[(i, i)] = GaussScalar::one();
                            out.push(qinv.mul(&y));
                        }
                        continue;
                    }
                    y[(i, j)] = GaussScalar::one();
                    y[(j, i)] = -e.clone();
                    out.push(qinv.mul(&y));
                }
            }
            out
        }
        None => {
            let mut sys = Mat::zeros(d * d, d * d);
            for k in 0..d * d {
                let mut e = Mat::zeros(d, d);
                e[(k / d, k % d)] = GaussScalar::one();
                let img = q.mul(&e).add(&e.transpose().mul(q));
                sys.set_col(k, &flatten(&img));
            }
            sys.kernel_vectors().iter().map(|v| unflatten(d, v)).collect()
        }
    };
    Ok(LieAlgebraBasis { q: q.clone(), basis })
}

/// `{X in l : [X, N] = 0 for all N in ns}` as a subspace of flattened `End`.
pub fn centralizer(l: &LieAlgebraBasis, ns: &[Mat]) -> Subspace {
    let d = l.ambient();
    if ns.is_empty() || l.basis.is_empty() {
        return l.span();
    }
    let mut sys = Mat::zeros(d * d * ns.len(), l.dim());
    for (c, x) in l.basis.iter().enumerate() {
        for (k, n) in ns.iter().enumerate() {
            for (r, v) in flatten(&x.bracket(n)).into_iter().enumerate() {
                sys[(k * d * d + r, c)] = v;
            }
        }
    }
    let coeffs = sys.kernel_vectors();
    let vecs: Vec<Vec<GaussScalar>> = coeffs
        .iter()
        .map(|c| flatten(&l.basis.iter().zip(c).fold(Mat::zeros(d, d), |acc, (x, a)| acc.add(&x.scale(a)))))
        .collect();
    Subspace::span(d * d, &vecs)
}

/// Coordinates adapted to a Deligne splitting: columns of `b` lie in single pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitFrame {
    pub b: Mat,
    pub b_inv: Mat,
    pub degrees: Vec<(i64, i64)>,
}

impl SplitFrame {
    pub fn new(split: &DeligneSplitting) -> Self {
        let (b, degrees) = split_basis(split);
        let b_inv = b.inverse().expect("split basis is invertible");
        SplitFrame { b, b_inv, degrees }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// `X` in adapted coordinates.
    pub fn to_adapted(&self, x: &Mat) -> Mat {
        self.b_inv.mul(x).mul(&self.b)
    }

    pub fn from_adapted(&self, x: &Mat) -> Mat {
        self.b.mul(x).mul(&self.b_inv)
    }

    /// Bidegrees `(p, q)` of the nonzero components of `X` in `End`.
    pub fn degrees_of(&self, x: &Mat) -> Vec<(i64, i64)> {
        let xa = self.to_adapted(x);
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !Scalar::is_zero(&xa[(i, j)]) {
                    let (a, b) = (self.degrees[i], self.degrees[j]);
                    out.push((a.0 - b.0, a.1 - b.1));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether every component of `X` has a bidegree satisfying `keep`.
    pub fn lies_in(&self, x: &Mat, keep: impl Fn(i64, i64) -> bool) -> bool {
        self.degrees_of(x).into_iter().all(|(p, q)| keep(p, q))
    }

    /// Components of `X` by bidegree.
    pub fn components(&self, x: &Mat) -> BTreeMap<(i64, i64), Mat> {
        let xa = self.to_adapted(x);
        let d = self.dim();
        let mut parts: BTreeMap<(i64, i64), Mat> = BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                let v = &xa[(i, j)];
                if Scalar::is_zero(v) {
                    continue;
                }
                let (a, b) = (self.degrees[i], self.degrees[j]);
                let part = parts.entry((a.0 - b.0, a.1 - b.1)).or_insert_with(|| Mat::zeros(d, d));
                part[(i, j)] = v.clone();
            }
        }
        parts.into_iter().map(|(k, m)| (k, self.from_adapted(&m))).collect()
    }
}

/// `g^{p,q}` and the subalgebras built from it.
#[derive(Debug, Clone, PartialEq)]
pub struct LieSplit {
    pub ambient: usize,
    pub pieces: BTreeMap<(i64, i64), Subspace>,
    pub s_f: Subspace,
    pub s_w: Subspace,
    pub s_inf: Subspace,
    pub m_x: Subspace,
    pub s_f_perp: Subspace,
    pub frame: SplitFrame,
}

impl LieSplit {
    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        let d = self.ambient;
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(d * d))
    }

    pub fn sum_where(&self, keep: impl Fn(i64, i64) -> bool) -> Subspace {
        let d = self.ambient;
        Subspace::sum_all(d * d, self.pieces.iter().filter(|((p, q), _)| keep(*p, *q)).map(|(_, s)| s))
    }

    /// `W_l(g) = sum of g^{p,q}` with `p + q <= l`.
    pub fn w_level(&self, l: i64) -> Subspace {
        self.sum_where(|p, q| p + q <= l)
    }

    pub fn diamond(&self) -> HodgeDiamond {
        HodgeDiamond::new(self.pieces.iter().map(|(k, s)| (*k, s.dim())))
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(Subspace::dim).sum()
    }

    pub fn basis_of(&self, s: &Subspace) -> Vec<Mat> {
        s.vectors().iter().map(|v| unflatten(self.ambient, v)).collect()
    }
}

/// Bigrading of `l` induced by the Deligne splitting of `m`.
pub fn lie_deligne_split(l: &LieAlgebraBasis, m: &MixedHodge) -> Result<LieSplit> {
    let split = deligne_split(m)?;
    lie_split_with(l, &split)
}

/// Same, from a splitting already in hand.
pub fn lie_split_with(l: &LieAlgebraBasis, split: &DeligneSplitting) -> Result<LieSplit> {
    let d = l.ambient();
    let frame = SplitFrame::new(split);
    let mut spans: BTreeMap<(i64, i64), Vec<Vec<GaussScalar>>> = BTreeMap::new();
    for x in &l.basis {
        for (k, part) in frame.components(x) {
            if !l.contains(&part) {
                return Err(HodgeError::NotMixedHodge(format!(
                    "component of bidegree {k:?} leaves the Lie algebra"
                )));
            }
            spans.entry(k).or_default().push(flatten(&part));
        }
    }
    let pieces: BTreeMap<(i64, i64), Subspace> =
        spans.into_iter().map(|(k, vs)| (k, Subspace::span(d * d, &vs))).collect();
    let total: usize = pieces.values().map(Subspace::dim).sum();
    if total != l.dim() {
        return Err(HodgeError::NotMixedHodge(format!("bigraded pieces have total dimension {total}, expected {}", l.dim())));
    }
    let sum = |keep: &dyn Fn(i64, i64) -> bool| {
        Subspace::sum_all(d * d, pieces.iter().filter(|((p, q), _)| keep(*p, *q)).map(|(_, s)| s))
    };
    Ok(LieSplit {
        ambient: d,
        s_f: sum(&|p, _| p >= 0),
        s_w: sum(&|p, q| p + q <= 0),
        s_inf: sum(&|_, q| q <= 0),
        m_x: sum(&|p, q| p <= 0 && q <= 0),
        s_f_perp: sum(&|p, _| p < 0),
        pieces,
        frame,
    })
}

/// `g^{p,q} = 0` once `|p| > 1` or `|q| > 1`; then also `[s_F^perp, W_{-2}(g)] = 0`.
pub fn hermitian_test(s: &LieSplit) -> Verdict {
    if let Some((&(p, q), _)) = s.pieces.iter().find(|((p, q), sp)| (p.abs() > 1 || q.abs() > 1) && !sp.is_zero()) {
        return Verdict::fail(format!("g^{{{p},{q}}} is nonzero"));
    }
    let perp = s.basis_of(&s.s_f_perp);
    let w2 = s.basis_of(&s.w_level(-2));
    for x in &perp {
        for y in &w2 {
            if !x.bracket(y).is_zero() {
                return Verdict::fail("s_F^perp does not commute with W_{-2}(g)");
            }
        }
    }
    Verdict::Pass
}

/// `s_F^perp ⊆ W_0(g)`.
pub fn smoothness_test(s: &LieSplit) -> Verdict {
    Verdict::from_bool(s.w_level(0).contains_space(&s.s_f_perp), || {
        let bad: Vec<String> = s
            .pieces
            .iter()
            .filter(|((p, q), sp)| *p < 0 && p + q > 0 && !sp.is_zero())
            .map(|((p, q), _)| format!("({p},{q})"))
            .collect();
        format!("s_F^perp has components outside W_0(g): {}", bad.join(" "))
    })
}

/// `[g^{p,q}, g^{r,s}] ⊆ g^{p+r,q+s}`.
pub fn bracket_compatibility(s: &LieSplit) -> Verdict {
    let bases: Vec<((i64, i64), Vec<Mat>)> = s.pieces.iter().map(|(k, sp)| (*k, s.basis_of(sp))).collect();
    for (a, xs) in &bases {
        for (b, ys) in &bases {
            let target = s.piece(a.0 + b.0, a.1 + b.1);
            for x in xs {
                for y in ys {
                    let z = x.bracket(y);
                    if !z.is_zero() && !target.contains(&flatten(&z)) {
                        return Verdict::fail(format!("[g^{a:?}, g^{b:?}] leaves g^{:?}", (a.0 + b.0, a.1 + b.1)));
                    }
                }
            }
        }
    }
    Verdict::Pass
}

/// `X(I^{p,q}) ⊆ I^{p+r,q+s}` for `X` in `g^{r,s}`, through the map `act` into `End(H)`.
pub fn action_compatibility(s: &LieSplit, target: &DeligneSplitting, act: impl Fn(&Mat) -> Mat) -> Verdict {
    for (&(r, t), sp) in &s.pieces {
        for x in s.basis_of(sp) {
            let xh = act(&x);
            for (&(p, q), piece) in target.pieces() {
                let img = piece.image(&xh);
                if !img.is_zero() && !target.piece(p + r, q + t).contains_space(&img) {
                    return Verdict::fail(format!("g^{{{r},{t}}} maps I^{{{p},{q}}} outside I^{{{},{}}}", p + r, q + t));
                }
            }
        }
    }
    Verdict::Pass
}

/// Each generator lies in the sum of `g^{p,q}` with `p, q <= -1`.
pub fn cone_containment(s: &LieSplit, cone: &[Mat]) -> Verdict {
    let target = s.sum_where(|p, q| p <= -1 && q <= -1);
    for (j, n) in cone.iter().enumerate() {
        if !target.contains(&flatten(n)) {
            return Verdict::fail(format!("N_{} has components with p > -1 or q > -1", j + 1));
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::gi;

    fn symplectic(g: usize) -> Mat {
        let d = 2 * g;
        let mut q = Mat::zeros(d, d);
        for i in 0..g {
            q[(i, g + i)] = gi(1, 0);
            q[(g + i, i)] = gi(-1, 0);
        }
        q
    }

    #[test]
    fn classical_dimensions() {
        assert_eq!(lie_algebra(&symplectic(1)).unwrap().dim(), 3);
        assert_eq!(lie_algebra(&symplectic(3)).unwrap().dim(), 21);
        assert_eq!(lie_algebra(&Mat::identity(5)).unwrap().dim(), 10);
        assert!(lie_algebra(&Mat::zeros(2, 2)).is_err());
    }

    #[test]
    fn closed_under_bracket() {
        let l = lie_algebra(&symplectic(2)).unwrap();
        assert!(l.basis.iter().all(|x| l.contains(x)));
        assert!(l.is_closed());
    }

    #[test]
    fn general_form_uses_kernel() {
        // neither symmetric nor skew
        let q = Mat::from_rows(&[vec![gi(1, 0), gi(1, 0)], vec![gi(0, 0), gi(1, 0)]]);
        let l = lie_algebra(&q).unwrap();
        assert!(l.basis.iter().all(|x| l.contains(x)));
        // o(sym part) is traceless, hence inside sp(skew part)
        assert_eq!(l.dim(), 1);
    }

    #[test]
    fn centralizer_of_sl2_nilpotent() {
        let l = lie_algebra(&symplectic(1)).unwrap();
        let n = Mat::from_rows(&[vec![gi(0, 0), gi(0, 0)], vec![gi(1, 0), gi(0, 0)]]);
        let z = centralizer(&l, &[n.clone()]);
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&flatten(&n)));
        assert_eq!(centralizer(&l, &[]).dim(), 3);
    }
}
