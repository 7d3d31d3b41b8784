//! Mixed Hodge structures, Deligne splittings, diamonds and polarization.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{HodgeError, Result};
use crate::exactlin::{i_pow, is_direct_sum, is_hermitian_positive_definite, GaussScalar, Mat, Scalar, Subspace};
use crate::filtrations::{pairing_vanishes, weight_axioms, weight_filtration, DecreasingFiltration, IncreasingFiltration};
use crate::verdict::Verdict;

/// The datum `(W, F, Q)` of weight `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedHodge {
    pub n: i64,
    pub w: IncreasingFiltration,
    pub f: DecreasingFiltration,
    pub q: Mat,
}

impl MixedHodge {
    pub fn new(n: i64, w: IncreasingFiltration, f: DecreasingFiltration, q: Mat) -> Result<Self> {
        let d = q.rows();
        if !q.is_square() {
            return Err(HodgeError::DimensionMismatch { expected: d, found: q.cols() });
        }
        for found in [w.ambient_dim(), f.ambient_dim()] {
            if found != d {
                return Err(HodgeError::DimensionMismatch { expected: d, found });
            }
        }
        if Scalar::is_zero(&q.determinant()) {
            return Err(HodgeError::DegenerateForm);
        }
        let sign = if n.rem_euclid(2) == 0 { GaussScalar::one() } else { -GaussScalar::one() };
        if q.transpose() != q.scale(&sign) {
            return Err(HodgeError::InvalidInput(format!("form is not (-1)^{n}-symmetric")));
        }
        Ok(MixedHodge { n, w, f, q })
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }
}

/// Bigrading `I^{p,q}`; only nonzero pieces are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DeligneSplitting {
    ambient: usize,
    pieces: BTreeMap<(i64, i64), Subspace>,
}

impl DeligneSplitting {
    /// Wraps pieces without checking the splitting identities.
    pub fn from_pieces(ambient: usize, pieces: impl IntoIterator<Item = ((i64, i64), Subspace)>) -> Self {
        let pieces = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        DeligneSplitting { ambient, pieces }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// Sum of the pieces whose bidegree satisfies `keep`.
    pub fn sum_where(&self, keep: impl Fn(i64, i64) -> bool) -> Subspace {
        Subspace::sum_all(self.ambient, self.pieces.iter().filter(|((p, q), _)| keep(*p, *q)).map(|(_, s)| s))
    }

    /// `(p, q)` with `v` in `I^{p,q}`, if `v` lies in a single piece.
    pub fn bidegree_of(&self, v: &[GaussScalar]) -> Option<(i64, i64)> {
        self.pieces.iter().find(|(_, s)| s.contains(v)).map(|(k, _)| *k)
    }

    /// Transport along an ambient isomorphism.
    pub fn image(&self, a: &Mat) -> Self {
        DeligneSplitting::from_pieces(self.ambient, self.pieces.iter().map(|(k, s)| (*k, s.image(a))))
    }

    /// The identities tying the pieces to `W` and `F`, plus the conjugation congruence.
    pub fn verify(&self, w: &IncreasingFiltration, f: &DecreasingFiltration) -> Verdict {
        let all: Vec<&Subspace> = self.pieces.values().collect();
        if !is_direct_sum(self.ambient, &all) {
            return Verdict::fail("pieces are not independent");
        }
        if self.pieces.values().map(Subspace::dim).sum::<usize>() != self.ambient {
            return Verdict::fail("pieces do not span");
        }
        for k in f.lowest() - 1..=f.highest() + 1 {
            if self.sum_where(|p, _| p >= k) != f.get(k) {
                return Verdict::fail(format!("F^{k} is not the sum of pieces with p >= {k}"));
            }
        }
        for l in w.lowest() - 1..=w.highest() + 1 {
            if self.sum_where(|p, q| p + q <= l) != w.get(l) {
                return Verdict::fail(format!("W_{l} is not the sum of pieces with p + q <= {l}"));
            }
        }
        for (&(p, q), s) in &self.pieces {
            let target = self.piece(q, p).sum(&self.sum_where(|r, t| r < q && t < p));
            if !target.contains_space(&s.conjugate()) {
                return Verdict::fail(format!("conj(I^{{{p},{q}}}) leaves I^{{{q},{p}}} modulo lower terms"));
            }
        }
        Verdict::Pass
    }
}

/// Dimension table `h^{p,q}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HodgeDiamond {
    dims: BTreeMap<(i64, i64), usize>,
}

impl HodgeDiamond {
    pub fn new(entries: impl IntoIterator<Item = ((i64, i64), usize)>) -> Self {
        let mut dims = BTreeMap::new();
        for (k, d) in entries {
            if d > 0 {
                *dims.entry(k).or_insert(0) += d;
            }
        }
        HodgeDiamond { dims }
    }

    pub fn get(&self, p: i64, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), usize> {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// Relabel `(p, q)` as `(p + dp, q + dq)`.
    pub fn shifted(&self, dp: i64, dq: i64) -> Self {
        HodgeDiamond::new(self.dims.iter().map(|(&(p, q), &d)| ((p + dp, q + dq), d)))
    }
}

impl fmt::Display for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ((p, q), d)) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({p},{q}):{d}")?;
        }
        Ok(())
    }
}

/// Commuting, Q-skew, nonzero nilpotent generators.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentCone {
    generators: Vec<Mat>,
}

impl NilpotentCone {
    pub fn new(generators: Vec<Mat>, q: &Mat) -> Result<Self> {
        let d = q.rows();
        for (j, n) in generators.iter().enumerate() {
            if n.rows() != d || n.cols() != d {
                return Err(HodgeError::DimensionMismatch { expected: d, found: n.rows() });
            }
            if n.is_zero() {
                return Err(HodgeError::InvalidInput(format!("cone generator {} is zero", j + 1)));
            }
            if n.nilpotency_index().is_none() {
                return Err(HodgeError::NotNilpotent);
            }
            if !q.mul(n).add(&n.transpose().mul(q)).is_zero() {
                return Err(HodgeError::InvalidInput(format!("cone generator {} is not Q-skew", j + 1)));
            }
            for (i, m) in generators.iter().enumerate().take(j) {
                if !n.bracket(m).is_zero() {
                    return Err(HodgeError::InvalidInput(format!("generators {} and {} do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(NilpotentCone { generators })
    }

    pub fn empty() -> Self {
        NilpotentCone { generators: Vec::new() }
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `sum c_j N_j`.
    pub fn combination(&self, coeffs: &[GaussScalar]) -> Mat {
        assert_eq!(coeffs.len(), self.generators.len());
        let d = self.generators.first().map_or(0, Mat::rows);
        self.generators.iter().zip(coeffs).fold(Mat::zeros(d, d), |acc, (n, c)| acc.add(&n.scale(c)))
    }

    /// `N_1 + ... + N_k`.
    pub fn interior(&self) -> Mat {
        self.combination(&vec![GaussScalar::one(); self.len()])
    }

    /// Sub-cone on the given generator indices.
    pub fn face(&self, indices: &[usize]) -> NilpotentCone {
        NilpotentCone { generators: indices.iter().map(|&i| self.generators[i].clone()).collect() }
    }
}

/// Deligne's bigrading, verified against the splitting identities.
pub fn deligne_split(m: &MixedHodge) -> Result<DeligneSplitting> {
    let s = deligne_pieces(&m.w, &m.f);
    match s.verify(&m.w, &m.f) {
        Verdict::Pass => Ok(s),
        Verdict::Fail(why) => Err(HodgeError::NotMixedHodge(why)),
    }
}

/// Deligne's formula without the verification step.
pub fn deligne_pieces(w: &IncreasingFiltration, f: &DecreasingFiltration) -> DeligneSplitting {
    let d = w.ambient_dim();
    let fbar = f.conjugate();
    let (plo, phi) = (f.lowest() - 1, f.highest());
    let (qlo, qhi) = (fbar.lowest() - 1, fbar.highest());
    let (wlo, whi) = (w.lowest(), w.highest());
    let mut pieces = Vec::new();
    for p in plo..=phi {
        let fp = f.get(p);
        for q in qlo..=qhi {
            let l = p + q;
            if l < wlo || l > whi + 1 {
                continue;
            }
            let wl = w.get(l);
            let left = fp.intersect(&wl);
            if left.is_zero() {
                continue;
            }
            let mut right = fbar.get(q).intersect(&wl);
            let mut j = 1;
            while l - j - 1 >= wlo {
                right = right.sum(&fbar.get(q - j).intersect(&w.get(l - j - 1)));
                j += 1;
            }
            let piece = left.intersect(&right);
            if !piece.is_zero() {
                pieces.push(((p, q), piece));
            }
        }
    }
    DeligneSplitting::from_pieces(d, pieces)
}

/// `F_inf^k = sum of pieces with q <= n - k`.
pub fn f_infinity(s: &DeligneSplitting, n: i64) -> DecreasingFiltration {
    let leveled: Vec<(i64, Vec<GaussScalar>)> =
        s.pieces.iter().flat_map(|(&(_, q), sp)| sp.vectors().into_iter().map(move |v| (n - q, v))).collect();
    DecreasingFiltration::from_levels(s.ambient, &leveled)
}

pub fn hodge_diamond(s: &DeligneSplitting) -> HodgeDiamond {
    HodgeDiamond::new(s.pieces.iter().map(|(k, sp)| (*k, sp.dim())))
}

/// `h^{p,q} = h^{q,p}`.
pub fn check_conjugate_symmetry(d: &HodgeDiamond) -> Verdict {
    for (&(p, q), &h) in &d.dims {
        if d.get(q, p) != h {
            return Verdict::fail(format!("h^{{{p},{q}}} = {h} but h^{{{q},{p}}} = {}", d.get(q, p)));
        }
    }
    Verdict::Pass
}

/// Both symmetries of a polarized limit: `h^{p,q} = h^{q,p} = h^{n-q,n-p}`.
pub fn check_symmetries(d: &HodgeDiamond, n: i64) -> Verdict {
    check_conjugate_symmetry(d).and(|| {
        for (&(p, q), &h) in &d.dims {
            let (a, b) = (n - q, n - p);
            if d.get(a, b) != h {
                return Verdict::fail(format!("h^{{{p},{q}}} = {h} but h^{{{a},{b}}} = {}", d.get(a, b)));
            }
        }
        Verdict::Pass
    })
}

/// Whether the cone polarizes `(W, F)`: weight filtration, horizontality, first and second
/// bilinear relations on primitive pieces. Checked for two interior elements.
pub fn polarization_check(m: &MixedHodge, cone: &NilpotentCone) -> Result<Verdict> {
    let d = m.dim();
    for n_op in cone.generators() {
        if !m.w.is_preserved_by(n_op, -2) {
            return Err(HodgeError::InvalidInput("cone does not lower W by two".into()));
        }
    }
    let split = match deligne_split(m) {
        Ok(s) => s,
        Err(HodgeError::NotMixedHodge(why)) => return Ok(Verdict::fail(format!("not a mixed Hodge structure: {why}"))),
        Err(e) => return Err(e),
    };
    for p in m.f.lowest()..=m.f.highest() + 1 {
        let partner = m.n - p + 1;
        if !pairing_vanishes(&m.q, &m.f.get(p), &m.f.get(partner)) {
            return Ok(Verdict::fail(format!("Q(F^{p}, F^{partner}) != 0")));
        }
    }
    let interiors: Vec<Mat> = if cone.is_empty() {
        vec![Mat::zeros(d, d)]
    } else {
        let weighted: Vec<GaussScalar> = (1..=cone.len() as i64).map(GaussScalar::from_i64).collect();
        vec![cone.interior(), cone.combination(&weighted)]
    };
    for n_op in &interiors {
        let v = polarized_by(m, &split, n_op)?;
        if !v.is_pass() {
            return Ok(v);
        }
    }
    Ok(Verdict::Pass)
}

fn polarized_by(m: &MixedHodge, split: &DeligneSplitting, n_op: &Mat) -> Result<Verdict> {
    let wn = weight_filtration(n_op, m.n)?;
    if wn != m.w {
        return Ok(Verdict::fail("W differs from the weight filtration of the cone, recentered at n"));
    }
    let ax = weight_axioms(&wn, n_op, m.n);
    if !ax.is_pass() {
        return Ok(ax);
    }
    for p in m.f.lowest()..=m.f.highest() + 1 {
        if !m.f.get(p - 1).contains_space(&m.f.get(p).image(n_op)) {
            return Ok(Verdict::fail(format!("N F^{p} is not contained in F^{}", p - 1)));
        }
    }
    for (&(p, q), piece) in split.pieces() {
        let l = p + q - m.n;
        if l < 0 {
            continue;
        }
        let prim = piece.intersect(&Subspace::span(m.dim(), &n_op.pow(l as usize + 1).kernel_vectors()));
        if prim.is_zero() {
            continue;
        }
        let h = primitive_form(&m.q, n_op, &prim, p - q, l as usize);
        if !is_hermitian_positive_definite(&h) {
            return Ok(Verdict::fail(format!("i^(p-q) Q(u, N^l conj u) is not positive on the primitive part of I^{{{p},{q}}}")));
        }
    }
    Ok(Verdict::Pass)
}

/// Gram matrix of `i^{k} Q(u, N^l conj v)` on a basis of `s`.
pub fn primitive_form(q: &Mat, n_op: &Mat, s: &Subspace, k: i64, l: usize) -> Mat {
    let b = s.basis();
    let nl = n_op.pow(l);
    b.mul(q).mul(&nl).mul(&b.adjoint()).scale(&i_pow::<GaussScalar>(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{gi, unit};

    fn elliptic(sign: i64) -> (MixedHodge, NilpotentCone) {
        let q = Mat::from_rows(&[vec![gi(0, 0), gi(sign, 0)], vec![gi(-sign, 0), gi(0, 0)]]);
        let n = Mat::from_rows(&[vec![gi(0, 0), gi(0, 0)], vec![gi(1, 0), gi(0, 0)]]);
        let w = weight_filtration(&n, 1).unwrap();
        let f = DecreasingFiltration::new(2, vec![(1, Subspace::span(2, &[unit(2, 0)]))]).unwrap();
        let cone = NilpotentCone::new(vec![n], &q).unwrap();
        (MixedHodge::new(1, w, f, q).unwrap(), cone)
    }

    #[test]
    fn elliptic_split() {
        let (m, _) = elliptic(1);
        let s = deligne_split(&m).unwrap();
        assert_eq!(s.piece(1, 1), Subspace::span(2, &[unit(2, 0)]));
        assert_eq!(s.piece(0, 0), Subspace::span(2, &[unit(2, 1)]));
        assert_eq!(s.pieces().len(), 2);
        let finf = f_infinity(&s, 1);
        assert_eq!(finf.get(1), Subspace::span(2, &[unit(2, 1)]));
        assert!(finf.get(0).is_full());
    }

    #[test]
    fn elliptic_polarization_sign() {
        let (m, cone) = elliptic(1);
        assert!(polarization_check(&m, &cone).unwrap().is_pass());
        let (m, cone) = elliptic(-1);
        assert!(!polarization_check(&m, &cone).unwrap().is_pass());
    }

    #[test]
    fn pure_weight_one() {
        // H^{1,0} = span(1, i), Q(e0, e1) = 1
        let q = Mat::from_rows(&[vec![gi(0, 0), gi(1, 0)], vec![gi(-1, 0), gi(0, 0)]]);
        let f1 = Subspace::span(2, &[vec![gi(1, 0), gi(0, 1)]]);
        let m = MixedHodge::new(
            1,
            IncreasingFiltration::trivial(2, 1),
            DecreasingFiltration::new(2, vec![(1, f1.clone())]).unwrap(),
            q,
        )
        .unwrap();
        let s = deligne_split(&m).unwrap();
        assert_eq!(s.piece(1, 0), f1);
        assert_eq!(s.piece(0, 1), f1.conjugate());
        // i Q(u, conj u) with u = (1, i): i * (1 * (-i) - i * 1) = 2
        assert!(polarization_check(&m, &NilpotentCone::empty()).unwrap().is_pass());
    }

    #[test]
    fn real_hodge_line_is_rejected() {
        let q = Mat::from_rows(&[vec![gi(0, 0), gi(1, 0)], vec![gi(-1, 0), gi(0, 0)]]);
        let m = MixedHodge::new(
            1,
            IncreasingFiltration::trivial(2, 1),
            DecreasingFiltration::new(2, vec![(1, Subspace::span(2, &[unit(2, 0)]))]).unwrap(),
            q,
        )
        .unwrap();
        assert!(matches!(deligne_split(&m), Err(HodgeError::NotMixedHodge(_))));
    }

    #[test]
    fn symmetry_checks() {
        assert!(!check_symmetries(&HodgeDiamond::new([((1, 0), 1)]), 1).is_pass());
        assert!(!check_symmetries(&HodgeDiamond::new([((2, 2), 1), ((1, 1), 0)]), 2).is_pass());
        assert!(check_symmetries(&HodgeDiamond::new([((1, 1), 1), ((0, 0), 1)]), 1).is_pass());
    }

    #[test]
    fn cone_validation() {
        let (m, _) = elliptic(1);
        assert!(NilpotentCone::new(vec![Mat::zeros(2, 2)], &m.q).is_err());
        let flip = Mat::from_rows(&[vec![gi(0, 0), gi(0, 0)], vec![gi(1, 0), gi(0, 0)]]);
        assert!(NilpotentCone::new(vec![flip.clone()], &m.q).is_ok());
        assert!(NilpotentCone::new(vec![flip], &Mat::identity(2)).is_err());
    }
}
