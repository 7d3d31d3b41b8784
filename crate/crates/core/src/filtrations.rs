//! Weight and Hodge filtrations, the weight filtration of a nilpotent operator,
//! and Q-isotropy.

use crate::error::{HodgeError, Result};
use crate::exactlin::{vec_is_zero, GaussScalar, Mat, Scalar, Subspace};
use crate::verdict::Verdict;

/// Increasing filtration `W_l`, zero below `lo` and full from `lo + steps.len() - 1` on.
#[derive(Debug, Clone, PartialEq)]
pub struct IncreasingFiltration {
    ambient: usize,
    lo: i64,
    steps: Vec<Subspace>,
}

/// Decreasing filtration `F^p`, full below `lo` and zero from `lo + steps.len()` on.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingFiltration {
    ambient: usize,
    lo: i64,
    steps: Vec<Subspace>,
}

impl IncreasingFiltration {
    /// From explicit steps; indices missing from the list inherit the nearest step below.
    pub fn new(ambient: usize, mut entries: Vec<(i64, Subspace)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        if entries.is_empty() {
            return Ok(Self::trivial(ambient, 0));
        }
        for (_, s) in &entries {
            if s.ambient_dim() != ambient {
                return Err(HodgeError::DimensionMismatch { expected: ambient, found: s.ambient_dim() });
            }
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(HodgeError::InvalidInput(format!("duplicate weight index {}", w[0].0)));
            }
            if !w[1].1.contains_space(&w[0].1) {
                return Err(HodgeError::InvalidInput(format!("W_{} is not contained in W_{}", w[0].0, w[1].0)));
            }
        }
        if !entries.last().unwrap().1.is_full() {
            return Err(HodgeError::InvalidInput("top weight step is not the full space".into()));
        }
        let lo = entries[0].0;
        let hi = entries.last().unwrap().0;
        let mut steps = Vec::with_capacity((hi - lo + 1) as usize);
        let mut k = 0;
        for l in lo..=hi {
            while k + 1 < entries.len() && entries[k + 1].0 <= l {
                k += 1;
            }
            steps.push(entries[k].1.clone());
        }
        Ok(Self::normalized(ambient, lo, steps))
    }

    /// `W_{l-1} = 0`, `W_l = V`.
    pub fn trivial(ambient: usize, l: i64) -> Self {
        IncreasingFiltration { ambient, lo: l, steps: vec![Subspace::full(ambient)] }
    }

    /// Filtration generated by vectors with assigned levels.
    pub fn from_levels(ambient: usize, vectors: &[(i64, Vec<GaussScalar>)]) -> Self {
        if vectors.is_empty() {
            return Self::trivial(ambient, 0);
        }
        let lo = vectors.iter().map(|v| v.0).min().unwrap();
        let hi = vectors.iter().map(|v| v.0).max().unwrap();
        let steps = (lo..=hi)
            .map(|l| {
                let vs: Vec<_> = vectors.iter().filter(|v| v.0 <= l).map(|v| v.1.clone()).collect();
                Subspace::span(ambient, &vs)
            })
            .collect();
        Self::normalized(ambient, lo, steps)
    }

    fn normalized(ambient: usize, mut lo: i64, mut steps: Vec<Subspace>) -> Self {
        while steps.len() > 1 && steps[0].is_zero() {
            steps.remove(0);
            lo += 1;
        }
        while steps.len() > 1 && steps[steps.len() - 2].is_full() {
            steps.pop();
        }
        IncreasingFiltration { ambient, lo, steps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Lowest index with a nonzero step.
    pub fn lowest(&self) -> i64 {
        self.lo
    }

    /// Lowest index whose step is the whole space.
    pub fn highest(&self) -> i64 {
        self.lo + self.steps.len() as i64 - 1
    }

    pub fn get(&self, l: i64) -> Subspace {
        if l < self.lo {
            Subspace::zero(self.ambient)
        } else if l > self.highest() {
            Subspace::full(self.ambient)
        } else {
            self.steps[(l - self.lo) as usize].clone()
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = (i64, &Subspace)> {
        self.steps.iter().enumerate().map(move |(k, s)| (self.lo + k as i64, s))
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.steps().map(|(l, s)| (l, s.dim())).collect()
    }

    /// `W[k]_l = W_{l+k}`.
    pub fn shift(&self, k: i64) -> Self {
        IncreasingFiltration { ambient: self.ambient, lo: self.lo - k, steps: self.steps.clone() }
    }

    pub fn image(&self, a: &Mat) -> Self {
        let steps = self.steps.iter().map(|s| s.image(a)).collect();
        Self::normalized(self.ambient, self.lo, steps)
    }

    pub fn conjugate(&self) -> Self {
        let steps = self.steps.iter().map(Subspace::conjugate).collect();
        Self::normalized(self.ambient, self.lo, steps)
    }

    /// Whether `A W_l ⊆ W_{l+shift}` for all `l`.
    pub fn is_preserved_by(&self, a: &Mat, shift: i64) -> bool {
        (self.lo - 1..=self.highest()).all(|l| self.get(l + shift).contains_space(&self.get(l).image(a)))
    }
}

impl DecreasingFiltration {
    /// From explicit steps; indices missing from the list inherit the nearest step above.
    pub fn new(ambient: usize, mut entries: Vec<(i64, Subspace)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        if entries.is_empty() {
            return Ok(Self::trivial(ambient, 0));
        }
        for (_, s) in &entries {
            if s.ambient_dim() != ambient {
                return Err(HodgeError::DimensionMismatch { expected: ambient, found: s.ambient_dim() });
            }
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(HodgeError::InvalidInput(format!("duplicate Hodge index {}", w[0].0)));
            }
            if !w[0].1.contains_space(&w[1].1) {
                return Err(HodgeError::InvalidInput(format!("F^{} is not contained in F^{}", w[1].0, w[0].0)));
            }
        }
        let lo = entries[0].0;
        let hi = entries.last().unwrap().0;
        let mut steps = Vec::new();
        let mut k = entries.len() - 1;
        for p in (lo..=hi).rev() {
            while k > 0 && entries[k].0 > p {
                k -= 1;
            }
            steps.push(entries[k].1.clone());
        }
        steps.reverse();
        let mut f = Self::normalized(ambient, lo, steps);
        if !entries[0].1.is_full() {
            // below the first given index the filtration is everything
            f.steps.insert(0, Subspace::full(ambient));
            f.lo -= 1;
            f = Self::normalized(ambient, f.lo, f.steps);
        }
        Ok(f)
    }

    /// `F^p = V` for `p <= top`, zero above.
    pub fn trivial(ambient: usize, top: i64) -> Self {
        DecreasingFiltration { ambient, lo: top, steps: vec![Subspace::full(ambient)] }
    }

    /// Filtration generated by vectors with assigned Hodge indices: `F^p` spans those with index `>= p`.
    pub fn from_levels(ambient: usize, vectors: &[(i64, Vec<GaussScalar>)]) -> Self {
        if vectors.is_empty() {
            return Self::trivial(ambient, 0);
        }
        let lo = vectors.iter().map(|v| v.0).min().unwrap();
        let hi = vectors.iter().map(|v| v.0).max().unwrap();
        let steps = (lo..=hi)
            .map(|p| {
                let vs: Vec<_> = vectors.iter().filter(|v| v.0 >= p).map(|v| v.1.clone()).collect();
                Subspace::span(ambient, &vs)
            })
            .collect();
        Self::normalized(ambient, lo, steps)
    }

    fn normalized(ambient: usize, mut lo: i64, mut steps: Vec<Subspace>) -> Self {
        while steps.len() > 1 && steps[1].is_full() {
            steps.remove(0);
            lo += 1;
        }
        while steps.len() > 1 && steps.last().unwrap().is_zero() {
            steps.pop();
        }
        DecreasingFiltration { ambient, lo, steps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `F^p` is the whole space for every `p` below this index.
    pub fn lowest(&self) -> i64 {
        self.lo
    }

    /// Largest index with `F^p` nonzero.
    pub fn highest(&self) -> i64 {
        self.lo + self.steps.len() as i64 - 1
    }

    pub fn get(&self, p: i64) -> Subspace {
        if p < self.lo {
            Subspace::full(self.ambient)
        } else if p > self.highest() {
            Subspace::zero(self.ambient)
        } else {
            self.steps[(p - self.lo) as usize].clone()
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = (i64, &Subspace)> {
        self.steps.iter().enumerate().map(move |(k, s)| (self.lo + k as i64, s))
    }

    /// `d_p = dim F^p` over the support.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.steps().map(|(p, s)| (p, s.dim())).collect()
    }

    pub fn is_effective(&self) -> bool {
        self.lo >= 0 || self.get(0).is_full()
    }

    /// `F[k]^p = F^{p+k}`.
    pub fn shift(&self, k: i64) -> Self {
        DecreasingFiltration { ambient: self.ambient, lo: self.lo - k, steps: self.steps.clone() }
    }

    pub fn image(&self, a: &Mat) -> Self {
        let steps = self.steps.iter().map(|s| s.image(a)).collect();
        Self::normalized(self.ambient, self.lo, steps)
    }

    pub fn conjugate(&self) -> Self {
        let steps = self.steps.iter().map(Subspace::conjugate).collect();
        Self::normalized(self.ambient, self.lo, steps)
    }
}

/// A nilpotent Jordan chain `top, N top, ..., N^{len-1} top`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanChain {
    pub top: Vec<GaussScalar>,
    pub len: usize,
}

impl JordanChain {
    pub fn vectors(&self, n_op: &Mat) -> Vec<Vec<GaussScalar>> {
        let mut out = vec![self.top.clone()];
        for _ in 1..self.len {
            out.push(n_op.mul_vec(out.last().unwrap()));
        }
        out
    }
}

/// Exact Jordan chains of a nilpotent operator, longest first.
pub fn jordan_chains(n_op: &Mat) -> Result<Vec<JordanChain>> {
    if !n_op.is_square() {
        return Err(HodgeError::DimensionMismatch { expected: n_op.rows(), found: n_op.cols() });
    }
    let d = n_op.rows();
    let r = n_op.nilpotency_index().ok_or(HodgeError::NotNilpotent)?;
    let mut kers = vec![Subspace::zero(d)];
    let mut p = Mat::identity(d);
    for _ in 1..=r {
        p = p.mul(n_op);
        kers.push(Subspace::span(d, &p.kernel_vectors()));
    }
    let mut chains: Vec<JordanChain> = Vec::new();
    for k in (1..=r).rev() {
        let mut known = kers[k - 1].clone();
        let pushed: Vec<Vec<GaussScalar>> =
            chains.iter().map(|c| n_op.pow(c.len - k).mul_vec(&c.top)).collect();
        known = known.sum(&Subspace::span(d, &pushed));
        for top in known.complement_in(&kers[k]) {
            chains.push(JordanChain { top, len: k });
        }
    }
    Ok(chains)
}

/// Weight filtration of a nilpotent operator, centered at `center`.
///
/// A chain of length `s` places `N^i top` in weight `center + s - 1 - 2i`.
pub fn weight_filtration(n_op: &Mat, center: i64) -> Result<IncreasingFiltration> {
    let d = n_op.rows();
    let chains = jordan_chains(n_op)?;
    let mut leveled = Vec::with_capacity(d);
    for c in &chains {
        for (i, v) in c.vectors(n_op).into_iter().enumerate() {
            leveled.push((center + c.len as i64 - 1 - 2 * i as i64, v));
        }
    }
    let w = IncreasingFiltration::from_levels(d, &leveled);
    debug_assert!(weight_axioms(&w, n_op, center).is_pass());
    Ok(w)
}

/// Both defining properties of a weight filtration centered at `center`.
pub fn weight_axioms(w: &IncreasingFiltration, n_op: &Mat, center: i64) -> Verdict {
    if !w.is_preserved_by(n_op, -2) {
        return Verdict::fail("N W_l is not contained in W_{l-2}");
    }
    let top = w.highest() - center;
    for l in 1..=top.max(0) {
        // N^l : Gr_{c+l} -> Gr_{c-l} is injective and the dims match
        let hi = w.get(center + l);
        let hi_below = w.get(center + l - 1);
        let lo_dim = w.get(center - l).dim() - w.get(center - l - 1).dim();
        let gr_hi = hi.dim() - hi_below.dim();
        if gr_hi != lo_dim {
            return Verdict::fail(format!("dim Gr_{} != dim Gr_{}", center + l, center - l));
        }
        let nl = n_op.pow(l as usize);
        let image = hi.image(&nl).sum(&w.get(center - l - 1));
        if image.dim() - w.get(center - l - 1).dim() != gr_hi {
            return Verdict::fail(format!("N^{l} is not an isomorphism Gr_{} -> Gr_{}", center + l, center - l));
        }
    }
    Verdict::Pass
}

fn check_form(q: &Mat) -> Result<()> {
    if !q.is_square() {
        return Err(HodgeError::DimensionMismatch { expected: q.rows(), found: q.cols() });
    }
    if Scalar::is_zero(&q.determinant()) {
        return Err(HodgeError::DegenerateForm);
    }
    Ok(())
}

/// `Q(A, B) = 0` for the row spaces `A`, `B`.
pub fn pairing_vanishes(q: &Mat, a: &Subspace, b: &Subspace) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    a.basis().mul(q).mul(&b.basis().transpose()).is_zero()
}

/// `Q(W_l, W_m) = 0` whenever `l + m < 2n`.
pub fn isotropy_check(w: &IncreasingFiltration, q: &Mat, n: i64) -> Result<Verdict> {
    check_form(q)?;
    if q.rows() != w.ambient_dim() {
        return Err(HodgeError::DimensionMismatch { expected: w.ambient_dim(), found: q.rows() });
    }
    for l in w.lowest()..=w.highest() {
        let m = 2 * n - 1 - l;
        if !pairing_vanishes(q, &w.get(l), &w.get(m)) {
            return Ok(Verdict::fail(format!("Q(W_{l}, W_{m}) != 0")));
        }
    }
    Ok(Verdict::Pass)
}

/// Least `l` with `v` in `W_l`.
pub fn level(v: &[GaussScalar], w: &IncreasingFiltration) -> Result<i64> {
    if vec_is_zero(v) {
        return Err(HodgeError::InvalidInput("level of the zero vector".into()));
    }
    (w.lowest()..=w.highest())
        .find(|&l| w.get(l).contains(v))
        .ok_or_else(|| HodgeError::DimensionMismatch { expected: w.ambient_dim(), found: v.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{gi, unit};

    fn shift_block(d: usize) -> Mat {
        let mut n = Mat::zeros(d, d);
        for i in 0..d - 1 {
            n[(i + 1, i)] = gi(1, 0);
        }
        n
    }

    #[test]
    fn zero_operator_is_pure() {
        let w = weight_filtration(&Mat::zeros(3, 3), 4).unwrap();
        assert!(w.get(3).is_zero());
        assert!(w.get(4).is_full());
    }

    #[test]
    fn three_block_dims() {
        let w = weight_filtration(&shift_block(3), 2).unwrap();
        let dims: Vec<usize> = (0..=4).map(|l| w.get(l).dim()).collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 3]);
        assert_eq!(w.get(0), Subspace::span(3, &[unit(3, 2)]));
    }

    #[test]
    fn non_nilpotent_rejected() {
        assert_eq!(weight_filtration(&Mat::identity(2), 0), Err(HodgeError::NotNilpotent));
    }

    #[test]
    fn elliptic_isotropy_and_levels() {
        let q = Mat::from_rows(&[vec![gi(0, 0), gi(1, 0)], vec![gi(-1, 0), gi(0, 0)]]);
        let w = weight_filtration(&shift_block(2), 1).unwrap();
        assert_eq!(w.get(0), Subspace::span(2, &[unit(2, 1)]));
        assert!(isotropy_check(&w, &q, 1).unwrap().is_pass());
        assert_eq!(level(&unit(2, 0), &w).unwrap(), 2);
        assert_eq!(level(&unit(2, 1), &w).unwrap(), 0);
        assert!(level(&[gi(0, 0), gi(0, 0)], &w).is_err());
    }

    #[test]
    fn everything_in_negative_weight_is_not_isotropic() {
        let q = Mat::identity(2);
        let w = IncreasingFiltration::trivial(2, -1);
        assert!(!isotropy_check(&w, &q, 1).unwrap().is_pass());
        assert_eq!(isotropy_check(&w, &Mat::zeros(2, 2), 1), Err(HodgeError::DegenerateForm));
    }

    #[test]
    fn decreasing_construction_fills_gaps() {
        let line = Subspace::span(2, &[unit(2, 0)]);
        let f = DecreasingFiltration::new(2, vec![(1, line.clone())]).unwrap();
        assert!(f.get(0).is_full());
        assert_eq!(f.get(1), line);
        assert!(f.get(2).is_zero());
        assert!(f.is_effective());
    }

    #[test]
    fn non_nested_rejected() {
        let a = Subspace::span(2, &[unit(2, 0)]);
        let b = Subspace::span(2, &[unit(2, 1)]);
        assert!(IncreasingFiltration::new(2, vec![(0, a), (1, b)]).is_err());
    }

    #[test]
    fn shift_convention() {
        let w = weight_filtration(&shift_block(2), 0).unwrap();
        let ws = w.shift(-1);
        for l in -3..4 {
            assert_eq!(ws.get(l), w.get(l - 1));
        }
    }
}
