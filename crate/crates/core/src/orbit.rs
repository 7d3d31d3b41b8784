//! Adapted bases, nilpotent orbit frames, the function `h~` and its stratum
//! values, and the per-instance checks built on them.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HodgeError, Result};
use crate::exactlin::{gauss_sqrt, i_pow, vec_conj, vec_scale, vec_sub, GaussScalar, Mat, Matrix, Scalar, Subspace};
use crate::filtrations::{level, weight_filtration, DecreasingFiltration, IncreasingFiltration};
use crate::induced::{locate_markers, InducedStructure, Markers};
use crate::lie::SplitFrame;
use crate::mhs::{deligne_split, polarization_check, DeligneSplitting, MixedHodge};
use crate::verdict::Verdict;

/// Basis `e_0, ..., e_d` with each vector in a Deligne piece, ordered by
/// decreasing `p` then increasing `q`, and `Q(e_i, e_j) = 1` exactly when `i + j = d`
/// (for `i <= j`).
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBasis {
    pub n: i64,
    matrix: Mat,
    degrees: Vec<(i64, i64)>,
}

impl AdaptedBasis {
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn vector(&self, i: usize) -> Vec<GaussScalar> {
        self.matrix.col(i)
    }

    pub fn degree(&self, i: usize) -> (i64, i64) {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[(i64, i64)] {
        &self.degrees
    }

    /// Index `i` with `span(e_i) = line`.
    pub fn index_spanning(&self, line: &Subspace) -> Option<usize> {
        if line.dim() != 1 {
            return None;
        }
        (0..self.dim()).find(|&i| line.contains(&self.vector(i)))
    }

    /// Gram matrix `B^T Q B`.
    pub fn gram(&self, q: &Mat) -> Mat {
        self.matrix.transpose().mul(q).mul(&self.matrix)
    }

    /// Anti-diagonal pairing check.
    pub fn check_pairing(&self, q: &Mat) -> Verdict {
        let g = self.gram(q);
        let d = self.dim() - 1;
        for i in 0..=d {
            for j in 0..=d {
                let v = &g[(i, j)];
                let expect_one = i + j == d && i <= j;
                if i + j != d && !Scalar::is_zero(v) {
                    return Verdict::fail(format!("Q(e_{i}, e_{j}) != 0"));
                }
                if expect_one && *v != GaussScalar::one() {
                    return Verdict::fail(format!("Q(e_{i}, e_{j}) != 1"));
                }
            }
        }
        Verdict::Pass
    }
}

/// Adapted basis for `(W, F, Q)` of weight `n`.
pub fn adapted_basis(f: &DecreasingFiltration, w: &IncreasingFiltration, q: &Mat, n: i64) -> Result<AdaptedBasis> {
    let m = MixedHodge::new(n, w.clone(), f.clone(), q.clone())?;
    let split = deligne_split(&m)?;
    adapted_from_split(&split, q, n)
}

/// Adapted basis built piece by piece from a Deligne splitting.
pub fn adapted_from_split(split: &DeligneSplitting, q: &Mat, n: i64) -> Result<AdaptedBasis> {
    let dim = split.ambient_dim();
    let mut keys: Vec<(i64, i64)> = split.pieces().keys().copied().collect();
    keys.sort_by_key(|&(p, qq)| (-p, qq));
    let mut start = Vec::with_capacity(keys.len());
    let mut off = 0;
    for k in &keys {
        start.push(off);
        off += split.piece(k.0, k.1).dim();
    }
    let d = dim - 1;
    let mut cols: Vec<Option<Vec<GaussScalar>>> = vec![None; dim];
    let mut degrees = vec![(0, 0); dim];
    for (idx, &(p, qq)) in keys.iter().enumerate() {
        let partner = (n - p, n - qq);
        let pidx = keys
            .iter()
            .position(|&k| k == partner)
            .ok_or_else(|| HodgeError::NotAdapted(format!("I^{{{p},{qq}}} has no partner I^{{{},{}}}", partner.0, partner.1)))?;
        let a = split.piece(p, qq).vectors();
        let k = a.len();
        if split.piece(partner.0, partner.1).dim() != k {
            return Err(HodgeError::NotAdapted(format!("I^{{{p},{qq}}} and its partner differ in dimension")));
        }
        if start[idx] + start[pidx] + k - 1 != d {
            return Err(HodgeError::NotAdapted("piece positions are not symmetric".into()));
        }
        match idx.cmp(&pidx) {
            std::cmp::Ordering::Less => {
                let b0 = split.piece(partner.0, partner.1).vectors();
                let gram = Mat::from_rows(&a).mul(q).mul(&Mat::from_cols(dim, &b0));
                let c = gram.inverse().map_err(|_| HodgeError::NotAdapted(format!("Q pairs I^{{{p},{qq}}} degenerately with its partner")))?;
                for i in 0..k {
                    let mut b = vec![GaussScalar::zero(); dim];
                    for (kk, bv) in b0.iter().enumerate() {
                        let coef = &c[(kk, i)];
                        if !Scalar::is_zero(coef) {
                            for (x, y) in b.iter_mut().zip(bv) {
                                *x = x.clone() + coef.clone() * y.clone();
                            }
                        }
                    }
                    cols[start[idx] + i] = Some(a[i].clone());
                    degrees[start[idx] + i] = (p, qq);
                    cols[d - start[idx] - i] = Some(b);
                    degrees[d - start[idx] - i] = partner;
                }
            }
            std::cmp::Ordering::Equal => {
                let block = self_paired_block(&a, q)?;
                for (i, v) in block.into_iter().enumerate() {
                    cols[start[idx] + i] = Some(v);
                    degrees[start[idx] + i] = (p, qq);
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    let cols: Vec<Vec<GaussScalar>> = cols.into_iter().map(|c| c.expect("every position filled")).collect();
    let basis = AdaptedBasis { n, matrix: Mat::from_cols(dim, &cols), degrees };
    match basis.check_pairing(q) {
        Verdict::Pass => Ok(basis),
        Verdict::Fail(why) => Err(HodgeError::NotAdapted(why)),
    }
}

fn qform(q: &Mat, u: &[GaussScalar], v: &[GaussScalar]) -> GaussScalar {
    q.bilinear(u, v)
}

/// Basis `x_0..x_{k-1}` of a self-paired piece with `Q(x_i, x_{k-1-j}) = delta_ij`.
fn self_paired_block(a: &[Vec<GaussScalar>], q: &Mat) -> Result<Vec<Vec<GaussScalar>>> {
    if q.transpose() != *q {
        return Err(HodgeError::NotAdapted("self-paired piece under a skew form".into()));
    }
    // orthogonal diagonalization
    let mut rest: Vec<Vec<GaussScalar>> = a.to_vec();
    let mut diag: Vec<(Vec<GaussScalar>, GaussScalar)> = Vec::new();
    while !rest.is_empty() {
        let idx = match rest.iter().position(|v| !Scalar::is_zero(&qform(q, v, v))) {
            Some(i) => i,
            None => {
                let (i, j) = (0..rest.len())
                    .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !Scalar::is_zero(&qform(q, &rest[i], &rest[j])))
                    .ok_or(HodgeError::DegenerateForm)?;
                rest[i] = rest[i].iter().zip(&rest[j]).map(|(x, y)| x.clone() + y.clone()).collect();
                i
            }
        };
        let x = rest.remove(idx);
        let ax = qform(q, &x, &x);
        for w in rest.iter_mut() {
            let c = qform(q, &x, w) / ax.clone();
            *w = vec_sub(w, &vec_scale(&c, &x));
        }
        diag.push((x, ax));
    }
    // pair diagonal entries into hyperbolic planes
    let k = diag.len();
    let mut used = vec![false; k];
    let mut pairs = Vec::new();
    let mut single = Vec::new();
    for i in 0..k {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (fi, ai) = diag[i].clone();
        let partner = (i + 1..k).find(|&j| !used[j] && gauss_sqrt(&(-ai.clone() / diag[j].1.clone())).is_some());
        match partner {
            Some(j) => {
                used[j] = true;
                let (fj, aj) = diag[j].clone();
                let t = gauss_sqrt(&(-ai.clone() / aj)).expect("checked square");
                let u: Vec<GaussScalar> = fi.iter().zip(&fj).map(|(x, y)| x.clone() + t.clone() * y.clone()).collect();
                let inv = GaussScalar::one() / (GaussScalar::from_i64(2) * ai);
                let v: Vec<GaussScalar> = fi.iter().zip(&fj).map(|(x, y)| (x.clone() - t.clone() * y.clone()) * inv.clone()).collect();
                pairs.push((u, v));
            }
            None => single.push((fi, ai)),
        }
    }
    if single.len() > 1 {
        return Err(HodgeError::NotAdapted("self-paired piece has no anti-diagonal basis over Q(i)".into()));
    }
    let mut out = vec![Vec::new(); k];
    for (r, (u, v)) in pairs.into_iter().enumerate() {
        out[r] = u;
        out[k - 1 - r] = v;
    }
    if let Some((f, af)) = single.pop() {
        let s = gauss_sqrt(&af).ok_or_else(|| HodgeError::NotAdapted("Q(e, e) is not a square in Q(i)".into()))?;
        out[(k - 1) / 2] = vec_scale(&(GaussScalar::one() / s), &f);
    }
    Ok(out)
}

/// Matrix-valued polynomial `sum c_a t^a` in `nvars` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    pub nvars: usize,
    pub terms: Vec<(Vec<u32>, Mat)>,
}

impl MatPoly {
    pub fn constant(nvars: usize, c: Mat) -> Self {
        MatPoly { nvars, terms: vec![(vec![0; nvars], c)] }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Mat> {
        self.terms.iter().map(|t| &t.1)
    }

    /// Terms surviving `t_i = 0` for `i` in `zeros`.
    pub fn restrict_zero(&self, zeros: &[usize]) -> MatPoly {
        let terms = self.terms.iter().filter(|(e, _)| zeros.iter().all(|&i| e[i] == 0)).cloned().collect();
        MatPoly { nvars: self.nvars, terms }
    }
}

/// Everything needed to evaluate `eta(t)`, `h~`, stratum values and `h_J`.
#[derive(Debug, Clone)]
pub struct OrbitSpec {
    pub induced: InducedStructure,
    pub markers: Markers,
    pub basis: AdaptedBasis,
    pub frame: SplitFrame,
    pub nvars: usize,
    pub zeta: BTreeMap<Vec<usize>, MatPoly>,
}

impl OrbitSpec {
    /// Validates the coefficient maps: `f_I` takes values in `s_F^perp ∩ z_I` and is Q-skew.
    pub fn new(induced: InducedStructure, nvars: usize, zeta: BTreeMap<Vec<usize>, MatPoly>) -> Result<Self> {
        let k = induced.cone.len();
        if nvars < k {
            return Err(HodgeError::InvalidInput(format!("{nvars} coordinates but {k} cone generators")));
        }
        let basis = adapted_from_split(&induced.split, &induced.q, induced.n)?;
        let markers = locate_markers(&induced, &basis)?;
        let frame = SplitFrame::new(&induced.split);
        let d = induced.dim();
        for (set, poly) in &zeta {
            if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&j| j >= k) {
                return Err(HodgeError::InvalidInput(format!("index set {set:?} is not a sorted subset of the cone")));
            }
            if poly.nvars != nvars {
                return Err(HodgeError::InvalidInput(format!("f_{set:?} uses {} coordinates, expected {nvars}", poly.nvars)));
            }
            for (exps, c) in &poly.terms {
                if exps.len() != nvars || c.rows() != d || c.cols() != d {
                    return Err(HodgeError::InvalidInput(format!("malformed term in f_{set:?}")));
                }
                if !induced.q.mul(c).add(&c.transpose().mul(&induced.q)).is_zero() {
                    return Err(HodgeError::InvalidInput(format!("coefficient of f_{set:?} is not Q-skew")));
                }
                if !frame.lies_in(c, |p, _| p < 0) {
                    return Err(HodgeError::InvalidInput(format!("coefficient of f_{set:?} is not in s_F^perp")));
                }
                for &j in set {
                    if !c.bracket(&induced.cone.generators()[j]).is_zero() {
                        return Err(HodgeError::InvalidInput(format!("coefficient of f_{set:?} does not commute with N_{}", j + 1)));
                    }
                }
            }
        }
        Ok(OrbitSpec { induced, markers, basis, frame, nvars, zeta })
    }

    pub fn k(&self) -> usize {
        self.induced.cone.len()
    }

    pub fn dim(&self) -> usize {
        self.induced.dim()
    }

    pub fn e0(&self) -> Vec<GaussScalar> {
        self.basis.vector(self.markers.e0_index)
    }

    pub fn einf(&self) -> Vec<GaussScalar> {
        self.basis.vector(self.markers.einf_index)
    }

    pub fn exact(&self) -> OrbitData<GaussScalar> {
        self.data(|x| x.clone())
    }

    pub fn numeric(&self) -> OrbitData<Complex64> {
        self.data(|x| x.to_c64())
    }

    fn data<T: Scalar>(&self, conv: impl Fn(&GaussScalar) -> T + Copy) -> OrbitData<T> {
        let pieces = self.induced.split.pieces();
        let pmax = pieces.keys().map(|k| k.0).max().unwrap_or(0);
        let pmin = pieces.keys().map(|k| k.0).min().unwrap_or(0);
        OrbitData {
            n: self.induced.n,
            m: self.markers.m,
            k: self.k(),
            nvars: self.nvars,
            q: self.induced.q.map(conv),
            ns: self.induced.cone.generators().iter().map(|x| x.map(conv)).collect(),
            zeta: self
                .zeta
                .iter()
                .map(|(set, poly)| (set.clone(), poly.terms.iter().map(|(e, c)| (e.clone(), c.map(conv))).collect()))
                .collect(),
            e0: self.e0().iter().map(conv).collect(),
            einf: self.einf().iter().map(conv).collect(),
            lambda: conv(&self.markers.lambda),
            exp_terms: (pmax - pmin + 2) as usize,
        }
    }

    /// `log zeta` on the deepest stratum lies in `W_{-1}(g)`; the second flag is the weaker `W_0(g)`.
    pub fn fiber_test(&self) -> FiberReport {
        let all: Vec<usize> = (0..self.k()).collect();
        let f = self.zeta.get(&all).map(|p| p.restrict_zero(&all));
        let coeffs: Vec<&Mat> = f.as_ref().map(|p| p.coefficients().collect()).unwrap_or_default();
        FiberReport {
            in_w_minus1: coeffs.iter().all(|c| self.frame.lies_in(c, |p, q| p + q <= -1)),
            in_w0: coeffs.iter().all(|c| self.frame.lies_in(c, |p, q| p + q <= 0)),
        }
    }

    /// Exact invariance of `h~` and `Q(eta_0, conj eta_inf)` under `ell_j -> ell_j + s_j`.
    pub fn monodromy_check(&self, t: &[GaussScalar], ell: &[GaussScalar], shifts: &[i64]) -> Result<Verdict> {
        let data = self.exact();
        data.check_point(t, ell)?;
        let shifted: Vec<GaussScalar> =
            ell.iter().zip(shifts).map(|(l, s)| l.clone() + GaussScalar::from_i64(*s)).collect();
        let a = data.frame(t, ell);
        let b = data.frame(t, &shifted);
        Ok(Verdict::from_bool(a.h_tilde == b.h_tilde, || "h~ changed under a branch shift".into())
            .and(|| Verdict::from_bool(a.q01 == b.q01, || "Q(eta_0, conj eta_inf) changed under a branch shift".into())))
    }

    /// Level `m_1` of `e_0` for the first generator, with the bounds and membership conditions.
    pub fn verify_lemma_m(&self) -> Result<LemmaMReport> {
        let gens = self.induced.cone.generators();
        if gens.len() < 2 {
            return Err(HodgeError::InvalidInput("need a cone with at least two generators".into()));
        }
        let polarized = polarization_check(&self.induced.mixed(), &self.induced.cone)?;
        if let Verdict::Fail(why) = polarized {
            return Err(HodgeError::NotPolarized(why));
        }
        let n = self.induced.n;
        let m = self.markers.m;
        let w1 = weight_filtration(&gens[0], n)?;
        let m1 = level(&self.e0(), &w1)?;
        let einf = self.einf();
        let lvl = 2 * n - m1;
        let mut verdict = Verdict::Pass;
        if m1 < n || m1 > m {
            verdict = Verdict::fail(format!("m_1 = {m1} outside [{n}, {m}]"));
        } else if !w1.get(lvl).contains(&einf) {
            verdict = Verdict::fail(format!("e_inf is not in W^1_{lvl}"));
        } else if w1.get(lvl - 1).contains(&einf) {
            verdict = Verdict::fail(format!("e_inf lies in W^1_{}", lvl - 1));
        }
        Ok(LemmaMReport { n, m, m1, verdict })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberReport {
    pub in_w_minus1: bool,
    pub in_w0: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaMReport {
    pub n: i64,
    pub m: i64,
    pub m1: i64,
    pub verdict: Verdict,
}

/// Orbit data over exact or floating scalars.
#[derive(Debug, Clone)]
pub struct OrbitData<T: Scalar> {
    pub n: i64,
    pub m: i64,
    pub k: usize,
    pub nvars: usize,
    pub q: Matrix<T>,
    pub ns: Vec<Matrix<T>>,
    pub zeta: Vec<(Vec<usize>, Vec<(Vec<u32>, Matrix<T>)>)>,
    pub e0: Vec<T>,
    pub einf: Vec<T>,
    pub lambda: T,
    exp_terms: usize,
}

/// `eta(t)` and the values read off from it.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitFrame<T> {
    pub t: Vec<T>,
    pub ell: Vec<T>,
    pub eta: Matrix<T>,
    pub h_tilde: T,
    pub q01: T,
}

fn real_part<T: Scalar>(z: &T) -> T {
    (z.clone() + z.conj()) / T::from_i64(2)
}

impl<T: Scalar> OrbitData<T> {
    fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn check_point(&self, t: &[T], ell: &[T]) -> Result<()> {
        if t.len() != self.nvars {
            return Err(HodgeError::DimensionMismatch { expected: self.nvars, found: t.len() });
        }
        if ell.len() != self.k {
            return Err(HodgeError::DimensionMismatch { expected: self.k, found: ell.len() });
        }
        Ok(())
    }

    /// `Q(u, conj v)`.
    pub fn pair_conj(&self, u: &[T], v: &[T]) -> T {
        let vb: Vec<T> = v.iter().map(Scalar::conj).collect();
        self.q.bilinear(u, &vb)
    }

    fn exp(&self, x: &Matrix<T>) -> Matrix<T> {
        x.exp_series(self.exp_terms.min(self.dim() + 1))
    }

    /// `f_I(t)`.
    pub fn f_at(&self, set: &[usize], t: &[T]) -> Matrix<T> {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        if let Some((_, terms)) = self.zeta.iter().find(|(s, _)| s == set) {
            for (exps, c) in terms {
                let mut mono = T::one();
                for (x, &e) in t.iter().zip(exps) {
                    for _ in 0..e {
                        mono = mono * x.clone();
                    }
                }
                if !mono.is_zero() {
                    out = out.add(&c.scale(&mono));
                }
            }
        }
        out
    }

    /// `prod_{j in J \ I} t_j`.
    pub fn t_hat(&self, set: &[usize], t: &[T]) -> T {
        (0..self.k).filter(|j| !set.contains(j)).fold(T::one(), |acc, j| acc * t[j].clone())
    }

    /// `sum_{j not in I} ell_j N_j`.
    pub fn log_theta_hat(&self, set: &[usize], ell: &[T]) -> Matrix<T> {
        let d = self.dim();
        (0..self.k)
            .filter(|j| !set.contains(j))
            .fold(Matrix::zeros(d, d), |acc, j| acc.add(&self.ns[j].scale(&ell[j])))
    }

    /// `log zeta(t) = sum_I t^_I f_I(t)`.
    pub fn log_zeta(&self, t: &[T]) -> Matrix<T> {
        let d = self.dim();
        self.zeta
            .iter()
            .fold(Matrix::zeros(d, d), |acc, (set, _)| acc.add(&self.f_at(set, t).scale(&self.t_hat(set, t))))
    }

    /// `log zeta^(t)` restricted to the index sets containing `base`.
    pub fn log_zeta_hat(&self, t: &[T], ell: &[T], base: &[usize]) -> Matrix<T> {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for (set, _) in &self.zeta {
            if !base.iter().all(|i| set.contains(i)) {
                continue;
            }
            let f = self.f_at(set, t);
            if f.is_zero() {
                continue;
            }
            let x = self.log_theta_hat(set, ell);
            let ad = self.exp(&x).mul(&f).mul(&self.exp(&x.scale(&-T::one())));
            out = out.add(&ad.scale(&self.t_hat(set, t)));
        }
        out
    }

    /// `eta(t) = exp(sum ell_j N_j) exp(log zeta(t))`.
    pub fn eta(&self, t: &[T], ell: &[T]) -> Matrix<T> {
        self.exp(&self.log_theta_hat(&[], ell)).mul(&self.exp(&self.log_zeta(t)))
    }

    /// `zeta^(t) theta(t)`; equal to `eta` by construction.
    pub fn eta_via_hat(&self, t: &[T], ell: &[T]) -> Matrix<T> {
        self.exp(&self.log_zeta_hat(t, ell, &[])).mul(&self.exp(&self.log_theta_hat(&[], ell)))
    }

    pub fn frame(&self, t: &[T], ell: &[T]) -> OrbitFrame<T> {
        let eta = self.eta(t, ell);
        let eta0 = eta.mul_vec(&self.e0);
        let etainf = eta.mul_vec(&self.einf);
        let q01 = self.pair_conj(&eta0, &etainf);
        let h = real_part(&(self.lambda.conj() * q01.clone()));
        OrbitFrame { t: t.to_vec(), ell: ell.to_vec(), eta, h_tilde: h, q01 }
    }

    pub fn h_tilde(&self, t: &[T], ell: &[T]) -> T {
        self.frame(t, ell).h_tilde
    }

    /// Value of the extension on the stratum where `t_i = 0` for `i` in `set`.
    /// Coordinates in `set` are ignored; `ell` entries in `set` are ignored.
    pub fn stratum_value(&self, set: &[usize], t: &[T], ell: &[T]) -> T {
        let mut t0 = t.to_vec();
        for &i in set {
            t0[i] = T::zero();
        }
        let zh = self.exp(&self.log_zeta_hat(&t0, ell, set));
        let th = self.exp(&self.log_theta_hat(set, ell));
        let u = zh.mul(&th).mul_vec(&self.e0);
        let v = zh.mul_vec(&self.einf);
        real_part(&(self.lambda.conj() * self.pair_conj(&u, &v)))
    }

    /// `i^{2n-m} Q(exp(f_J) e_0, N^{m-n} conj(exp(f_J) e_0))` with `N = sum N_j`, at `t_J = 0`.
    pub fn h_j(&self, t: &[T]) -> T {
        let all: Vec<usize> = (0..self.k).collect();
        let mut t0 = t.to_vec();
        for &i in &all {
            t0[i] = T::zero();
        }
        let g = self.exp(&self.f_at(&all, &t0));
        let u = g.mul_vec(&self.e0);
        let d = self.dim();
        let n_sum = self.ns.iter().fold(Matrix::zeros(d, d), |acc, x| acc.add(x));
        let np = n_sum.pow((self.m - self.n) as usize);
        let ub: Vec<T> = u.iter().map(Scalar::conj).collect();
        i_pow::<T>(2 * self.n - self.m) * self.q.bilinear(&u, &np.mul_vec(&ub))
    }

    /// `prod ell_j^{a_j} Q(zeta^ N^a e_0, conj(zeta^ e_inf))`.
    pub fn term(&self, a: &[u32], t: &[T], ell: &[T]) -> T {
        let zh = self.exp(&self.log_zeta_hat(t, ell, &[]));
        let mut v = self.e0.clone();
        let mut coef = T::one();
        for (j, &aj) in a.iter().enumerate() {
            for _ in 0..aj {
                v = self.ns[j].mul_vec(&v);
                coef = coef * ell[j].clone();
            }
        }
        coef * self.pair_conj(&zh.mul_vec(&v), &zh.mul_vec(&self.einf))
    }
}

impl OrbitData<Complex64> {
    /// `ell(t) = log(t) / 2 pi i + branch`.
    pub fn ell_of(&self, t: &[Complex64], branch: &[i64]) -> Result<Vec<Complex64>> {
        (0..self.k)
            .map(|j| {
                if t[j].norm() == 0.0 {
                    return Err(HodgeError::InvalidInput(format!("t_{} = 0 where a logarithm is needed", j + 1)));
                }
                let b = branch.get(j).copied().unwrap_or(0) as f64;
                Ok(t[j].ln() / Complex64::new(0.0, 2.0 * PI) + Complex64::new(b, 0.0))
            })
            .collect()
    }
}

/// Float evaluation at `t` with a branch choice.
pub fn eval_frame(data: &OrbitData<Complex64>, t: &[Complex64], branch: &[i64]) -> Result<OrbitFrame<Complex64>> {
    let ell = data.ell_of(t, branch)?;
    data.check_point(t, &ell)?;
    Ok(data.frame(t, &ell))
}

/// Float invariance check: relative change of `h~` and `Q(eta_0, conj eta_inf)` at most `tol`.
pub fn monodromy_check_float(data: &OrbitData<Complex64>, t: &[Complex64], shifts: &[i64], tol: f64) -> Result<(Verdict, f64)> {
    let zero = vec![0; data.k];
    let a = eval_frame(data, t, &zero)?;
    let b = eval_frame(data, t, shifts)?;
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
    let dev = rel(a.h_tilde, b.h_tilde).max(rel(a.q01, b.q01));
    Ok((Verdict::from_bool(dev <= tol, || format!("relative change {dev:e} exceeds {tol:e}")), dev))
}

/// `e_i` components of `eta e_j - e_j` outside later basis vectors, in adapted coordinates.
pub fn triangularity(spec: &OrbitSpec, eta: &Mat) -> Verdict {
    let b = spec.basis.matrix();
    let binv = b.inverse().expect("adapted basis is invertible");
    let ea = binv.mul(eta).mul(b);
    let d = spec.dim();
    for j in 0..d {
        let pj = spec.basis.degree(j).0;
        for i in 0..d {
            let v = &ea[(i, j)];
            let expected = if i == j { GaussScalar::one() } else { GaussScalar::zero() };
            if spec.basis.degree(i).0 >= pj && *v != expected {
                return Verdict::fail(format!("eta e_{j} has an e_{i} component outside lower Hodge levels"));
            }
        }
    }
    Verdict::Pass
}

/// Rational conjugate pairs helper for tests and fixtures: `conj(lambda e_inf)`.
pub fn conj_lambda_einf(spec: &OrbitSpec) -> Vec<GaussScalar> {
    vec_conj(&vec_scale(&spec.markers.lambda, &spec.einf()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactlin::{gi, gr, vec_add};
    use crate::induced::PureHodgeData;
    use crate::mhs::NilpotentCone;

    fn bare(v: &PureHodgeData) -> OrbitSpec {
        let h = catalog::induced(v).unwrap();
        OrbitSpec::new(h, v.cone.len(), BTreeMap::new()).unwrap()
    }

    #[test]
    fn elliptic_orbit_is_a_line() {
        let spec = bare(&catalog::elliptic());
        let data = spec.exact();
        let ell = vec![gi(2, 1) * gr(1, 3)];
        let t = vec![gi(0, 0)];
        let e0 = spec.e0();
        let n_e0 = spec.induced.cone.generators()[0].mul_vec(&e0);
        assert!(!n_e0.iter().all(Scalar::is_zero));
        let expected = vec_add(&e0, &vec_scale(&ell[0], &n_e0));
        assert_eq!(data.eta(&t, &ell).mul_vec(&e0), expected);
    }

    #[test]
    fn hatted_form_agrees() {
        for fx in catalog::orbit_fixtures().unwrap().into_iter().take(8) {
            let data = fx.spec.exact();
            let t: Vec<GaussScalar> = (0..fx.spec.nvars).map(|i| gi(1, -(i as i64)) * gr(1, 7)).collect();
            let ell: Vec<GaussScalar> = (0..fx.spec.k()).map(|j| gi(j as i64, 1)).collect();
            let eta = data.eta(&t, &ell);
            assert_eq!(eta, data.eta_via_hat(&t, &ell), "{}", fx.name);
            assert!(triangularity(&fx.spec, &eta).is_pass(), "{}", fx.name);
        }
    }

    #[test]
    fn repeated_generator_keeps_the_level() {
        let v = catalog::elliptic();
        let n = v.cone.generators()[0].clone();
        let cone = NilpotentCone::new(vec![n.clone(), n], &v.q).unwrap();
        let doubled = PureHodgeData::new(v.weight, v.q.clone(), v.f.clone(), cone).unwrap();
        let r = bare(&doubled).verify_lemma_m().unwrap();
        assert_eq!(r.m1, r.m);
        assert!(r.verdict.is_pass());
    }

    #[test]
    fn adapted_basis_pairs_antidiagonally() {
        let h = catalog::induced(&catalog::a1(2).unwrap()).unwrap();
        let b = adapted_from_split(&h.split, &h.q, h.n).unwrap();
        assert!(b.check_pairing(&h.q).is_pass());
        assert_eq!(b.dim(), h.dim());
    }

    #[test]
    fn rejects_coefficients_outside_the_complement() {
        let v = catalog::elliptic();
        let h = catalog::induced(&v).unwrap();
        let mut zeta = BTreeMap::new();
        zeta.insert(vec![], MatPoly::constant(1, Mat::identity(h.dim())));
        assert!(OrbitSpec::new(h, 1, zeta).is_err());
    }
}
