//! Ready-made limiting mixed Hodge structures, orbit data built on them, and a
//! seeded generator of random mixed Hodge structures.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HodgeError, Result};
use crate::exactlin::{gi, gr, GaussScalar, Mat, Scalar, Subspace};
use crate::filtrations::{DecreasingFiltration, IncreasingFiltration};
use crate::induced::{induce, tate_normalize, InducedStructure, PureHodgeData};
use crate::lie::{centralizer, lie_algebra, lie_deligne_split, unflatten};
use crate::mhs::{DeligneSplitting, NilpotentCone};
use crate::orbit::{MatPoly, OrbitSpec};

fn ints(rows: &[&[i64]]) -> Mat {
    Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| gi(x, 0)).collect()).collect::<Vec<_>>())
}

/// Indecomposable piece of a fixture: form, nilpotent, and Hodge-graded generators.
#[derive(Debug, Clone)]
pub struct Block {
    pub q: Mat,
    pub n: Mat,
    /// `(p, v)`: `v` lies in `F^p`.
    pub f: Vec<(i64, Vec<GaussScalar>)>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.q.rows()
    }
}

/// `Q(e0, e1) = 1`, `N e0 = e1`, `F^1 = span e0`.
pub fn elliptic_block() -> Block {
    Block {
        q: ints(&[&[0, 1], &[-1, 0]]),
        n: ints(&[&[0, 0], &[1, 0]]),
        f: vec![(1, vec![gi(1, 0), gi(0, 0)]), (0, vec![gi(0, 0), gi(1, 0)])],
    }
}

/// Pure weight-one plane: `F^1 = span(x + i y)`.
pub fn pure_weight_one_block() -> Block {
    Block {
        q: ints(&[&[0, 1], &[-1, 0]]),
        n: Mat::zeros(2, 2),
        f: vec![(1, vec![gi(1, 0), gi(0, 1)]), (0, vec![gi(1, 0), gi(0, 0)])],
    }
}

/// `H^{2,0} ⊕ H^{0,2}` with `Q = -1`.
pub fn b20_block() -> Block {
    Block {
        q: ints(&[&[-1, 0], &[0, -1]]),
        n: Mat::zeros(2, 2),
        f: vec![(2, vec![gi(1, 0), gi(0, 1)]), (0, vec![gi(1, 0), gi(0, 0)])],
    }
}

/// A real `(1,1)` line with `Q = 1`.
pub fn b11_block() -> Block {
    Block { q: ints(&[&[1]]), n: Mat::zeros(1, 1), f: vec![(1, vec![gi(1, 0)])] }
}

/// A string `a -> b -> c` through `(2,2), (1,1), (0,0)`.
pub fn t3_block() -> Block {
    Block {
        q: ints(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]),
        n: ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]),
        f: vec![
            (2, vec![gi(1, 0), gi(0, 0), gi(0, 0)]),
            (1, vec![gi(0, 0), gi(1, 0), gi(0, 0)]),
            (0, vec![gi(0, 0), gi(0, 0), gi(1, 0)]),
        ],
    }
}

/// `(2,1) ⊕ (1,2) -> (1,0) ⊕ (0,1)` on `p1, p2, n1 = N p1, n2 = N p2`.
pub fn four_block() -> Block {
    Block {
        q: ints(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]]),
        n: ints(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        f: vec![
            (2, vec![gi(1, 0), gi(0, 1), gi(0, 0), gi(0, 0)]),
            (1, vec![gi(1, 0), gi(0, 0), gi(0, 0), gi(0, 0)]),
            (1, vec![gi(0, 0), gi(0, 0), gi(1, 0), gi(0, 1)]),
            (0, vec![gi(0, 0), gi(0, 0), gi(1, 0), gi(0, 0)]),
        ],
    }
}

/// Direct sum of blocks; each cone generator is the sum of the nilpotents of one group of blocks.
pub fn assemble(weight: i64, blocks: &[Block], groups: &[Vec<usize>]) -> Result<PureHodgeData> {
    let dim: usize = blocks.iter().map(Block::dim).sum();
    let q = blocks.iter().fold(Mat::zeros(0, 0), |acc, b| acc.direct_sum(&b.q));
    let mut offsets = Vec::new();
    let mut off = 0;
    for b in blocks {
        offsets.push(off);
        off += b.dim();
    }
    let mut levels = Vec::new();
    for (b, &o) in blocks.iter().zip(&offsets) {
        for (p, v) in &b.f {
            let mut full = vec![GaussScalar::zero(); dim];
            full[o..o + v.len()].clone_from_slice(v);
            levels.push((*p, full));
        }
    }
    let f = DecreasingFiltration::from_levels(dim, &levels);
    let mut gens = Vec::new();
    for g in groups {
        let mut x = Mat::zeros(0, 0);
        for (i, b) in blocks.iter().enumerate() {
            x = x.direct_sum(&if g.contains(&i) { b.n.clone() } else { Mat::zeros(b.dim(), b.dim()) });
        }
        gens.push(x);
    }
    let cone = NilpotentCone::new(gens, &q)?;
    PureHodgeData::new(weight, q, f, cone)
}

fn all(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).collect()]
}

/// Dimension-2 weight-one degeneration.
pub fn elliptic() -> PureHodgeData {
    assemble(1, &[elliptic_block()], &all(1)).expect("elliptic fixture")
}

fn a1_blocks(a: usize) -> Vec<Block> {
    let mut blocks = vec![elliptic_block(); a];
    blocks.extend(vec![pure_weight_one_block(); 3 - a]);
    blocks
}

/// Weight one, `g = 3`, monodromy of rank `a`.
pub fn a1(a: usize) -> Result<PureHodgeData> {
    if a > 3 {
        return Err(HodgeError::InvalidInput(format!("rank {a} exceeds 3")));
    }
    let groups = if a == 0 { vec![] } else { vec![(0..a).collect()] };
    assemble(1, &a1_blocks(a), &groups)
}

/// Same, with the cone split into two generators: `N_1` on the first block, `N_2` on the rest.
pub fn a1_two_generators(a: usize) -> Result<PureHodgeData> {
    if !(2..=3).contains(&a) {
        return Err(HodgeError::InvalidInput("two generators need rank 2 or 3".into()));
    }
    assemble(1, &a1_blocks(a), &[vec![0], (1..a).collect()])
}

/// Weight two, Hodge numbers `(2, h, 2)`, one of the six degeneration types.
pub fn a2(kind: usize, h: usize) -> Result<PureHodgeData> {
    let (mut blocks, ones): (Vec<Block>, i64) = match kind {
        0 => (vec![b20_block(), b20_block()], h as i64),
        1 => (vec![four_block(), b20_block()], h as i64 - 2),
        2 => (vec![t3_block(), b20_block()], h as i64 - 1),
        3 => (vec![four_block(), four_block()], h as i64 - 4),
        4 => (vec![t3_block(), four_block()], h as i64 - 3),
        5 => (vec![t3_block(), t3_block()], h as i64 - 2),
        _ => return Err(HodgeError::InvalidInput(format!("type {kind} is not one of 0..=5"))),
    };
    if ones < 0 {
        return Err(HodgeError::InvalidInput(format!("type {kind} needs h >= {}", h as i64 - ones)));
    }
    let groups = match kind {
        0 => vec![],
        1 | 2 => vec![vec![0]],
        _ => vec![vec![0, 1]],
    };
    blocks.extend(vec![b11_block(); ones as usize]);
    assemble(2, &blocks, &groups)
}

/// Type 5 with the two strings as separate generators.
pub fn a2_two_generators(h: usize) -> Result<PureHodgeData> {
    if h < 2 {
        return Err(HodgeError::InvalidInput("type 5 needs h >= 2".into()));
    }
    let mut blocks = vec![t3_block(), t3_block()];
    blocks.extend(vec![b11_block(); h - 2]);
    assemble(2, &blocks, &[vec![0], vec![1]])
}

/// Tensor square of the elliptic fixture with `N ⊗ 1` and `1 ⊗ N`.
pub fn elliptic_squared() -> PureHodgeData {
    let e = elliptic_block();
    let id = Mat::identity(2);
    let q = e.q.kron(&e.q);
    let mut levels = Vec::new();
    for (p, u) in &e.f {
        for (r, v) in &e.f {
            let mut w = Vec::with_capacity(4);
            for x in u {
                for y in v {
                    w.push(x.clone() * y.clone());
                }
            }
            levels.push((p + r, w));
        }
    }
    let f = DecreasingFiltration::from_levels(4, &levels);
    let cone = NilpotentCone::new(vec![e.n.kron(&id), id.kron(&e.n)], &q).expect("product cone");
    PureHodgeData::new(2, q, f, cone).expect("elliptic squared fixture")
}

/// Weight three with Hodge numbers `(1,1,1,1)`: `H = V ⊗ Λ^2 V` has `h^{9,0} = 0`.
pub fn weight_three() -> PureHodgeData {
    // two symplectic planes: (x1 ± i y1) in (3,0)/(0,3), (x2 ± i y2) in (2,1)/(1,2)
    let q = ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]);
    let v = |a: [(i64, i64); 4]| a.iter().map(|&(r, i)| gi(r, i)).collect::<Vec<_>>();
    let levels = vec![
        (3, v([(1, 0), (0, 0), (0, -1), (0, 0)])),
        (2, v([(0, 0), (1, 0), (0, 0), (0, 1)])),
        (1, v([(0, 0), (1, 0), (0, 0), (0, -1)])),
        (0, v([(1, 0), (0, 0), (0, 1), (0, 0)])),
    ];
    let f = DecreasingFiltration::from_levels(4, &levels);
    PureHodgeData::new(3, q, f, NilpotentCone::empty()).expect("weight three fixture")
}

/// Induced and Tate-normalized structure.
pub fn induced(v: &PureHodgeData) -> Result<InducedStructure> {
    Ok(tate_normalize(&induce(v)?))
}

/// A named fixture with orbit data.
#[derive(Debug, Clone)]
pub struct OrbitFixture {
    pub name: String,
    pub v: PureHodgeData,
    pub spec: OrbitSpec,
    /// Number of coordinates beyond the cone coordinates.
    pub stratum_dims: usize,
}

/// Basis of `s_F^perp ∩ z_I` at the level of `V`.
pub fn perp_centralizer(v: &PureHodgeData, set: &[usize]) -> Result<Vec<Mat>> {
    let l = lie_algebra(&v.q)?;
    let split = lie_deligne_split(&l, &v.mixed()?)?;
    let ns: Vec<Mat> = set.iter().map(|&j| v.cone.generators()[j].clone()).collect();
    let z = centralizer(&l, &ns);
    Ok(z.intersect(&split.s_f_perp).vectors().iter().map(|x| unflatten(v.dim(), x)).collect())
}

/// Small deterministic combination `sum c_i X_i / den` with `c_i` cycling through `1, -2, 3, ...`.
pub fn small_combination(basis: &[Mat], den: i64, salt: i64) -> Option<Mat> {
    let first = basis.first()?;
    let mut out = Mat::zeros(first.rows(), first.cols());
    for (i, x) in basis.iter().enumerate() {
        let k = i as i64 + salt;
        let c = (k % 3 + 1) * if k % 2 == 0 { 1 } else { -1 };
        let im = (k % 2) * (k % 5 - 2);
        out = out.add(&x.scale(&(gi(c, im) * gr(1, den))));
    }
    Some(out)
}

/// Extra stratum coordinates carried by the default orbit data.
pub const STRATUM_DIMS: usize = 2;

fn poly(nvars: usize, h: &InducedStructure, terms: Vec<(Option<usize>, Mat)>) -> MatPoly {
    let terms = terms
        .into_iter()
        .map(|(var, x)| {
            let mut e = vec![0u32; nvars];
            if let Some(i) = var {
                e[i] = 1;
            }
            (e, h.induce_operator(&x))
        })
        .collect();
    MatPoly { nvars, terms }
}

/// Default orbit data in `k` cone coordinates and two stratum coordinates `s_1, s_2`:
/// `f_∅` and each `f_{j}` small and generic in `s_F^perp ∩ z_I`, and
/// `f_J = C + s_1 X_1 + s_2 X_2` with `C, X_i` in `s_F^perp ∩ z_J`.
pub fn default_zeta(v: &PureHodgeData, h: &InducedStructure) -> Result<BTreeMap<Vec<usize>, MatPoly>> {
    let k = v.cone.len();
    let nvars = k + STRATUM_DIMS;
    let mut zeta = BTreeMap::new();
    let perp = perp_centralizer(v, &[])?;
    if let (Some(c), Some(x)) = (small_combination(&perp, 7, 0), small_combination(&perp, 9, 4)) {
        zeta.insert(vec![], poly(nvars, h, vec![(None, c), (Some(k), x)]));
    }
    if k >= 2 {
        for j in 0..k {
            if let Some(c) = small_combination(&perp_centralizer(v, &[j])?, 11, 5 + j as i64) {
                zeta.insert(vec![j], poly(nvars, h, vec![(None, c)]));
            }
        }
    }
    let full: Vec<usize> = (0..k).collect();
    let zj = perp_centralizer(v, &full)?;
    if let (Some(c), Some(x1), Some(x2)) =
        (small_combination(&zj, 16, 1), small_combination(&zj, 8, 2), small_combination(&zj, 8, 3))
    {
        zeta.insert(full, poly(nvars, h, vec![(None, c), (Some(k), x1), (Some(k + 1), x2)]));
    }
    Ok(zeta)
}

/// Orbit fixture with default coefficient maps.
pub fn orbit_fixture(name: &str, v: PureHodgeData) -> Result<OrbitFixture> {
    let h = induced(&v)?;
    let zeta = default_zeta(&v, &h)?;
    let k = v.cone.len();
    let spec = OrbitSpec::new(h, k + STRATUM_DIMS, zeta)?;
    Ok(OrbitFixture { name: name.into(), v, spec, stratum_dims: STRATUM_DIMS })
}

/// Components `(X_1, X_2, Y)`: two directions in `g^{-1,1}` and one in `g^{-1,0}` at the level of `V`.
pub fn levi_directions(v: &PureHodgeData) -> Result<(Mat, Mat, Mat)> {
    let l = lie_algebra(&v.q)?;
    let split = lie_deligne_split(&l, &v.mixed()?)?;
    let z = centralizer(&l, v.cone.generators());
    let pick = |p: i64, q: i64| -> Vec<Mat> {
        split.piece(p, q).intersect(&z).vectors().iter().map(|x| unflatten(v.dim(), x)).collect()
    };
    let horiz = pick(-1, 1);
    let fibre = pick(-1, 0);
    if horiz.len() < 2 || fibre.is_empty() {
        return Err(HodgeError::InvalidInput("fixture lacks the needed g^{-1,1} and g^{-1,0} directions".into()));
    }
    Ok((horiz[0].clone(), horiz[horiz.len() - 1].clone(), fibre[0].clone()))
}

/// Rank-one weight-one degeneration with `f_J = s_1 X_1 + s_2 X_2 + s_3 Y` on the deepest stratum.
pub fn levi_fixture() -> Result<OrbitFixture> {
    let v = a1(1)?;
    let h = induced(&v)?;
    let (x1, x2, y) = levi_directions(&v)?;
    let nvars = 4;
    let unit = |i: usize| {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        e
    };
    let mut zeta = BTreeMap::new();
    zeta.insert(
        vec![0],
        MatPoly {
            nvars,
            terms: vec![
                (unit(1), h.induce_operator(&x1)),
                (unit(2), h.induce_operator(&x2)),
                (unit(3), h.induce_operator(&y)),
            ],
        },
    );
    if let Some(x) = small_combination(&perp_centralizer(&v, &[])?, 7, 0) {
        zeta.insert(vec![], MatPoly::constant(nvars, h.induce_operator(&x)));
    }
    let spec = OrbitSpec::new(h, nvars, zeta)?;
    Ok(OrbitFixture { name: "levi".into(), v, spec, stratum_dims: 3 })
}

/// Every fixture with a nonempty cone, with default orbit data.
pub fn orbit_fixtures() -> Result<Vec<OrbitFixture>> {
    let mut out = vec![orbit_fixture("elliptic", elliptic())?];
    for a in 1..=3 {
        out.push(orbit_fixture(&format!("a1-{a}"), a1(a)?)?);
    }
    for kind in [1, 2, 5] {
        out.push(orbit_fixture(&format!("a2-{kind}"), a2(kind, 2)?)?);
    }
    out.push(orbit_fixture("elliptic-squared", elliptic_squared())?);
    out.push(orbit_fixture("a1-2-two", a1_two_generators(2)?)?);
    out.push(orbit_fixture("a1-3-two", a1_two_generators(3)?)?);
    out.push(orbit_fixture("a2-5-two", a2_two_generators(2)?)?);
    out.push(levi_fixture()?);
    Ok(out)
}

/// A random mixed Hodge structure with its splitting, and a perturbation that is not one.
#[derive(Debug, Clone)]
pub struct RandomMhs {
    pub w: IncreasingFiltration,
    pub f: DecreasingFiltration,
    /// Expected splitting.
    pub split: DeligneSplitting,
    /// `F` with one generator of a `p > q` piece replaced by its real part.
    pub bad_f: DecreasingFiltration,
}

fn random_rat<R: Rng>(rng: &mut R, span: i64) -> GaussScalar {
    gr(rng.gen_range(-span..=span), rng.gen_range(1..=3))
}

/// Random `R`-split structure twisted by `exp(i delta)` with real `delta` of type `(-1,-1)`.
pub fn random_mhs(seed: u64, max_dim: usize) -> RandomMhs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        // Hodge–Deligne numbers on 0 <= q <= p <= 2, at least one off-diagonal
        let mut numbers: Vec<((i64, i64), usize)> = Vec::new();
        let mut dim = 0;
        for p in 0..=2i64 {
            for q in 0..=p {
                let h = rng.gen_range(0..=1usize);
                let cost = if p == q { h } else { 2 * h };
                if h > 0 && dim + cost <= max_dim {
                    numbers.push(((p, q), h));
                    dim += cost;
                }
            }
        }
        if !numbers.iter().any(|((p, q), _)| p != q) {
            continue;
        }
        if let Some(m) = build_random(&mut rng, &numbers, dim) {
            return m;
        }
    }
}

fn build_random<R: Rng>(rng: &mut R, numbers: &[((i64, i64), usize)], dim: usize) -> Option<RandomMhs> {
    let b = Mat::from_vec(dim, dim, (0..dim * dim).map(|_| random_rat(rng, 4)).collect());
    if b.rank() < dim {
        return None;
    }
    let cols = b.col_vectors();
    let mut next = 0;
    let mut pieces: BTreeMap<(i64, i64), Vec<Vec<GaussScalar>>> = BTreeMap::new();
    for &((p, q), h) in numbers {
        for _ in 0..h {
            if p == q {
                pieces.entry((p, p)).or_default().push(cols[next].clone());
                next += 1;
            } else {
                let (x, y) = (&cols[next], &cols[next + 1]);
                next += 2;
                let plus: Vec<GaussScalar> = x.iter().zip(y).map(|(a, c)| a.clone() + GaussScalar::i() * c.clone()).collect();
                let minus: Vec<GaussScalar> = x.iter().zip(y).map(|(a, c)| a.clone() - GaussScalar::i() * c.clone()).collect();
                pieces.entry((p, q)).or_default().push(plus);
                pieces.entry((q, p)).or_default().push(minus);
            }
        }
    }
    // split frame and a real delta lowering both indices
    let mut frame = Vec::new();
    let mut degs = Vec::new();
    for (k, vs) in &pieces {
        for v in vs {
            frame.push(v.clone());
            degs.push(*k);
        }
    }
    let fm = Mat::from_cols(dim, &frame);
    let fm_inv = fm.inverse().ok()?;
    let mut d0 = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if degs[i].0 == degs[j].0 - 1 && degs[i].1 == degs[j].1 - 1 {
                d0[(i, j)] = random_rat(rng, 3) + GaussScalar::i() * random_rat(rng, 3);
            }
        }
    }
    let d0 = fm.mul(&d0).mul(&fm_inv);
    let delta = d0.add(&d0.conj()).scale(&gr(1, 2));
    let g = delta.scale(&GaussScalar::i()).exp_nilpotent().ok()?;
    let levels = |shift: bool, bad: Option<usize>| -> Vec<(i64, Vec<GaussScalar>)> {
        let mut out = Vec::new();
        let mut idx = 0;
        for (&(p, q), vs) in &pieces {
            for v in vs {
                let mut v = v.clone();
                if bad == Some(idx) {
                    v = v.iter().map(|z| (z.clone() + Scalar::conj(z)) * gr(1, 2)).collect();
                }
                let v = if shift { g.mul_vec(&v) } else { v };
                out.push((if shift { p } else { p + q }, v));
                idx += 1;
            }
        }
        out
    };
    let f = DecreasingFiltration::from_levels(dim, &levels(true, None));
    let w = IncreasingFiltration::from_levels(dim, &levels(false, None));
    let bad_index = {
        let mut idx = 0;
        let mut found = None;
        for (&(p, q), vs) in &pieces {
            if p > q && found.is_none() {
                found = Some(idx);
            }
            idx += vs.len();
        }
        found?
    };
    let bad_f = DecreasingFiltration::from_levels(dim, &levels(true, Some(bad_index)));
    let split = DeligneSplitting::from_pieces(
        dim,
        pieces.iter().map(|(k, vs)| (*k, Subspace::span(dim, &vs.iter().map(|v| g.mul_vec(v)).collect::<Vec<_>>()))),
    );
    Some(RandomMhs { w, f, split, bad_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::{hodge_diamond, polarization_check};

    #[test]
    fn fixtures_are_polarized() {
        let mut vs = vec![elliptic(), elliptic_squared(), a1_two_generators(2).unwrap(), a2_two_generators(2).unwrap()];
        for a in 0..=3 {
            vs.push(a1(a).unwrap());
        }
        for kind in [0, 1, 2, 5] {
            vs.push(a2(kind, 2).unwrap());
        }
        vs.push(a2(3, 4).unwrap());
        vs.push(a2(4, 4).unwrap());
        for v in vs {
            let m = v.mixed().unwrap();
            assert!(polarization_check(&m, &v.cone).unwrap().is_pass());
        }
    }

    #[test]
    fn small_types_need_larger_h() {
        assert!(a2(3, 2).is_err());
        assert!(a2(4, 2).is_err());
        assert!(a2(6, 2).is_err());
    }

    #[test]
    fn weight_three_twists_once() {
        let h = induced(&weight_three()).unwrap();
        assert_eq!(h.dim(), 24);
        assert_eq!(h.twist, 1);
        assert_eq!(h.n, 7);
        let d = hodge_diamond(&h.split);
        assert_eq!(d.get(7, 0), 1);
    }

    #[test]
    fn random_mhs_is_deterministic() {
        let a = random_mhs(3, 8);
        let b = random_mhs(3, 8);
        assert_eq!(a.split, b.split);
        assert!(a.split.ambient_dim() <= 8);
    }
}
