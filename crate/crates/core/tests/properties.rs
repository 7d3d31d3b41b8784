use hodge_core::catalog;
use hodge_core::exactlin::{gi, gr, GaussScalar, Mat, Scalar, Subspace};
use hodge_core::filtrations::{weight_axioms, weight_filtration, IncreasingFiltration};
use hodge_core::lie::lie_algebra;
use hodge_core::mhs::deligne_pieces;
use hodge_core::orbit::adapted_from_split;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_entry() -> impl Strategy<Value = GaussScalar> {
    (-3i64..=3, -2i64..=2).prop_map(|(a, b)| gi(a, b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(small_entry(), rows * cols).prop_map(move |d| Mat::from_vec(rows, cols, d))
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    (0..=n).prop_flat_map(move |k| matrix(k, n)).prop_map(Subspace::from_rows)
}

/// Invertible matrix: unit lower times unit upper triangular.
fn invertible(n: usize) -> impl Strategy<Value = Mat> {
    (matrix(n, n), matrix(n, n)).prop_map(move |(a, b)| {
        let mut l = Mat::identity(n);
        let mut u = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i > j {
                    l[(i, j)] = a[(i, j)].clone();
                } else if i < j {
                    u[(i, j)] = b[(i, j)].clone();
                }
            }
        }
        l.mul(&u)
    })
}

fn jordan(sizes: &[usize]) -> Mat {
    let n: usize = sizes.iter().sum();
    let mut m = Mat::zeros(n, n);
    let mut off = 0;
    for &k in sizes {
        for i in 0..k.saturating_sub(1) {
            m[(off + i + 1, off + i)] = GaussScalar::one();
        }
        off += k;
    }
    m
}

/// Weight filtration of a Jordan normal form read off block positions.
fn jordan_weights(sizes: &[usize], center: i64) -> IncreasingFiltration {
    let n: usize = sizes.iter().sum();
    let mut levels = Vec::new();
    let mut off = 0;
    for &k in sizes {
        for i in 0..k {
            let mut e = vec![GaussScalar::zero(); n];
            e[off + i] = GaussScalar::one();
            levels.push((center + k as i64 - 1 - 2 * i as i64, e));
        }
        off += k;
    }
    IncreasingFiltration::from_levels(n, &levels)
}

fn same_filtration(a: &IncreasingFiltration, b: &IncreasingFiltration, lo: i64, hi: i64) -> bool {
    (lo..=hi).all(|l| a.get(l) == b.get(l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(a.rank() + a.kernel_vectors().len(), a.cols());
        for v in a.kernel_vectors() {
            prop_assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn conjugation_is_an_involution(s in subspace(4)) {
        prop_assert_eq!(s.conjugate().conjugate(), s.clone());
        prop_assert_eq!(s.conjugate().dim(), s.dim());
    }

    #[test]
    fn modular_law(a in subspace(4), b in subspace(4), c0 in subspace(4)) {
        let c = a.sum(&c0);
        prop_assert_eq!(a.sum(&b.intersect(&c)), a.sum(&b).intersect(&c));
        prop_assert_eq!(a.sum(&b).dim() + a.intersect(&b).dim(), a.dim() + b.dim());
    }

    #[test]
    fn weight_filtration_matches_jordan_form(
        sizes in prop::collection::vec(1usize..4, 1..4),
        center in -2i64..3,
        g in (1usize..2).prop_flat_map(|_| invertible(9)),
    ) {
        let n: usize = sizes.iter().sum();
        let g = g.submatrix(&(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
        let gi_ = g.inverse().unwrap();
        let nop = g.mul(&jordan(&sizes)).mul(&gi_);
        let w = weight_filtration(&nop, center).unwrap();
        let expect = jordan_weights(&sizes, center);
        prop_assert!(same_filtration(&w, &expect.image(&g), center - 4, center + 4));
        prop_assert!(weight_axioms(&w, &nop, center).is_pass());
    }

    #[test]
    fn splitting_matches_construction(seed in 0u64..10_000) {
        let r = catalog::random_mhs(seed, 6);
        let s = deligne_pieces(&r.w, &r.f);
        prop_assert_eq!(&s, &r.split);
        prop_assert!(s.verify(&r.w, &r.f).is_pass());
    }
}

/// Rational element of `Aut(Q)` from a Lie algebra element by the Cayley transform.
fn cayley(x: &Mat) -> Option<Mat> {
    let id = Mat::identity(x.rows());
    id.sub(x).inverse().ok().map(|inv| inv.mul(&id.add(x)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adapted_basis_survives_change_of_frame(a in 0usize..4, coeffs in prop::collection::vec(-2i64..=2, 40)) {
        let v = catalog::a1(a).unwrap();
        let l = lie_algebra(&v.q).unwrap();
        let x = l.basis.iter().zip(coeffs.iter().cycle()).fold(Mat::zeros(v.dim(), v.dim()), |acc, (b, &c)| {
            acc.add(&b.scale(&gr(c, 5)))
        });
        let Some(g) = cayley(&x) else { return Ok(()); };
        prop_assert_eq!(g.transpose().mul(&v.q).mul(&g), v.q.clone());
        let split = deligne_pieces(&v.weight_filtration().unwrap(), &v.f).image(&g);
        let basis = adapted_from_split(&split, &v.q, v.weight).unwrap();
        prop_assert!(basis.check_pairing(&v.q).is_pass());
        let base = adapted_from_split(&deligne_pieces(&v.weight_filtration().unwrap(), &v.f), &v.q, v.weight).unwrap();
        prop_assert_eq!(basis.degrees(), base.degrees());
    }

    #[test]
    fn exact_and_float_agree(which in 0usize..12, num in prop::collection::vec((-4i64..=4, -4i64..=4), 6)) {
        let fx = catalog::orbit_fixtures().unwrap().swap_remove(which);
        let k = fx.spec.k();
        let t: Vec<GaussScalar> = (0..fx.spec.nvars).map(|i| gi(num[i].0, num[i].1) * gr(1, 16)).collect();
        let ell: Vec<GaussScalar> = (0..k).map(|j| gi(num[5 - j].1, num[5 - j].0) * gr(1, 3)).collect();
        let exact = fx.spec.exact().h_tilde(&t, &ell).to_c64();
        let tf: Vec<Complex64> = t.iter().map(Scalar::to_c64).collect();
        let lf: Vec<Complex64> = ell.iter().map(Scalar::to_c64).collect();
        let float = fx.spec.numeric().h_tilde(&tf, &lf);
        prop_assert!((exact - float).norm() <= 1e-10 * (1.0 + exact.norm()), "{exact} vs {float}");
    }
}
