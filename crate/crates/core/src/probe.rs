//! Floating-point probes: radial limits of `h~`, vanishing of the mixed terms,
//! Levi forms of `-log h` on strata, and the limit `exp(iyN) F -> F_inf`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{HodgeError, Result};
use crate::exactlin::{FMat, Mat, Scalar, Subspace};
use crate::mhs::{deligne_split, f_infinity, MixedHodge};
use crate::orbit::OrbitData;
use crate::verdict::Verdict;

/// Differences below this are treated as equal when checking monotone decay.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub radii: Vec<f64>,
    /// One angle per shrinking coordinate.
    pub angles: Vec<Vec<f64>>,
    pub fd_step: f64,
    pub tol: f64,
}

impl ProbeConfig {
    pub fn new(radii: Vec<f64>, angles: Vec<Vec<f64>>, fd_step: f64, tol: f64) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|&r| r <= 0.0) || radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(HodgeError::InvalidInput("radii must be positive and strictly decreasing".into()));
        }
        if fd_step <= 0.0 || tol <= 0.0 {
            return Err(HodgeError::InvalidInput("fd_step and tol must be positive".into()));
        }
        if angles.is_empty() {
            return Err(HodgeError::InvalidInput("at least one angle vector is needed".into()));
        }
        Ok(ProbeConfig { radii, angles, fd_step, tol })
    }

    /// Radii `10^-2 .. 10^-8`, `count` angle vectors of length `width` spread over the circle.
    pub fn standard(width: usize, count: usize) -> Self {
        let radii = (2..=8).map(|e| 10f64.powi(-e)).collect();
        let angles = (0..count)
            .map(|a| (0..width).map(|j| 2.0 * std::f64::consts::PI * ((a * (2 * j + 3) + j) as f64 + 0.37) / count as f64).collect())
            .collect();
        ProbeConfig { radii, angles, fd_step: 1e-4, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    /// `(radius, angle index, value)`.
    pub observed: Vec<(f64, usize, f64)>,
    /// Mean value over angles at the smallest radius.
    pub limit: f64,
    pub target: f64,
    /// `max |observed - target|` at the smallest radius.
    pub max_deviation: f64,
    /// Spread of the values over angles at the smallest radius.
    pub angle_spread: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

fn polar(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

fn point(base: &[Complex64], set: &[usize], r: f64, angles: &[f64]) -> Vec<Complex64> {
    let mut t = base.to_vec();
    for (slot, &i) in set.iter().enumerate() {
        t[i] = polar(r, angles.get(slot).copied().unwrap_or(0.0));
    }
    t
}

fn base_ell(data: &OrbitData<Complex64>, base: &[Complex64], set: &[usize]) -> Result<Vec<Complex64>> {
    let mut t = base.to_vec();
    for &i in set {
        t[i] = Complex64::new(1.0, 0.0);
    }
    data.ell_of(&t, &[])
}

fn check_set(data: &OrbitData<Complex64>, set: &[usize], base: &[Complex64]) -> Result<()> {
    if set.iter().any(|&i| i >= data.k) {
        return Err(HodgeError::InvalidInput(format!("{set:?} is not a subset of the cone indices")));
    }
    if base.len() != data.nvars {
        return Err(HodgeError::DimensionMismatch { expected: data.nvars, found: base.len() });
    }
    Ok(())
}

fn summarize(observed: Vec<(f64, usize, f64)>, radii: &[f64], target: f64, tol: f64) -> LimitReport {
    let dev_at = |r: f64| {
        observed.iter().filter(|o| o.0 == r).map(|o| (o.2 - target).abs()).fold(0.0, f64::max)
    };
    let devs: Vec<f64> = radii.iter().map(|&r| dev_at(r)).collect();
    let last = *radii.last().expect("nonempty radii");
    let finals: Vec<f64> = observed.iter().filter(|o| o.0 == last).map(|o| o.2).collect();
    let limit = finals.iter().sum::<f64>() / finals.len() as f64;
    let spread = finals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - finals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_deviation = *devs.last().unwrap();
    let tail = &devs[devs.len().saturating_sub(3)..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0] + NOISE_FLOOR);
    let verdict = if !max_deviation.is_finite() {
        Verdict::fail("non-finite value at the smallest radius")
    } else if max_deviation > tol {
        Verdict::fail(format!("deviation {max_deviation:e} exceeds {tol:e}"))
    } else if !monotone {
        Verdict::fail(format!("deviations not decreasing over the last radii: {tail:?}"))
    } else {
        Verdict::Pass
    };
    LimitReport { observed, limit, target, max_deviation, angle_spread: spread, tol, verdict }
}

/// `h~` along `t_i = r e^{i theta_i}` for `i` in `set`, against the stratum value.
pub fn radial_limit(data: &OrbitData<Complex64>, set: &[usize], base: &[Complex64], cfg: &ProbeConfig) -> Result<LimitReport> {
    check_set(data, set, base)?;
    let ell0 = base_ell(data, base, set)?;
    let target = data.stratum_value(set, base, &ell0).re;
    let mut observed = Vec::new();
    for &r in &cfg.radii {
        for (ai, ang) in cfg.angles.iter().enumerate() {
            let t = point(base, set, r, ang);
            let ell = data.ell_of(&t, &[])?;
            observed.push((r, ai, data.h_tilde(&t, &ell).re));
        }
    }
    Ok(summarize(observed, &cfg.radii, target, cfg.tol))
}

/// `|prod ell_j^{a_j} Q(zeta^ N^a e_0, conj(zeta^ e_inf))|` as all cone coordinates shrink.
pub fn term_vanishing(data: &OrbitData<Complex64>, a: &[u32], base: &[Complex64], cfg: &ProbeConfig) -> Result<LimitReport> {
    if a.len() != data.k || a.iter().all(|&x| x == 0) {
        return Err(HodgeError::InvalidInput("multi-index must have one entry per generator and |a| > 0".into()));
    }
    let set: Vec<usize> = (0..data.k).collect();
    check_set(data, &set, base)?;
    let mut observed = Vec::new();
    for &r in &cfg.radii {
        for (ai, ang) in cfg.angles.iter().enumerate() {
            let t = point(base, &set, r, ang);
            let ell = data.ell_of(&t, &[])?;
            observed.push((r, ai, data.term(a, &t, &ell).norm()));
        }
    }
    Ok(summarize(observed, &cfg.radii, 0.0, cfg.tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeviReport {
    pub value: f64,
    /// Hermitian Levi form in the varied coordinates.
    pub form: DMatrix<Complex64>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

/// Levi form of `-log stratum_value(set, .)` in the coordinates `dirs`, by central differences.
pub fn levi_probe(data: &OrbitData<Complex64>, set: &[usize], base: &[Complex64], dirs: &[usize], cfg: &ProbeConfig) -> Result<LeviReport> {
    check_set(data, set, base)?;
    if dirs.iter().any(|&d| d >= data.nvars) {
        return Err(HodgeError::InvalidInput("direction index out of range".into()));
    }
    let ell = base_ell(data, base, set)?;
    let value = data.stratum_value(set, base, &ell).re;
    if value <= 0.0 || !value.is_finite() {
        return Err(HodgeError::InvalidInput(format!("stratum value {value} is not positive")));
    }
    let phi = |shift: &[(usize, Complex64)]| -> f64 {
        let mut t = base.to_vec();
        for &(i, dz) in shift {
            t[i] += dz;
        }
        -data.stratum_value(set, &t, &ell).re.ln()
    };
    let h = cfg.fd_step;
    // real coordinates: 2a is Re s_a, 2a+1 is Im s_a
    let unit = |k: usize| -> (usize, Complex64) {
        let z = if k % 2 == 0 { Complex64::new(h, 0.0) } else { Complex64::new(0.0, h) };
        (dirs[k / 2], z)
    };
    let m = 2 * dirs.len();
    let f0 = phi(&[]);
    let mut hess = vec![vec![0.0; m]; m];
    for u in 0..m {
        let (iu, du) = unit(u);
        hess[u][u] = (phi(&[(iu, du)]) - 2.0 * f0 + phi(&[(iu, -du)])) / (h * h);
        for v in u + 1..m {
            let (iv, dv) = unit(v);
            let val = (phi(&[(iu, du), (iv, dv)]) - phi(&[(iu, du), (iv, -dv)]) - phi(&[(iu, -du), (iv, dv)])
                + phi(&[(iu, -du), (iv, -dv)]))
                / (4.0 * h * h);
            hess[u][v] = val;
            hess[v][u] = val;
        }
    }
    let n = dirs.len();
    let form = DMatrix::from_fn(n, n, |a, b| {
        let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        Complex64::new(hess[xa][xb] + hess[ya][yb], hess[xa][yb] - hess[ya][xb]) * 0.25
    });
    let eigenvalues: Vec<f64> = form.clone().symmetric_eigenvalues().iter().copied().collect();
    let min_eigenvalue = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = Verdict::from_bool(min_eigenvalue >= -cfg.tol, || format!("Levi form has eigenvalue {min_eigenvalue:e}"));
    Ok(LeviReport { value, form, eigenvalues, min_eigenvalue, tol: cfg.tol, verdict })
}

fn to_dmatrix(m: &FMat) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn orthonormal_columns(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    if a.ncols() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > 1e-10 * smax.max(1.0)).collect();
    DMatrix::from_fn(a.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Gap between column spans: `||P_A - P_B||_2`, the sine of the largest principal angle.
pub fn subspace_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let qa = orthonormal_columns(a);
    let qb = orthonormal_columns(b);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    let pa = &qa * qa.adjoint();
    let pb = &qb * qb.adjoint();
    let diff = pa - pb;
    diff.singular_values().iter().cloned().fold(0.0, f64::max)
}

fn subspace_columns(s: &Subspace) -> DMatrix<Complex64> {
    let vs = s.vectors();
    DMatrix::from_fn(s.ambient_dim(), vs.len(), |i, j| vs[j][i].to_c64())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FInfinityReport {
    /// `(y, max_p gap(exp(iyN) F^p, F_inf^p))`.
    pub distances: Vec<(f64, f64)>,
    /// `d(y) ~ c / y` extrapolated from the last two samples.
    pub extrapolated: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

/// Distance from `exp(iyN) F` to the exact `F_inf`, for growing `y`.
pub fn f_infinity_probe(m: &MixedHodge, n_op: &Mat, y_values: &[f64], tol: f64) -> Result<FInfinityReport> {
    if y_values.len() < 2 || y_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HodgeError::InvalidInput("need at least two increasing y values".into()));
    }
    let split = deligne_split(m)?;
    let finf = f_infinity(&split, m.n);
    let nf = to_dmatrix(&n_op.to_f64());
    let d = m.dim();
    let levels: Vec<i64> = (m.f.lowest()..=m.f.highest().max(finf.highest())).collect();
    let mut distances = Vec::new();
    for &y in y_values {
        // exp(iyN) by its finite series
        let x = &nf * Complex64::new(0.0, y);
        let mut g = DMatrix::<Complex64>::identity(d, d);
        let mut term = DMatrix::<Complex64>::identity(d, d);
        for k in 1..=d {
            term = &term * &x / Complex64::new(k as f64, 0.0);
            g += &term;
        }
        let mut worst: f64 = 0.0;
        for &p in &levels {
            let moved = &g * subspace_columns(&m.f.get(p));
            worst = worst.max(subspace_gap(&moved, &subspace_columns(&finf.get(p))));
        }
        distances.push((y, worst));
    }
    let (yp, dp) = distances[distances.len() - 2];
    let (yl, dl) = distances[distances.len() - 1];
    let extrapolated = ((yl * dl - yp * dp) / (yl - yp)).abs();
    let decreasing = distances.windows(2).all(|w| w[1].1 <= w[0].1 + NOISE_FLOOR);
    let verdict = if !decreasing {
        Verdict::fail("distance is not decreasing in y")
    } else if extrapolated >= tol {
        Verdict::fail(format!("extrapolated distance {extrapolated:e} is not below {tol:e}"))
    } else {
        Verdict::Pass
    };
    Ok(FInfinityReport { distances, extrapolated, tol, verdict })
}

/// Vector of complex numbers as an `nalgebra` column.
pub fn column(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{elliptic, induced};
    use crate::orbit::OrbitSpec;

    #[test]
    fn config_validation() {
        assert!(ProbeConfig::new(vec![1e-2, 1e-3], vec![vec![0.0]], 1e-4, 1e-6).is_ok());
        assert!(ProbeConfig::new(vec![1e-3, 1e-2], vec![vec![0.0]], 1e-4, 1e-6).is_err());
        assert!(ProbeConfig::new(vec![1e-2], vec![vec![0.0]], 0.0, 1e-6).is_err());
        assert_eq!(ProbeConfig::standard(2, 8).angles.len(), 8);
    }

    #[test]
    fn elliptic_limit_is_constant() {
        let spec = OrbitSpec::new(induced(&elliptic()).unwrap(), 1, Default::default()).unwrap();
        let data = spec.numeric();
        let cfg = ProbeConfig::standard(1, 4);
        let rep = radial_limit(&data, &[0], &[Complex64::new(0.5, 0.0)], &cfg).unwrap();
        assert!(rep.verdict.is_pass(), "{:?}", rep.verdict);
        assert!((rep.target - 1.0).abs() < 1e-12);
        assert!(rep.observed.iter().all(|o| (o.2 - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gap_metric_basics() {
        let a = DMatrix::from_row_slice(2, 1, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let b = DMatrix::from_row_slice(2, 1, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((subspace_gap(&a, &a)).abs() < 1e-12);
        assert!((subspace_gap(&a, &b) - 1.0).abs() < 1e-12);
        let scaled = &a * Complex64::new(0.0, 3.0);
        assert!(subspace_gap(&a, &scaled) < 1e-12);
    }

    #[test]
    fn elliptic_f_infinity_decays() {
        let v = elliptic();
        let m = v.mixed().unwrap();
        let rep = f_infinity_probe(&m, &v.cone.generators()[0], &[10.0, 100.0, 1e3, 1e4], 1e-6).unwrap();
        assert!(rep.verdict.is_pass(), "{:?}", rep);
        // ~1/y decay
        let (_, d3) = rep.distances[2];
        let (_, d4) = rep.distances[3];
        assert!((d3 / d4 - 10.0).abs() < 0.1);
    }
}
