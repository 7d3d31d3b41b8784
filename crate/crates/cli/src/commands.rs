use clap::ValueEnum;
use hodge_core::exactlin::{format_rational, gi, gr, GaussScalar, Mat};
use hodge_core::filtrations::{isotropy_check, weight_filtration, IncreasingFiltration};
use hodge_core::induced::locate_markers;
use hodge_core::lie::{
    action_compatibility, bracket_compatibility, cone_containment, hermitian_test, lie_algebra, lie_deligne_split,
    smoothness_test, LieSplit,
};
use hodge_core::mhs::{check_symmetries, deligne_split, hodge_diamond, polarization_check, HodgeDiamond};
use hodge_core::orbit::{adapted_from_split, eval_frame, monodromy_check_float, OrbitData, OrbitSpec};
use hodge_core::probe::{f_infinity_probe, levi_probe, radial_limit, term_vanishing, ProbeConfig};
use hodge_core::Verdict;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invariant, CliError, CliResult};
use crate::fixture::{Fixture, FixtureFile, Structure};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Symmetries,
    Isotropy,
    Bracket,
    Monodromy,
    Limits,
    LemmaM,
    Psh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Probe {
    RadialLimit,
    TermVanishing,
    Levi,
    FInfinity,
}

/// Options shared by the commands; each reads only what it needs.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub t: Vec<Complex64>,
    pub branch: Vec<i64>,
    pub suites: Vec<Suite>,
    pub shift: Vec<i64>,
    pub tol: Option<f64>,
    pub set: Vec<usize>,
    pub exponents: Vec<u32>,
    pub dirs: Vec<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub y: Vec<f64>,
    pub generator: Option<usize>,
}

pub struct Outcome {
    pub text: String,
    pub report: Report,
}

pub fn fmt_gauss(z: &GaussScalar) -> String {
    let re = format_rational(&z.re);
    let im = format_rational(&z.im);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn fmt_c(z: Complex64) -> String {
    format!("{:.12e} {:+.12e}i", z.re, z.im)
}

fn diamond_rows(d: &HodgeDiamond) -> Vec<[i64; 3]> {
    d.entries().iter().map(|(&(p, q), &n)| [p, q, n as i64]).collect()
}

fn diamond_table(d: &HodgeDiamond) -> String {
    let mut out = String::from("    p    q  dim\n");
    for [p, q, n] in diamond_rows(d) {
        out.push_str(&format!("  {p:>3}  {q:>3}  {n:>3}\n"));
    }
    out
}

const SYMMETRY_CLAIM: &str = "h^{p,q} = h^{q,p} = h^{n-q,n-p}";

pub fn diamond(fx: &Fixture) -> CliResult<Outcome> {
    let mut r = Report::new("diamond", fx.name());
    let mut text = String::new();
    let mixed = fx.mixed()?;
    let d = hodge_diamond(&deligne_split(&mixed).map_err(invariant("splitting"))?);
    let label = if matches!(fx.structure, Structure::Pure(_)) { "V" } else { "H" };
    text.push_str(&format!("{label}  weight {}, dim {}\n{}", mixed.n, mixed.dim(), diamond_table(&d)));
    r.value(&format!("diamond_{}", label.to_lowercase()), diamond_rows(&d));
    r.check(format!("symmetry/{label}"), SYMMETRY_CLAIM, &check_symmetries(&d, mixed.n));
    if let Structure::Pure(_) = fx.structure {
        let h = fx.induced()?;
        let dh = hodge_diamond(&h.split);
        let basis = adapted_from_split(&h.split, &h.q, h.n).map_err(invariant("adapted basis"))?;
        let mk = locate_markers(&h, &basis).map_err(invariant("markers"))?;
        text.push_str(&format!("H  weight {}, dim {}, twist {}\n{}", h.n, h.dim(), h.twist, diamond_table(&dh)));
        text.push_str(&format!("m = {}\n", mk.m));
        r.value("diamond_h", diamond_rows(&dh));
        r.value("m", mk.m);
        r.check("symmetry/H", SYMMETRY_CLAIM, &check_symmetries(&dh, h.n));
    }
    Ok(Outcome { text, report: r })
}

pub fn split(fx: &Fixture) -> CliResult<Outcome> {
    let mut r = Report::new("split", fx.name());
    let mixed = fx.mixed()?;
    let s = deligne_split(&mixed).map_err(invariant("splitting"))?;
    let mut text = String::new();
    let mut listing = Vec::new();
    for (&(p, q), piece) in s.pieces() {
        text.push_str(&format!("I^{{{p},{q}}}  dim {}\n", piece.dim()));
        let vectors: Vec<Vec<String>> = piece.vectors().iter().map(|v| v.iter().map(fmt_gauss).collect()).collect();
        for v in &vectors {
            text.push_str(&format!("  [{}]\n", v.join(", ")));
        }
        listing.push(serde_json::json!({ "p": p, "q": q, "basis": vectors }));
    }
    r.value("pieces", listing);
    r.check("splitting/axioms", "I^{p,q} refines W and F and is conjugation compatible", &s.verify(&mixed.w, &mixed.f));
    Ok(Outcome { text, report: r })
}

pub fn induce(fx: &Fixture) -> CliResult<Outcome> {
    let mut r = Report::new("induce", fx.name());
    let h = fx.induced()?;
    let file = FixtureFile::from_induced(&format!("{}-induced", fx.name()), &h);
    r.value("dim", h.dim());
    r.value("n", h.n);
    r.value("twist", h.twist);
    r.value("degrees", &h.degrees);
    r.check("symmetry/H", SYMMETRY_CLAIM, &check_symmetries(&hodge_diamond(&h.split), h.n));
    Ok(Outcome { text: file.render(), report: r })
}

pub fn markers(fx: &Fixture) -> CliResult<Outcome> {
    let mut r = Report::new("markers", fx.name());
    let h = fx.induced()?;
    let basis = adapted_from_split(&h.split, &h.q, h.n).map_err(invariant("adapted basis"))?;
    r.check("basis/pairing", "Q(e_i, e_j) = 1 exactly when i + j = d", &basis.check_pairing(&h.q));
    let mk = locate_markers(&h, &basis).map_err(invariant("markers"))?;
    let slot = |i: usize| basis.degree(i);
    let text = format!(
        "m = {}\nlambda = {}\ne0 = {}  I^{:?}\neinf = {}  I^{:?}\ned = {}  I^{:?}\n",
        mk.m,
        fmt_gauss(&mk.lambda),
        mk.e0_index,
        slot(mk.e0_index),
        mk.einf_index,
        slot(mk.einf_index),
        mk.ed_index,
        slot(mk.ed_index)
    );
    r.value("m", mk.m);
    r.value("lambda", fmt_gauss(&mk.lambda));
    r.value("indices", [mk.e0_index, mk.einf_index, mk.ed_index]);
    r.value("slots", [slot(mk.e0_index), slot(mk.einf_index), slot(mk.ed_index)]);
    if let Some(given) = &fx.file.markers {
        let same = given.m == mk.m && [given.e0, given.einf, given.ed] == [mk.e0_index, mk.einf_index, mk.ed_index];
        r.check(
            "markers/override",
            "marker overrides agree with the computed markers",
            &Verdict::from_bool(same, || "fixture overrides differ from the computed markers".into()),
        );
    }
    Ok(Outcome { text, report: r })
}

fn lie_split(fx: &Fixture) -> CliResult<LieSplit> {
    let mixed = fx.mixed()?;
    let l = lie_algebra(&mixed.q).map_err(invariant("Lie algebra"))?;
    lie_deligne_split(&l, &mixed).map_err(invariant("Lie algebra splitting"))
}

pub fn lie(fx: &Fixture) -> CliResult<Outcome> {
    let mut r = Report::new("lie", fx.name());
    let ls = lie_split(fx)?;
    let dims = [
        ("g", ls.dim()),
        ("s_F", ls.s_f.dim()),
        ("s_W", ls.s_w.dim()),
        ("s_inf", ls.s_inf.dim()),
        ("m_x", ls.m_x.dim()),
        ("s_F_perp", ls.s_f_perp.dim()),
    ];
    let mut text = String::new();
    for (name, d) in dims {
        text.push_str(&format!("{name:<9} {d}\n"));
        r.value(&format!("dim_{name}"), d);
    }
    let herm = hermitian_test(&ls);
    let smooth = smoothness_test(&ls);
    text.push_str(&format!("hermitian  {herm}\nsmooth     {smooth}\n"));
    text.push_str(&format!("g\n{}", diamond_table(&ls.diamond())));
    r.value("diamond_g", diamond_rows(&ls.diamond()));
    r.value("hermitian", herm.is_pass());
    r.value("smooth", smooth.is_pass());
    r.check("lie/bracket", "[g^{p,q}, g^{r,s}] lies in g^{p+r,q+s}", &bracket_compatibility(&ls));
    Ok(Outcome { text, report: r })
}

fn point(data: &OrbitData<Complex64>, t: &[Complex64]) -> CliResult<Vec<Complex64>> {
    if t.len() != data.nvars {
        return Err(CliError::Input(format!("--t: expected {} coordinates, found {}", data.nvars, t.len())));
    }
    Ok(t.to_vec())
}

pub fn eval(fx: &Fixture, opts: &Options) -> CliResult<Outcome> {
    let mut r = Report::new("eval", fx.name());
    let spec = fx.orbit()?;
    let data = spec.numeric();
    let t = point(&data, &opts.t)?;
    let branch = if opts.branch.is_empty() { vec![0; data.k] } else { opts.branch.clone() };
    if branch.len() != data.k {
        return Err(CliError::Input(format!("--branch: expected {} values", data.k)));
    }
    let frame = eval_frame(&data, &t, &branch).map_err(|e| CliError::Input(format!("--t: {e}")))?;
    let mut text = String::new();
    for (j, l) in frame.ell.iter().enumerate() {
        text.push_str(&format!("ell_{}  {}\n", j + 1, fmt_c(*l)));
    }
    text.push_str(&format!("h~     {}\nq01    {}\n", fmt_c(frame.h_tilde), fmt_c(frame.q01)));
    let pair = |z: Complex64| [z.re, z.im];
    r.value("ell", frame.ell.iter().map(|z| pair(*z)).collect::<Vec<_>>());
    r.value("h_tilde", pair(frame.h_tilde));
    r.value("q01", pair(frame.q01));
    r.check(
        "eval/positive",
        "h~ is positive on the orbit",
        &Verdict::from_bool(frame.h_tilde.re > 0.0, || format!("h~ = {}", fmt_c(frame.h_tilde))),
    );
    Ok(Outcome { text, report: r })
}

fn sample(rng: &mut ChaCha8Rng, k: usize, nvars: usize, radius: f64) -> Vec<Complex64> {
    (0..nvars)
        .map(|i| {
            let r = if i < k { rng.gen_range(0.05..0.9) } else { rng.gen_range(0.0..radius) };
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

fn base_point(data: &OrbitData<Complex64>, opts: &Options, rng: &mut ChaCha8Rng) -> CliResult<Vec<Complex64>> {
    if opts.t.is_empty() {
        Ok(sample(rng, data.k, data.nvars, 0.2))
    } else {
        point(data, &opts.t)
    }
}

fn suites_for(fx: &Fixture) -> Vec<Suite> {
    let mut s = vec![Suite::Symmetries, Suite::Isotropy, Suite::Bracket];
    if fx.file.zeta.is_some() {
        s.extend([Suite::Monodromy, Suite::Limits]);
        if fx.cone().len() >= 2 {
            s.push(Suite::LemmaM);
        }
        if fx.file.zeta.as_ref().is_some_and(|z| z.nvars > fx.cone().len()) {
            s.push(Suite::Psh);
        }
    }
    s
}

pub fn check(fx: &Fixture, opts: &Options) -> CliResult<Outcome> {
    let mut r = Report::new("check", fx.name());
    let mut suites = if opts.suites.is_empty() { suites_for(fx) } else { opts.suites.clone() };
    suites.sort();
    suites.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let orbit = if suites.iter().any(|s| *s >= Suite::Monodromy) { Some(fx.orbit()?) } else { None };
    for suite in &suites {
        match suite {
            Suite::Symmetries => symmetries(fx, &mut r)?,
            Suite::Isotropy => isotropy(fx, &mut r)?,
            Suite::Bracket => bracket(fx, &mut r)?,
            Suite::Monodromy => monodromy(orbit.as_ref().unwrap(), opts, &mut rng, &mut r)?,
            Suite::Limits => limits(orbit.as_ref().unwrap(), opts, &mut rng, &mut r)?,
            Suite::LemmaM => lemma_m(orbit.as_ref().unwrap(), &mut r)?,
            Suite::Psh => psh(orbit.as_ref().unwrap(), opts, &mut rng, &mut r)?,
        }
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    let mut text = r.summary();
    text.push_str(&format!("{passed}/{} checks pass\n", r.checks.len()));
    Ok(Outcome { text, report: r })
}

fn symmetries(fx: &Fixture, r: &mut Report) -> CliResult<()> {
    let mixed = fx.mixed()?;
    let label = if matches!(fx.structure, Structure::Pure(_)) { "V" } else { "H" };
    let d = hodge_diamond(&deligne_split(&mixed).map_err(invariant("splitting"))?);
    r.check(format!("symmetry/{label}"), SYMMETRY_CLAIM, &check_symmetries(&d, mixed.n));
    let pol = polarization_check(&mixed, fx.cone()).map_err(invariant("polarization"))?;
    r.check(format!("polarization/{label}"), "the cone polarizes the mixed structure", &pol);
    if let Structure::Pure(_) = fx.structure {
        let h = fx.induced()?;
        r.check("symmetry/H", SYMMETRY_CLAIM, &check_symmetries(&hodge_diamond(&h.split), h.n));
        let pol = polarization_check(&h.mixed(), &h.cone).map_err(invariant("polarization"))?;
        r.check("polarization/H", "the induced cone polarizes the induced structure", &pol);
    }
    Ok(())
}

const ISOTROPY_CLAIM: &str = "Q(W_a, W_b) = 0 whenever a + b < 2n";

fn isotropy(fx: &Fixture, r: &mut Report) -> CliResult<()> {
    let mixed = fx.mixed()?;
    let label = if matches!(fx.structure, Structure::Pure(_)) { "V" } else { "H" };
    fn iso(w: &IncreasingFiltration, q: &Mat, n: i64) -> CliResult<Verdict> {
        isotropy_check(w, q, n).map_err(invariant("isotropy"))
    }
    r.check(format!("isotropy/{label}/W"), ISOTROPY_CLAIM, &iso(&mixed.w, &mixed.q, mixed.n)?);
    for (j, n) in fx.cone().generators().iter().enumerate() {
        let w = weight_filtration(n, mixed.n).map_err(invariant("weight filtration"))?;
        r.check(format!("isotropy/{label}/W(N_{})", j + 1), ISOTROPY_CLAIM, &iso(&w, &mixed.q, mixed.n)?);
    }
    if let Structure::Pure(_) = fx.structure {
        let h = fx.induced()?;
        r.check("isotropy/H/W", ISOTROPY_CLAIM, &iso(&h.w, &h.q, h.n)?);
        for (j, n) in h.cone.generators().iter().enumerate() {
            let w = weight_filtration(n, h.n).map_err(invariant("weight filtration"))?;
            r.check(format!("isotropy/H/W(N_{})", j + 1), ISOTROPY_CLAIM, &iso(&w, &h.q, h.n)?);
        }
    }
    Ok(())
}

fn bracket(fx: &Fixture, r: &mut Report) -> CliResult<()> {
    let ls = lie_split(fx)?;
    let mixed = fx.mixed()?;
    let s = deligne_split(&mixed).map_err(invariant("splitting"))?;
    r.check("lie/bracket", "[g^{p,q}, g^{r,s}] lies in g^{p+r,q+s}", &bracket_compatibility(&ls));
    r.check("lie/action", "g^{p,q} maps I^{r,s} into I^{p+r,q+s}", &action_compatibility(&ls, &s, |x| x.clone()));
    r.check("lie/cone", "every cone generator lies in g^{-1,-1}", &cone_containment(&ls, fx.cone().generators()));
    if let Structure::Pure(_) = fx.structure {
        let h = fx.induced()?;
        r.check(
            "lie/action-on-H",
            "the induced action maps I^{r,s}(H) into I^{p+r,q+s}(H)",
            &action_compatibility(&ls, &h.split, |x| h.induce_operator(x)),
        );
    }
    Ok(())
}

fn monodromy(spec: &OrbitSpec, opts: &Options, rng: &mut ChaCha8Rng, r: &mut Report) -> CliResult<()> {
    let k = spec.k();
    let shifts: Vec<Vec<i64>> = if opts.shift.is_empty() {
        let mut s: Vec<Vec<i64>> = (0..k).map(|j| (0..k).map(|i| i64::from(i == j)).collect()).collect();
        s.push((0..k).map(|j| if j % 2 == 0 { 5 } else { -3 }).collect());
        s
    } else if opts.shift.len() == k {
        vec![opts.shift.clone()]
    } else {
        return Err(CliError::Input(format!("--shift: expected {k} values, found {}", opts.shift.len())));
    };
    let t: Vec<GaussScalar> = (0..spec.nvars).map(|i| gi(1, i as i64) * gr(1, 3 + i as i64)).collect();
    let ell: Vec<GaussScalar> = (0..k).map(|j| gi(j as i64 - 1, 2 + j as i64) * gr(1, 2)).collect();
    let claim = "h~ and Q(eta_0, conj eta_inf) are unchanged by ell_j -> ell_j + s_j";
    for s in &shifts {
        let v = spec.monodromy_check(&t, &ell, s).map_err(invariant("monodromy"))?;
        r.check(format!("monodromy/exact/{s:?}"), claim, &v);
    }
    let tol = opts.tol.unwrap_or(1e-12);
    let data = spec.numeric();
    let mut worst: f64 = 0.0;
    let mut verdict = Verdict::Pass;
    for _ in 0..opts.samples.unwrap_or(20) {
        let p = sample(rng, k, spec.nvars, 0.3);
        let s: Vec<i64> = shifts[rng.gen_range(0..shifts.len())].clone();
        let (v, dev) = monodromy_check_float(&data, &p, &s, tol).map_err(invariant("monodromy"))?;
        worst = worst.max(dev);
        if verdict.is_pass() {
            verdict = v;
        }
    }
    r.value("monodromy_float_worst", worst);
    r.check("monodromy/float", claim, &verdict);
    Ok(())
}

fn multi_indices(k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..k {
        for e in 1..=2 {
            let mut a = vec![0; k];
            a[i] = e;
            out.push(a);
        }
        for j in i + 1..k {
            let mut b = vec![0; k];
            b[i] = 1;
            b[j] = 1;
            out.push(b);
        }
    }
    out
}

fn limit_config(width: usize, opts: &Options) -> ProbeConfig {
    let mut cfg = ProbeConfig::standard(width, 8);
    cfg.tol = opts.tol.unwrap_or(1e-6);
    cfg
}

fn limits(spec: &OrbitSpec, opts: &Options, rng: &mut ChaCha8Rng, r: &mut Report) -> CliResult<()> {
    let k = spec.k();
    let data = spec.numeric();
    let base = base_point(&data, opts, rng)?;
    let mut sets: Vec<Vec<usize>> = vec![(0..k).collect()];
    if k > 1 {
        sets.extend((0..k).map(|j| vec![j]));
    }
    for set in sets {
        let rep = radial_limit(&data, &set, &base, &limit_config(set.len(), opts)).map_err(invariant("radial limit"))?;
        let v = rep.verdict.clone().and(|| {
            Verdict::from_bool(rep.angle_spread <= rep.tol, || format!("angle spread {:e}", rep.angle_spread))
        });
        r.check(format!("limit/radial/{set:?}"), "h~ tends to the stratum value, independently of angles", &v);
    }
    for a in multi_indices(k) {
        let rep = term_vanishing(&data, &a, &base, &limit_config(k, opts)).map_err(invariant("term vanishing"))?;
        r.check(format!("limit/term/{a:?}"), "each term with a nonzero exponent tends to zero", &rep.verdict);
    }
    // norm relation along the deepest stratum
    let all: Vec<usize> = (0..k).collect();
    let zero = vec![Complex64::new(0.0, 0.0); k];
    let mut ratios = Vec::new();
    let mut positive = true;
    for _ in 0..opts.samples.unwrap_or(10) {
        let mut p = sample(rng, k, spec.nvars, 0.3);
        p.iter_mut().take(k).for_each(|x| *x = Complex64::new(0.0, 0.0));
        let hj = data.h_j(&p).re;
        positive &= hj > 0.0;
        ratios.push(data.stratum_value(&all, &p, &zero).re / hj);
    }
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / lo.abs();
    r.value("norm_ratio", lo);
    r.check(
        "limit/norm-relation",
        "h_J > 0 and the stratum value is a constant multiple of h_J",
        &Verdict::from_bool(positive, || "h_J is not positive".into())
            .and(|| Verdict::from_bool(spread <= 1e-8, || format!("ratio spread {spread:e}"))),
    );
    Ok(())
}

fn lemma_m(spec: &OrbitSpec, r: &mut Report) -> CliResult<()> {
    if spec.k() < 2 {
        return Err(CliError::Input("lemma-m needs a cone with at least two generators".into()));
    }
    let rep = spec.verify_lemma_m().map_err(invariant("lemma-m"))?;
    r.value("m1", rep.m1);
    r.check("weights/first-generator", "n <= m_1 <= m and e_inf sits at level 2n - m_1 of W(N_1)", &rep.verdict);
    Ok(())
}

fn psh(spec: &OrbitSpec, opts: &Options, rng: &mut ChaCha8Rng, r: &mut Report) -> CliResult<()> {
    let k = spec.k();
    let dirs: Vec<usize> = if opts.dirs.is_empty() { (k..spec.nvars).collect() } else { opts.dirs.clone() };
    if dirs.is_empty() {
        return Err(CliError::Input("psh needs at least one stratum direction".into()));
    }
    let data = spec.numeric();
    let set: Vec<usize> = (0..k).collect();
    let mut cfg = ProbeConfig::standard(1, 1);
    cfg.tol = opts.tol.unwrap_or(1e-6);
    let mut lowest = f64::INFINITY;
    let mut verdict = Verdict::Pass;
    for _ in 0..opts.samples.unwrap_or(25) {
        let mut p = sample(rng, k, spec.nvars, 0.15);
        p.iter_mut().take(k).for_each(|x| *x = Complex64::new(0.0, 0.0));
        let rep = levi_probe(&data, &set, &p, &dirs, &cfg).map_err(invariant("levi probe"))?;
        lowest = lowest.min(rep.min_eigenvalue);
        if verdict.is_pass() {
            verdict = rep.verdict;
        }
    }
    r.value("levi_min_eigenvalue", lowest);
    r.check("psh/levi", "the Levi form of -log h is positive semidefinite on the stratum", &verdict);
    Ok(())
}

pub fn probe(fx: &Fixture, which: Probe, opts: &Options) -> CliResult<Outcome> {
    let mut r = Report::new("probe", fx.name());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut text = String::new();
    match which {
        Probe::FInfinity => {
            let mixed = fx.mixed()?;
            let n = match opts.generator {
                None => fx.cone().interior(),
                Some(j) => fx
                    .cone()
                    .generators()
                    .get(j)
                    .cloned()
                    .ok_or_else(|| CliError::Input(format!("--generator: no generator {j}")))?,
            };
            let ys = if opts.y.is_empty() { vec![1e1, 1e2, 1e3, 1e4] } else { opts.y.clone() };
            let rep = f_infinity_probe(&mixed, &n, &ys, opts.tol.unwrap_or(1e-6)).map_err(|e| CliError::Input(e.to_string()))?;
            for (y, d) in &rep.distances {
                text.push_str(&format!("y = {y:e}  distance {d:.6e}\n"));
            }
            text.push_str(&format!("extrapolated {:.6e}\n", rep.extrapolated));
            r.value("distances", &rep.distances);
            r.value("extrapolated", rep.extrapolated);
            r.check("probe/f-infinity", "exp(iyN) F approaches the limit filtration", &rep.verdict);
        }
        Probe::RadialLimit | Probe::TermVanishing | Probe::Levi => {
            let spec = fx.orbit()?;
            let data = spec.numeric();
            let k = data.k;
            let base = base_point(&data, opts, &mut rng)?;
            let set: Vec<usize> = if opts.set.is_empty() { (0..k).collect() } else { opts.set.clone() };
            match which {
                Probe::RadialLimit => {
                    let rep = radial_limit(&data, &set, &base, &limit_config(set.len(), opts))
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    for (r_, a, v) in &rep.observed {
                        text.push_str(&format!("r = {r_:e}  angle {a}  h~ = {v:.12e}\n"));
                    }
                    text.push_str(&format!("limit {:.12e}  max deviation {:.3e}\n", rep.limit, rep.max_deviation));
                    r.value("limit", rep.limit);
                    r.value("max_deviation", rep.max_deviation);
                    r.value("angle_spread", rep.angle_spread);
                    r.check(format!("limit/radial/{set:?}"), "h~ tends to the stratum value", &rep.verdict);
                }
                Probe::TermVanishing => {
                    if opts.exponents.len() != k {
                        return Err(CliError::Input(format!("--exponents: expected {k} values")));
                    }
                    let rep = term_vanishing(&data, &opts.exponents, &base, &limit_config(k, opts))
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    text.push_str(&format!("max |term| {:.3e}\n", rep.max_deviation));
                    r.value("max_deviation", rep.max_deviation);
                    r.check(format!("limit/term/{:?}", opts.exponents), "the term tends to zero", &rep.verdict);
                }
                _ => {
                    let dirs: Vec<usize> = if opts.dirs.is_empty() { (k..data.nvars).collect() } else { opts.dirs.clone() };
                    let mut p = base;
                    set.iter().for_each(|&j| p[j] = Complex64::new(0.0, 0.0));
                    let mut cfg = ProbeConfig::standard(1, 1);
                    cfg.tol = opts.tol.unwrap_or(1e-6);
                    let rep = levi_probe(&data, &set, &p, &dirs, &cfg).map_err(|e| CliError::Input(e.to_string()))?;
                    text.push_str(&format!("value {:.12e}\neigenvalues {:?}\n", rep.value, rep.eigenvalues));
                    r.value("eigenvalues", &rep.eigenvalues);
                    r.value("min_eigenvalue", rep.min_eigenvalue);
                    r.check("psh/levi", "the Levi form of -log h is positive semidefinite", &rep.verdict);
                }
            }
        }
    }
    Ok(Outcome { text, report: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodge_core::exactlin::{gi, gr};

    #[test]
    fn gauss_formatting() {
        assert_eq!(fmt_gauss(&gr(-1, 2)), "-1/2");
        assert_eq!(fmt_gauss(&gi(0, -1)), "-1i");
        assert_eq!(fmt_gauss(&(gi(1, -1) * gr(1, 3))), "1/3-1/3i");
        assert_eq!(fmt_gauss(&gi(2, 1)), "2+1i");
    }

    #[test]
    fn multi_indices_cover_degree_two() {
        assert_eq!(multi_indices(1), vec![vec![1], vec![2]]);
        assert_eq!(multi_indices(2).len(), 5);
    }
}
