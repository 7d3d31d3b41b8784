//! JSON fixture files: exact entries as `"num/den"` strings, complex ones as `[re, im]`.

use std::collections::BTreeMap;

use hodge_core::catalog::OrbitFixture;
use hodge_core::exactlin::{format_rational, gauss, is_real, parse_rational, GaussScalar, Mat, Scalar, Subspace};
use hodge_core::filtrations::{DecreasingFiltration, IncreasingFiltration};
use hodge_core::induced::{InducedStructure, PureHodgeData};
use hodge_core::mhs::{MixedHodge, NilpotentCone};
use hodge_core::orbit::{MatPoly, OrbitSpec};
use hodge_core::{catalog, HodgeError};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const FIXTURE_VERSION: &str = "hodge-fixture/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(String),
    Complex([String; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub index: i64,
    pub span: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coefficient: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaMap {
    pub set: Vec<usize>,
    pub terms: Vec<Term>,
}

/// Coefficient maps `f_I`, as matrices on the induced space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaTable {
    pub nvars: usize,
    pub maps: Vec<ZetaMap>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerSpec {
    pub m: i64,
    pub e0: usize,
    pub einf: usize,
    pub ed: usize,
    pub lambda: Entry,
}

/// On-disk fixture. Without `w` it describes a pure structure with a cone; with
/// `w` it is a mixed structure given directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub version: String,
    pub name: String,
    pub dim: usize,
    pub weight: i64,
    pub q: Vec<Vec<Entry>>,
    pub f: Vec<Step>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Step>>,
    pub cone: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markers: Option<MarkerSpec>,
}

pub fn entry(z: &GaussScalar) -> Entry {
    if is_real(z) {
        Entry::Real(format_rational(&z.re))
    } else {
        Entry::Complex([format_rational(&z.re), format_rational(&z.im)])
    }
}

fn scalar(e: &Entry, at: &str) -> CliResult<GaussScalar> {
    let parse = |s: &str| parse_rational(s).map_err(|err| CliError::Input(format!("{at}: {err}")));
    match e {
        Entry::Real(r) => Ok(gauss(parse(r)?, GaussScalar::zero().re)),
        Entry::Complex([re, im]) => Ok(Complex::new(parse(re)?, parse(im)?)),
    }
}

fn vector(v: &[Entry], dim: usize, at: &str) -> CliResult<Vec<GaussScalar>> {
    if v.len() != dim {
        return Err(CliError::Input(format!("{at}: expected {dim} entries, found {}", v.len())));
    }
    v.iter().enumerate().map(|(i, e)| scalar(e, &format!("{at}[{i}]"))).collect()
}

fn matrix(rows: &[Vec<Entry>], dim: usize, at: &str) -> CliResult<Mat> {
    if rows.len() != dim {
        return Err(CliError::Input(format!("{at}: expected {dim} rows, found {}", rows.len())));
    }
    let rows = rows.iter().enumerate().map(|(i, r)| vector(r, dim, &format!("{at}[{i}]"))).collect::<CliResult<Vec<_>>>()?;
    Ok(Mat::from_rows(&rows))
}

fn steps(list: &[Step], dim: usize, at: &str) -> CliResult<Vec<(i64, Subspace)>> {
    list.iter()
        .enumerate()
        .map(|(i, s)| {
            let vs = s
                .span
                .iter()
                .enumerate()
                .map(|(j, v)| vector(v, dim, &format!("{at}[{i}].span[{j}]")))
                .collect::<CliResult<Vec<_>>>()?;
            Ok((s.index, Subspace::span(dim, &vs)))
        })
        .collect()
}

pub fn rows(m: &Mat) -> Vec<Vec<Entry>> {
    m.row_vectors().iter().map(|r| r.iter().map(entry).collect()).collect()
}

fn span_of(s: &Subspace) -> Vec<Vec<Entry>> {
    s.vectors().iter().map(|v| v.iter().map(entry).collect()).collect()
}

fn invalid(at: &str, e: HodgeError) -> CliError {
    match e {
        HodgeError::DimensionMismatch { .. } | HodgeError::InvalidInput(_) => CliError::Input(format!("{at}: {e}")),
        other => CliError::Invariant(format!("{at}: {other}")),
    }
}

/// Parsed structure behind a fixture.
#[derive(Debug, Clone)]
pub enum Structure {
    Pure(PureHodgeData),
    Mixed { mixed: MixedHodge, cone: NilpotentCone },
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub file: FixtureFile,
    pub structure: Structure,
}

impl Fixture {
    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn pure(&self) -> CliResult<&PureHodgeData> {
        match &self.structure {
            Structure::Pure(v) => Ok(v),
            Structure::Mixed { .. } => {
                Err(CliError::Input(format!("{}: this command needs a pure fixture (no `w` field)", self.file.name)))
            }
        }
    }

    pub fn mixed(&self) -> CliResult<MixedHodge> {
        match &self.structure {
            Structure::Pure(v) => v.mixed().map_err(|e| invalid("mixed structure", e)),
            Structure::Mixed { mixed, .. } => Ok(mixed.clone()),
        }
    }

    pub fn cone(&self) -> &NilpotentCone {
        match &self.structure {
            Structure::Pure(v) => &v.cone,
            Structure::Mixed { cone, .. } => cone,
        }
    }

    pub fn induced(&self) -> CliResult<InducedStructure> {
        catalog::induced(self.pure()?).map_err(|e| invalid("induced structure", e))
    }

    /// Orbit data from the `zeta` table, with marker overrides applied.
    pub fn orbit(&self) -> CliResult<OrbitSpec> {
        let table = self
            .file
            .zeta
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("{}: no `zeta` table", self.file.name)))?;
        let h = self.induced()?;
        let d = h.dim();
        let mut zeta = BTreeMap::new();
        for (i, map) in table.maps.iter().enumerate() {
            let mut terms = Vec::new();
            for (j, t) in map.terms.iter().enumerate() {
                let at = format!("zeta.maps[{i}].terms[{j}]");
                if t.exponents.len() != table.nvars {
                    return Err(CliError::Input(format!("{at}.exponents: expected {} entries", table.nvars)));
                }
                terms.push((t.exponents.clone(), matrix(&t.coefficient, d, &format!("{at}.coefficient"))?));
            }
            if zeta.insert(map.set.clone(), MatPoly { nvars: table.nvars, terms }).is_some() {
                return Err(CliError::Input(format!("zeta.maps[{i}]: repeated set {:?}", map.set)));
            }
        }
        let mut spec = OrbitSpec::new(h, table.nvars, zeta).map_err(|e| CliError::Invariant(format!("zeta: {e}")))?;
        if let Some(mk) = &self.file.markers {
            for (field, idx) in [("e0", mk.e0), ("einf", mk.einf), ("ed", mk.ed)] {
                if idx >= d {
                    return Err(CliError::Input(format!("markers.{field}: index {idx} out of range for dimension {d}")));
                }
            }
            spec.markers.m = mk.m;
            spec.markers.e0_index = mk.e0;
            spec.markers.einf_index = mk.einf;
            spec.markers.ed_index = mk.ed;
            spec.markers.lambda = scalar(&mk.lambda, "markers.lambda")?;
        }
        Ok(spec)
    }
}

impl FixtureFile {
    pub fn parse(text: &str) -> CliResult<FixtureFile> {
        let file: FixtureFile = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if file.version != FIXTURE_VERSION {
            return Err(CliError::Input(format!("version: expected {FIXTURE_VERSION:?}, found {:?}", file.version)));
        }
        Ok(file)
    }

    pub fn load(&self) -> CliResult<Fixture> {
        let d = self.dim;
        let q = matrix(&self.q, d, "q")?;
        let f = DecreasingFiltration::new(d, steps(&self.f, d, "f")?).map_err(|e| invalid("f", e))?;
        let gens = self
            .cone
            .iter()
            .enumerate()
            .map(|(i, n)| matrix(n, d, &format!("cone[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        let cone = NilpotentCone::new(gens, &q).map_err(|e| invalid("cone", e))?;
        let structure = match &self.w {
            None => Structure::Pure(PureHodgeData::new(self.weight, q, f, cone).map_err(|e| invalid("f", e))?),
            Some(w) => {
                let w = IncreasingFiltration::new(d, steps(w, d, "w")?).map_err(|e| invalid("w", e))?;
                let mixed = MixedHodge::new(self.weight, w, f, q).map_err(|e| invalid("q", e))?;
                Structure::Mixed { mixed, cone }
            }
        };
        Ok(Fixture { file: self.clone(), structure })
    }

    pub fn from_pure(name: &str, v: &PureHodgeData) -> FixtureFile {
        FixtureFile {
            version: FIXTURE_VERSION.into(),
            name: name.into(),
            dim: v.dim(),
            weight: v.weight,
            q: rows(&v.q),
            f: v.f.steps().map(|(p, s)| Step { index: p, span: span_of(s) }).collect(),
            w: None,
            cone: v.cone.generators().iter().map(rows).collect(),
            zeta: None,
            markers: None,
        }
    }

    pub fn from_induced(name: &str, h: &InducedStructure) -> FixtureFile {
        FixtureFile {
            version: FIXTURE_VERSION.into(),
            name: name.into(),
            dim: h.dim(),
            weight: h.n,
            q: rows(&h.q),
            f: h.f.steps().map(|(p, s)| Step { index: p, span: span_of(s) }).collect(),
            w: Some(h.w.steps().map(|(l, s)| Step { index: l, span: span_of(s) }).collect()),
            cone: h.cone.generators().iter().map(rows).collect(),
            zeta: None,
            markers: None,
        }
    }

    pub fn from_orbit(fx: &OrbitFixture) -> FixtureFile {
        let mut file = FixtureFile::from_pure(&fx.name, &fx.v);
        file.zeta = Some(ZetaTable {
            nvars: fx.spec.nvars,
            maps: fx
                .spec
                .zeta
                .iter()
                .map(|(set, poly)| ZetaMap {
                    set: set.clone(),
                    terms: poly.terms.iter().map(|(e, c)| Term { exponents: e.clone(), coefficient: rows(c) }).collect(),
                })
                .collect(),
        });
        file
    }

    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("fixture serializes");
        let mut out = String::new();
        render_value(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

fn is_atom(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.len() == 2 && a.iter().all(Value::is_string),
        Value::Object(_) => false,
        _ => true,
    }
}

/// Pretty JSON with rows and vectors kept on one line.
pub fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(is_atom) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_value(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                render_value(x, indent + 1, out);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).unwrap()),
    }
}

/// The bundled fixtures, keyed by file stem.
pub fn catalog_fixtures() -> Vec<FixtureFile> {
    let mut out = vec![FixtureFile::from_pure("a1-0", &catalog::a1(0).expect("weight-one fixture"))];
    for (kind, h) in [(0, 2), (3, 5), (4, 5)] {
        out.push(FixtureFile::from_pure(&format!("a2-{kind}-h{h}"), &catalog::a2(kind, h).expect("weight-two fixture")));
    }
    out.push(FixtureFile::from_pure("weight-three", &catalog::weight_three()));
    for fx in catalog::orbit_fixtures().expect("orbit fixtures") {
        out.push(FixtureFile::from_orbit(&fx));
    }
    let a1 = catalog::induced(&catalog::a1(1).expect("weight-one fixture")).expect("induced");
    out.push(FixtureFile::from_induced("a1-1-induced", &a1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodge_core::exactlin::{gi, gr};

    #[test]
    fn entries_round_trip() {
        for z in [gi(0, 0), gr(-3, 7), gi(2, -5) * gr(1, 3)] {
            assert_eq!(scalar(&entry(&z), "x").unwrap(), z);
        }
        assert!(matches!(scalar(&Entry::Real("1/0".into()), "q[0][0]"), Err(CliError::Input(m)) if m.starts_with("q[0][0]")));
    }

    #[test]
    fn rows_stay_on_one_line() {
        let v: Value = serde_json::json!({"a": [["1", "2", "3"], ["4", ["5", "6"], "7"]], "b": []});
        let mut out = String::new();
        render_value(&v, 0, &mut out);
        assert_eq!(out, "{\n  \"a\": [\n    [\"1\", \"2\", \"3\"],\n    [\"4\", [\"5\", \"6\"], \"7\"]\n  ],\n  \"b\": []\n}");
    }

    #[test]
    fn rejects_other_versions() {
        let text = FixtureFile::from_pure("e", &catalog::elliptic()).render().replace("hodge-fixture/1", "hodge-fixture/0");
        assert!(matches!(FixtureFile::parse(&text), Err(CliError::Input(_))));
    }
}
