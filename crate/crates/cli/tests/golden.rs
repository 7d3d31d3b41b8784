//! Bundled fixtures match what the catalog produces. Set `HODGE_REGENERATE=1`
//! to rewrite them.

use std::path::PathBuf;

use hodge_cli::fixture::catalog_fixtures;
use hodge_cli::FixtureFile;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn bundled_fixtures_are_current() {
    let regenerate = std::env::var_os("HODGE_REGENERATE").is_some();
    let mut stale = Vec::new();
    for file in catalog_fixtures() {
        let path = fixtures_dir().join(format!("{}.json", file.name));
        let fresh = file.render();
        if regenerate {
            std::fs::write(&path, &fresh).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(fresh.as_str()) {
            stale.push(file.name.clone());
        }
    }
    assert!(stale.is_empty(), "stale fixtures (rerun with HODGE_REGENERATE=1): {stale:?}");
}

#[test]
fn fixtures_round_trip() {
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let file = FixtureFile::parse(&text).unwrap();
        assert_eq!(file.render(), text, "{}", path.display());
        file.load().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
