//! Built-in example structures, shipped as spec files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::manifold::ManifoldSpec;
use crate::specfile::{ParseError, SpecTemplate};
use crate::Rational;

pub struct CatalogEntry {
    pub id: &'static str,
    pub text: &'static str,
    /// Pinned JSON report at default parameters, for regression.
    pub expected: Option<&'static str>,
}

macro_rules! entry {
    ($id:literal) => {
        CatalogEntry {
            id: $id,
            text: include_str!(concat!("../catalog/", $id, ".spec")),
            expected: Some(include_str!(concat!("../catalog/", $id, ".expected.json"))),
        }
    };
}

pub const ENTRIES: &[CatalogEntry] = &[
    entry!("t4-kahler"),
    entry!("kodaira-thurston-ak"),
    entry!("kodaira-thurston-ah"),
    entry!("filiform-ak"),
    entry!("hyperelliptic-kahler"),
    entry!("solvable-jt"),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id '{0}'")]
    Unknown(String),
    #[error("catalog entry '{id}': {source}")]
    Parse { id: String, source: ParseError },
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

pub fn ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.id).collect()
}

pub fn entry(id: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.id == id)
}

pub fn template(id: &str) -> Result<SpecTemplate, CatalogError> {
    let e = entry(id).ok_or_else(|| CatalogError::Unknown(id.into()))?;
    SpecTemplate::parse(e.text).map_err(|source| CatalogError::Parse { id: id.into(), source })
}

pub fn instantiate(id: &str, params: &[(String, Rational)]) -> Result<ManifoldSpec, CatalogError> {
    let overrides: BTreeMap<String, Rational> = params.iter().cloned().collect();
    template(id)?
        .instantiate(&overrides)
        .map_err(|source| CatalogError::Parse { id: id.into(), source })
}

/// Writes every entry as `<dir>/<id>.spec`; returns the written paths.
pub fn export(dir: &Path) -> Result<Vec<std::path::PathBuf>, CatalogError> {
    let io = |path: &Path, e: std::io::Error| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    for e in ENTRIES {
        let path = dir.join(format!("{}.spec", e.id));
        std::fs::write(&path, e.text).map_err(|err| io(&path, err))?;
        written.push(path);
    }
    Ok(written)
}
