use std::path::PathBuf;

use aptkit::barcode::BarcodeError;
use aptkit::cutoff::CutoffError;
use aptkit::graded::GradedError;
use aptkit::interleaving::InterleavingError;
use aptkit::linalg::FieldError;
use aptkit::rational::ParseError;
use aptkit::toric::ToricError;
use aptkit::GeometryError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
    #[error("unknown cone id {0:?}")]
    UnknownCone(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Barcode(#[from] BarcodeError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Interleaving(#[from] InterleavingError),
    #[error(transparent)]
    Cutoff(#[from] CutoffError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// `FooBar { .. }` / `FooBar(..)` → `foo_bar`.
fn snake_variant(debug: &str) -> String {
    let name: String = debug
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect();
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Machine-readable `module.kind` code.
    pub fn code(&self) -> String {
        let inner = |module: &str, e: &dyn std::fmt::Debug| {
            format!("{module}.{}", snake_variant(&format!("{e:?}")))
        };
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Io { .. } => "io".into(),
            CliError::Json(_) => "json".into(),
            CliError::UnknownCatalog(_) => "catalog.unknown".into(),
            CliError::UnknownCone(_) => "geometry.unknown_cone".into(),
            CliError::Parse(e) => inner("parse", e),
            CliError::Field(e) => inner("field", e),
            CliError::Geometry(e) => inner("geometry", e),
            CliError::Barcode(e) => inner("barcode", e),
            CliError::Graded(e) => inner("graded", e),
            CliError::Interleaving(e) => inner("interleaving", e),
            CliError::Cutoff(e) => inner("cutoff", e),
            CliError::Toric(e) => inner("toric", e),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code(), "message": self.to_string() } })
    }
}
