//! Loaders for the worked-example fixtures under `fixtures/` at the workspace root.

use std::path::PathBuf;

use neutromap::document::MapDocument;
use neutromap::{CognitiveMap, RelationalMap, StateVector};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn document(name: &str) -> MapDocument {
    let text = std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    MapDocument::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Panics with the file name when the fixture is missing or malformed.
pub fn cognitive(name: &str) -> CognitiveMap {
    document(name).into_cognitive().unwrap()
}

pub fn relational(name: &str) -> RelationalMap {
    document(name).into_relational().unwrap()
}

pub fn sv(text: &str) -> StateVector {
    StateVector::parse(text).unwrap()
}
