//! Fuzzy and neutrosophic cognitive maps, relational maps, and the analyses around them.
//!
//! Values are exact: `a + bI` with rational parts and `I * I = I`. Inference runs in
//! the three-valued state space `{0, 1, I}`.

pub mod data_analysis;
pub mod document;
pub mod error;
pub mod exec;
pub mod graph_metrics;
pub mod map_core;
pub mod neutro;
pub mod relational;
mod serde_util;

pub use error::{Error, Result};
pub use exec::Execution;
pub use map_core::{CognitiveMap, ConceptCatalog, EngineConfig, HiddenPattern, Outcome, StateVector};
pub use neutro::{NeutroMatrix, NeutroValue, Rational, StateSymbol};
pub use relational::RelationalMap;
