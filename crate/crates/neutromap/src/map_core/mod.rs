//! Square cognitive maps, their validation and combination.

mod engine;
mod lags;
mod tam;

use std::collections::HashMap;
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::neutro::{EdgeSymbol, NeutroMatrix, NeutroValue, Rational, StateSymbol};

pub use engine::{
    infer, infer_many, infer_singletons, step, step_detailed, Clamp, EngineConfig, HiddenPattern, Outcome, StepRecord,
    DEFAULT_ITERATION_CAP,
};
pub use lags::{expand_time_lags, LagOperator};
pub use tam::tam_encode;

pub(crate) mod engine_internals {
    pub(crate) use super::engine::{apply, canonical_cycle, Resolved};
}

/// Ordered, duplicate-free list of concept names; position is the matrix index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptCatalog {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl ConceptCatalog {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut catalog = ConceptCatalog {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            catalog.push(name.into())?;
        }
        Ok(catalog)
    }

    /// `C1, C2, ..., Cn` style names.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        ConceptCatalog::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("generated names are unique")
    }

    pub(crate) fn push(&mut self, name: String) -> Result<usize> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateConcept(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Same names, possibly in another order.
    pub fn same_set(&self, other: &ConceptCatalog) -> bool {
        self.len() == other.len() && self.names.iter().all(|n| other.contains(n))
    }

    /// Position in `universe` of every name of `self`.
    pub fn positions_in(&self, universe: &ConceptCatalog) -> Result<Vec<usize>> {
        self.names.iter().map(|n| universe.require(n)).collect()
    }

    /// Names in first-appearance order across all catalogs.
    pub fn union<'a>(catalogs: impl IntoIterator<Item = &'a ConceptCatalog>) -> ConceptCatalog {
        let mut out = ConceptCatalog::new(Vec::<String>::new()).unwrap();
        for c in catalogs {
            for n in &c.names {
                if !out.contains(n) {
                    out.push(n.clone()).unwrap();
                }
            }
        }
        out
    }

    /// State with the named concepts ON and everything else OFF.
    pub fn seed<S: AsRef<str>>(&self, on: &[S]) -> Result<StateVector> {
        let mut s = vec![StateSymbol::Off; self.len()];
        for name in on {
            s[self.require(name.as_ref())?] = StateSymbol::On;
        }
        Ok(StateVector::new(s))
    }
}

/// Per-concept symbols aligned with a catalog. Ordered lexicographically with OFF < ON < IND.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector(Vec<StateSymbol>);

impl StateVector {
    pub fn new(symbols: Vec<StateSymbol>) -> Self {
        StateVector(symbols)
    }

    pub fn off(n: usize) -> Self {
        StateVector(vec![StateSymbol::Off; n])
    }

    /// ON exactly at `on`.
    pub fn unit(n: usize, on: &[usize]) -> Self {
        let mut s = StateVector::off(n);
        for &i in on {
            s.0[i] = StateSymbol::On;
        }
        s
    }

    /// Whitespace, comma or tab separated symbols: `"1 0 I"`.
    pub fn parse(text: &str) -> Result<Self> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(StateVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[StateSymbol] {
        &self.0
    }

    pub fn get(&self, i: usize) -> StateSymbol {
        self.0[i]
    }

    pub fn is_crisp(&self) -> bool {
        !self.0.contains(&StateSymbol::Ind)
    }

    pub fn on_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == StateSymbol::On).collect()
    }

    pub fn values(&self) -> Vec<NeutroValue> {
        self.0.iter().map(|s| s.value()).collect()
    }

    pub fn project(&self, indices: &[usize]) -> StateVector {
        StateVector(indices.iter().map(|&i| self.0[i]).collect())
    }

    pub fn tab_separated(&self) -> String {
        self.join("\t")
    }

    fn join(&self, sep: &str) -> String {
        self.0.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join(" "))
    }
}

/// Named square map; crisp (an FCM) when no weight carries `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CognitiveMap {
    catalog: ConceptCatalog,
    weights: NeutroMatrix,
}

impl CognitiveMap {
    pub fn new(catalog: ConceptCatalog, weights: NeutroMatrix) -> Result<Self> {
        let n = catalog.len();
        if weights.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                op: "cognitive map",
                left_rows: n,
                left_cols: n,
                right_rows: weights.rows(),
                right_cols: weights.cols(),
            });
        }
        Ok(CognitiveMap { catalog, weights })
    }

    pub fn from_int_rows<S: Into<String>, R: AsRef<[i64]>>(names: Vec<S>, rows: &[R]) -> Result<Self> {
        CognitiveMap::new(ConceptCatalog::new(names)?, NeutroMatrix::from_int_rows(rows)?)
    }

    pub fn catalog(&self) -> &ConceptCatalog {
        &self.catalog
    }

    pub fn weights(&self) -> &NeutroMatrix {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.catalog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.catalog.is_empty()
    }

    pub fn weight(&self, from: usize, to: usize) -> &NeutroValue {
        self.weights.get(from, to)
    }

    pub fn is_crisp(&self) -> bool {
        self.weights.is_crisp()
    }

    /// Nonzero arcs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &NeutroValue)> + '_ {
        let n = self.len();
        (0..n * n)
            .map(move |k| (k / n, k % n, self.weights.get(k / n, k % n)))
            .filter(|(_, _, w)| !w.is_zero())
    }

    pub fn successors(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| !self.weight(i, j).is_zero()).collect()
    }

    /// Sub-map on `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> CognitiveMap {
        let catalog = ConceptCatalog::new(keep.iter().map(|&i| self.catalog.name(i).to_string()))
            .expect("subset of a valid catalog");
        let weights = NeutroMatrix::from_fn(keep.len(), keep.len(), |a, b| self.weight(keep[a], keep[b]).clone());
        CognitiveMap { catalog, weights }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SimpleMode {
    /// Only the zero-diagonal rule.
    #[default]
    Any,
    /// Entries in {-1, 0, 1}.
    Fcm,
    /// Entries in {-1, 0, 1, I}.
    Ncm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonZeroDiagonal {
        concept: String,
        value: NeutroValue,
    },
    NonSimpleEntry {
        from: String,
        to: String,
        value: NeutroValue,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonZeroDiagonal { concept, value } => {
                write!(f, "diagonal entry of {concept:?} is {value}, expected 0")
            }
            Violation::NonSimpleEntry { from, to, value } => {
                write!(f, "edge {from:?} -> {to:?} has non-simple weight {value}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_map(m: &CognitiveMap, mode: SimpleMode) -> ValidationReport {
    let mut violations = Vec::new();
    let c = m.catalog();
    for i in 0..m.len() {
        let d = m.weight(i, i);
        if !d.is_zero() {
            violations.push(Violation::NonZeroDiagonal {
                concept: c.name(i).to_string(),
                value: d.clone(),
            });
        }
    }
    if mode != SimpleMode::Any {
        for (i, j, w) in m.edges() {
            let ok = match EdgeSymbol::of(w) {
                Some(EdgeSymbol::Indeterminate) => mode == SimpleMode::Ncm,
                Some(_) => true,
                None => false,
            };
            if !ok {
                violations.push(Violation::NonSimpleEntry {
                    from: c.name(i).to_string(),
                    to: c.name(j).to_string(),
                    value: w.clone(),
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Re-indexes `m` onto `universe`; concepts the map lacks get zero rows and columns.
pub fn augment(m: &CognitiveMap, universe: &ConceptCatalog) -> Result<CognitiveMap> {
    let pos = m.catalog().positions_in(universe)?;
    let mut w = NeutroMatrix::zeros(universe.len(), universe.len());
    for (i, j, v) in m.edges() {
        w.set(pos[i], pos[j], v.clone());
    }
    CognitiveMap::new(universe.clone(), w)
}

/// Weighted entrywise sum of maps augmented onto a shared catalog.
///
/// Without an explicit `universe` the catalogs are merged in first-appearance order.
pub fn combine(
    maps: &[CognitiveMap],
    weights: Option<&[Rational]>,
    universe: Option<&ConceptCatalog>,
) -> Result<CognitiveMap> {
    if maps.is_empty() {
        return Err(Error::Empty("no maps to combine"));
    }
    check_weights(weights, maps.len())?;
    let universe = match universe {
        Some(u) => u.clone(),
        None => ConceptCatalog::union(maps.iter().map(CognitiveMap::catalog)),
    };
    let mut total = NeutroMatrix::zeros(universe.len(), universe.len());
    for (k, m) in maps.iter().enumerate() {
        let a = augment(m, &universe)?;
        let scaled = match weights {
            Some(w) => a.weights().map(|v| v.scale(&w[k])),
            None => a.weights().clone(),
        };
        total = total.add(&scaled)?;
    }
    CognitiveMap::new(universe, total)
}

pub(crate) fn check_weights(weights: Option<&[Rational]>, items: usize) -> Result<()> {
    if let Some(w) = weights {
        if w.len() != items {
            return Err(Error::WeightCount {
                weights: w.len(),
                items,
            });
        }
        if let Some(neg) = w.iter().find(|x| *x < &Rational::zero()) {
            return Err(Error::NegativeWeight(neg.to_string()));
        }
    }
    Ok(())
}

/// Replaces every `I` coefficient by 0.
pub fn degrade_to_fcm(m: &CognitiveMap) -> CognitiveMap {
    CognitiveMap {
        catalog: m.catalog.clone(),
        weights: m.weights.map(NeutroValue::degrade),
    }
}
