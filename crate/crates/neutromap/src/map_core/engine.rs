use std::collections::{BTreeSet, HashMap};

use num::Zero;

use super::{CognitiveMap, StateVector};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::neutro::{NeutroMatrix, NeutroValue, Rational, StateSymbol};

/// Upper bound applied to the default `2 * 3^n` iteration budget.
pub const DEFAULT_ITERATION_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clamp {
    /// Every ON position of the seed stays ON.
    Seed,
    Indices(BTreeSet<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub clamp: Clamp,
    pub threshold: Rational,
    /// Overrides `threshold` per concept when present.
    pub per_concept: Option<Vec<Rational>>,
    /// `None` means `2 * 3^n`, capped at `iteration_cap`.
    pub max_iterations: Option<usize>,
    pub iteration_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            clamp: Clamp::Seed,
            threshold: Rational::zero(),
            per_concept: None,
            max_iterations: None,
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

impl EngineConfig {
    pub fn clamped<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        EngineConfig {
            clamp: Clamp::Indices(indices.into_iter().collect()),
            ..EngineConfig::default()
        }
    }

    pub fn unclamped() -> Self {
        EngineConfig::clamped([])
    }

    pub fn with_threshold(mut self, k: Rational) -> Self {
        self.threshold = k;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = Some(n);
        self
    }

    pub fn budget(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or_else(|| {
            let mut b: usize = 2;
            for _ in 0..n {
                b = b.saturating_mul(3);
                if b >= self.iteration_cap {
                    return self.iteration_cap;
                }
            }
            b.min(self.iteration_cap)
        })
    }

    pub(crate) fn resolve(&self, seed: &StateVector, n: usize) -> Result<Resolved> {
        if seed.len() != n {
            return Err(Error::StateLength {
                expected: n,
                found: seed.len(),
            });
        }
        let mut clamp = vec![false; n];
        match &self.clamp {
            Clamp::Seed => {
                for i in seed.on_indices() {
                    clamp[i] = true;
                }
            }
            Clamp::Indices(set) => {
                for &i in set {
                    if i >= n {
                        return Err(Error::ClampOutOfRange { index: i, len: n });
                    }
                    clamp[i] = true;
                }
            }
        }
        let thresholds = match &self.per_concept {
            Some(t) if t.len() != n => {
                return Err(Error::StateLength {
                    expected: n,
                    found: t.len(),
                })
            }
            Some(t) => t.clone(),
            None => vec![self.threshold.clone(); n],
        };
        let max_iterations = self.budget(n);
        if max_iterations == 0 {
            return Err(Error::ZeroIterations);
        }
        Ok(Resolved {
            clamp,
            thresholds,
            max_iterations,
        })
    }
}

pub(crate) struct Resolved {
    pub clamp: Vec<bool>,
    pub thresholds: Vec<Rational>,
    pub max_iterations: usize,
}

/// One iteration: the raw product and the thresholded, clamped state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub product: Vec<NeutroValue>,
    pub state: StateVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    FixedPoint(StateVector),
    /// Rotated so the smallest state comes first.
    LimitCycle(Vec<StateVector>),
    NonConvergent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenPattern {
    pub outcome: Outcome,
    /// Post-step records; the seed itself is not included.
    pub trace: Vec<StepRecord>,
}

impl HiddenPattern {
    pub fn fixed_point(&self) -> Option<&StateVector> {
        match &self.outcome {
            Outcome::FixedPoint(s) => Some(s),
            _ => None,
        }
    }

    pub fn limit_cycle(&self) -> Option<&[StateVector]> {
        match &self.outcome {
            Outcome::LimitCycle(c) => Some(c),
            _ => None,
        }
    }

    pub fn converged(&self) -> bool {
        self.outcome != Outcome::NonConvergent
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector> {
        self.trace.iter().map(|r| &r.state)
    }

    /// States visited once the pattern settled: the fixed point or the cycle.
    pub fn attractor(&self) -> Vec<StateVector> {
        match &self.outcome {
            Outcome::FixedPoint(s) => vec![s.clone()],
            Outcome::LimitCycle(c) => c.clone(),
            Outcome::NonConvergent => Vec::new(),
        }
    }
}

pub(crate) fn apply(weights: &NeutroMatrix, s: &StateVector, r: &Resolved) -> StepRecord {
    let product = multiply_state(weights, s);
    let state = threshold_and_clamp(&product, r);
    StepRecord { product, state }
}

/// `s * W` with ON = 1, OFF = 0, IND = I; avoids general multiplication.
pub(crate) fn multiply_state(weights: &NeutroMatrix, s: &StateVector) -> Vec<NeutroValue> {
    let mut out = vec![NeutroValue::zero(); weights.cols()];
    for (i, sym) in s.symbols().iter().enumerate() {
        match sym {
            StateSymbol::Off => {}
            StateSymbol::On => {
                for (o, w) in out.iter_mut().zip(weights.row(i)) {
                    if !w.is_zero() {
                        *o += w;
                    }
                }
            }
            StateSymbol::Ind => {
                for (o, w) in out.iter_mut().zip(weights.row(i)) {
                    if !w.is_zero() {
                        *o += &NeutroValue::new(Rational::zero(), w.real() + w.indet());
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn threshold_and_clamp(product: &[NeutroValue], r: &Resolved) -> StateVector {
    StateVector::new(
        product
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if r.clamp[j] {
                    StateSymbol::On
                } else {
                    v.threshold_at(&r.thresholds[j])
                }
            })
            .collect(),
    )
}

/// One multiply-threshold-clamp step. `Clamp::Seed` clamps the ON positions of `s`.
pub fn step(s: &StateVector, m: &CognitiveMap, cfg: &EngineConfig) -> Result<StateVector> {
    step_detailed(s, m, cfg).map(|r| r.state)
}

pub fn step_detailed(s: &StateVector, m: &CognitiveMap, cfg: &EngineConfig) -> Result<StepRecord> {
    let r = cfg.resolve(s, m.len())?;
    Ok(apply(m.weights(), s, &r))
}

pub(crate) fn canonical_cycle(mut cycle: Vec<StateVector>) -> Vec<StateVector> {
    if let Some(start) = (0..cycle.len()).min_by(|&a, &b| cycle[a].cmp(&cycle[b])) {
        cycle.rotate_left(start);
    }
    cycle
}

/// Iterates from `seed` until some state recurs.
pub fn infer(seed: &StateVector, m: &CognitiveMap, cfg: &EngineConfig) -> Result<HiddenPattern> {
    if !seed.is_crisp() {
        return Err(Error::IndeterminateSeed);
    }
    let r = cfg.resolve(seed, m.len())?;
    let mut history = vec![seed.clone()];
    let mut seen: HashMap<StateVector, usize> = HashMap::from([(seed.clone(), 0)]);
    let mut trace = Vec::new();
    for _ in 0..r.max_iterations {
        let rec = apply(m.weights(), history.last().unwrap(), &r);
        let next = rec.state.clone();
        trace.push(rec);
        if let Some(&k) = seen.get(&next) {
            let outcome = if k + 1 == history.len() {
                Outcome::FixedPoint(next)
            } else {
                Outcome::LimitCycle(canonical_cycle(history[k..].to_vec()))
            };
            return Ok(HiddenPattern { outcome, trace });
        }
        seen.insert(next.clone(), history.len());
        history.push(next);
    }
    Ok(HiddenPattern {
        outcome: Outcome::NonConvergent,
        trace,
    })
}

/// Independent inferences over one map, fanned out according to `exec`.
pub fn infer_many(
    seeds: &[StateVector],
    m: &CognitiveMap,
    cfg: &EngineConfig,
    exec: Execution,
) -> Vec<Result<HiddenPattern>> {
    exec.map(seeds, |s| infer(s, m, cfg))
}

/// Hidden pattern of every single-concept seed, in catalog order.
pub fn infer_singletons(m: &CognitiveMap, cfg: &EngineConfig, exec: Execution) -> Vec<Result<HiddenPattern>> {
    let n = m.len();
    exec.map_range(n, |i| infer(&StateVector::unit(n, &[i]), m, cfg))
}
