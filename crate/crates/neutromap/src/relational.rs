//! Bipartite domain/range maps: dual-space inference, combination and linking.

use std::collections::{HashMap, VecDeque};

use num::Zero;

use crate::error::{Error, Result};
use crate::map_core::engine_internals::{apply, canonical_cycle, Resolved};
use crate::map_core::{
    check_weights, CognitiveMap, ConceptCatalog, EngineConfig, HiddenPattern, Outcome, StateVector, StepRecord,
};
use crate::neutro::{NeutroMatrix, NeutroValue, Rational};

/// One side of a split joint threshold.
type Half = Option<Vec<Rational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalMap {
    domain: ConceptCatalog,
    range: ConceptCatalog,
    weights: NeutroMatrix,
}

impl RelationalMap {
    pub fn new(domain: ConceptCatalog, range: ConceptCatalog, weights: NeutroMatrix) -> Result<Self> {
        if weights.shape() != (domain.len(), range.len()) {
            return Err(Error::DimensionMismatch {
                op: "relational map",
                left_rows: domain.len(),
                left_cols: range.len(),
                right_rows: weights.rows(),
                right_cols: weights.cols(),
            });
        }
        if let Some(n) = domain.names().iter().find(|n| range.contains(n)) {
            return Err(Error::OverlappingSpaces(n.clone()));
        }
        Ok(RelationalMap { domain, range, weights })
    }

    pub fn from_int_rows<S: Into<String>, T: Into<String>, R: AsRef<[i64]>>(
        domain: Vec<S>,
        range: Vec<T>,
        rows: &[R],
    ) -> Result<Self> {
        RelationalMap::new(
            ConceptCatalog::new(domain)?,
            ConceptCatalog::new(range)?,
            NeutroMatrix::from_int_rows(rows)?,
        )
    }

    pub fn domain(&self) -> &ConceptCatalog {
        &self.domain
    }

    pub fn range(&self) -> &ConceptCatalog {
        &self.range
    }

    pub fn weights(&self) -> &NeutroMatrix {
        &self.weights
    }

    pub fn space(&self, s: Space) -> &ConceptCatalog {
        match s {
            Space::Domain => &self.domain,
            Space::Range => &self.range,
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.weights.is_crisp()
    }

    /// Swaps the roles of domain and range.
    pub fn transposed(&self) -> RelationalMap {
        RelationalMap {
            domain: self.range.clone(),
            range: self.domain.clone(),
            weights: self.weights.transpose(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Domain,
    Range,
}

impl Space {
    pub fn other(self) -> Space {
        match self {
            Space::Domain => Space::Range,
            Space::Range => Space::Domain,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Space::Domain => "domain",
            Space::Range => "range",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    DomainToRange,
    RangeToDomain,
}

/// One pass through `E` or `E^T`; `clamp` indexes the target space.
pub fn r_step(
    s: &StateVector,
    m: &RelationalMap,
    direction: Direction,
    clamp: &[usize],
    threshold: &Rational,
) -> Result<StateVector> {
    let (matrix, target) = match direction {
        Direction::DomainToRange => (m.weights.clone(), m.range.len()),
        Direction::RangeToDomain => (m.weights.transpose(), m.domain.len()),
    };
    if s.len() != matrix.rows() {
        return Err(Error::StateLength {
            expected: matrix.rows(),
            found: s.len(),
        });
    }
    let mut flags = vec![false; target];
    for &i in clamp {
        if i >= target {
            return Err(Error::ClampOutOfRange { index: i, len: target });
        }
        flags[i] = true;
    }
    let r = Resolved {
        clamp: flags,
        thresholds: vec![threshold.clone(); target],
        max_iterations: 1,
    };
    Ok(apply(&matrix, s, &r).state)
}

/// Per-space hidden patterns of a relational run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualHiddenPattern {
    pub domain: HiddenPattern,
    pub range: HiddenPattern,
    /// Alternating records, starting in the space opposite the seed.
    pub trace: Vec<(Space, StepRecord)>,
}

impl DualHiddenPattern {
    pub fn pattern(&self, s: Space) -> &HiddenPattern {
        match s {
            Space::Domain => &self.domain,
            Space::Range => &self.range,
        }
    }

    pub fn converged(&self) -> bool {
        self.domain.converged()
    }
}

/// Alternates `E` and `E^T` from a seed in `seed_space` until a seed-space state recurs.
///
/// The clamp in `cfg` applies to the seed space; per-concept thresholds, when given,
/// cover the domain followed by the range.
pub fn r_infer(
    seed: &StateVector,
    seed_space: Space,
    m: &RelationalMap,
    cfg: &EngineConfig,
) -> Result<DualHiddenPattern> {
    if !seed.is_crisp() {
        return Err(Error::IndeterminateSeed);
    }
    let (n_d, n_r) = (m.domain.len(), m.range.len());
    let split = |t: &Option<Vec<Rational>>| -> Result<(Half, Half)> {
        match t {
            None => Ok((None, None)),
            Some(v) if v.len() == n_d + n_r => Ok((Some(v[..n_d].to_vec()), Some(v[n_d..].to_vec()))),
            Some(v) => Err(Error::StateLength {
                expected: n_d + n_r,
                found: v.len(),
            }),
        }
    };
    let (t_d, t_r) = split(&cfg.per_concept)?;
    let (seed_t, other_t, seed_len, other_len, fwd) = match seed_space {
        Space::Domain => (t_d, t_r, n_d, n_r, m.weights.clone()),
        Space::Range => (t_r, t_d, n_r, n_d, m.weights.transpose()),
    };
    let back = fwd.transpose();
    let seed_cfg = EngineConfig {
        per_concept: seed_t,
        ..cfg.clone()
    };
    let seed_r = seed_cfg.resolve(seed, seed_len)?;
    let other_r = EngineConfig {
        clamp: crate::map_core::Clamp::Indices(Default::default()),
        per_concept: other_t,
        ..cfg.clone()
    }
    .resolve(&StateVector::off(other_len), other_len)?;

    let other_space = seed_space.other();
    let mut xs = vec![seed.clone()];
    let mut ys: Vec<StateVector> = Vec::new();
    let mut seen: HashMap<StateVector, usize> = HashMap::from([(seed.clone(), 0)]);
    let mut trace = Vec::new();
    let mut seed_records = Vec::new();
    let mut other_records = Vec::new();
    let mut outcomes = (Outcome::NonConvergent, Outcome::NonConvergent);

    for _ in 0..seed_r.max_iterations {
        let y = apply(&fwd, xs.last().unwrap(), &other_r);
        ys.push(y.state.clone());
        other_records.push(y.clone());
        trace.push((other_space, y.clone()));

        let x = apply(&back, &y.state, &seed_r);
        let next = x.state.clone();
        seed_records.push(x.clone());
        trace.push((seed_space, x));

        if let Some(&k) = seen.get(&next) {
            outcomes = if k + 1 == xs.len() {
                (Outcome::FixedPoint(next), Outcome::FixedPoint(ys[k].clone()))
            } else {
                (
                    Outcome::LimitCycle(canonical_cycle(xs[k..].to_vec())),
                    Outcome::LimitCycle(canonical_cycle(ys[k..].to_vec())),
                )
            };
            break;
        }
        seen.insert(next.clone(), xs.len());
        xs.push(next);
    }

    let seed_pattern = HiddenPattern {
        outcome: outcomes.0,
        trace: seed_records,
    };
    let other_pattern = HiddenPattern {
        outcome: outcomes.1,
        trace: other_records,
    };
    let (domain, range) = match seed_space {
        Space::Domain => (seed_pattern, other_pattern),
        Space::Range => (other_pattern, seed_pattern),
    };
    Ok(DualHiddenPattern { domain, range, trace })
}

/// Weighted sum of relational maps augmented onto shared domain and range catalogs.
pub fn r_combine(
    maps: &[RelationalMap],
    weights: Option<&[Rational]>,
    domain_universe: Option<&ConceptCatalog>,
    range_universe: Option<&ConceptCatalog>,
) -> Result<RelationalMap> {
    if maps.is_empty() {
        return Err(Error::Empty("no maps to combine"));
    }
    check_weights(weights, maps.len())?;
    let du = domain_universe
        .cloned()
        .unwrap_or_else(|| ConceptCatalog::union(maps.iter().map(|m| &m.domain)));
    let ru = range_universe
        .cloned()
        .unwrap_or_else(|| ConceptCatalog::union(maps.iter().map(|m| &m.range)));
    let mut total = NeutroMatrix::zeros(du.len(), ru.len());
    for (k, m) in maps.iter().enumerate() {
        let rows = m.domain.positions_in(&du)?;
        let cols = m.range.positions_in(&ru)?;
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let w = m.weights.get(i, j);
                if w.is_zero() {
                    continue;
                }
                let w = match weights {
                    Some(ws) => w.scale(&ws[k]),
                    None => w.clone(),
                };
                let cell = total.get(r, c) + &w;
                total.set(r, c, cell);
            }
        }
    }
    RelationalMap::new(du, ru, total)
}

/// Result of chaining relational maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkResult {
    /// Sign-reduced hidden map between the chain's outer catalogs.
    pub map: RelationalMap,
    /// Unreduced product; intermediate magnitudes the reduction discards.
    pub exact: NeutroMatrix,
    /// Whether each chain element was used transposed.
    pub transposed: Vec<bool>,
}

/// Multiplies a chain of maps that pairwise share a catalog, transposing where needed,
/// then reduces each entry of the exact product to `{-1, 0, 1, I}` once.
pub fn link(chain: &[RelationalMap]) -> Result<LinkResult> {
    let first = chain.first().ok_or(Error::Empty("link chain"))?;
    let first_transposed = match chain.get(1) {
        None => false,
        Some(next) => {
            let touches = |c: &ConceptCatalog| c.same_set(&next.domain) || c.same_set(&next.range);
            if touches(&first.domain) {
                true
            } else if touches(&first.range) {
                false
            } else {
                return Err(Error::Unchainable { left: 0, right: 1 });
            }
        }
    };
    let oriented_first = if first_transposed {
        first.transposed()
    } else {
        first.clone()
    };
    let mut transposed = vec![first_transposed];
    let start = oriented_first.domain.clone();
    let mut reach = oriented_first.range.clone();
    let mut product = oriented_first.weights;

    for (k, next) in chain.iter().enumerate().skip(1) {
        let oriented = if next.domain.same_set(&reach) {
            transposed.push(false);
            next.clone()
        } else if next.range.same_set(&reach) {
            transposed.push(true);
            next.transposed()
        } else {
            return Err(Error::Unchainable { left: k - 1, right: k });
        };
        let perm = reach.positions_in(&oriented.domain)?;
        let aligned = NeutroMatrix::from_fn(perm.len(), oriented.range.len(), |i, j| {
            oriented.weights.get(perm[i], j).clone()
        });
        product = product.mul(&aligned)?;
        reach = oriented.range;
    }

    let mut range = reach;
    if range.names().iter().any(|n| start.contains(n)) {
        range = ConceptCatalog::new(range.names().iter().map(|n| format!("{n}'")))?;
    }
    let reduced = product.map(|v| v.sign_reduce().value());
    Ok(LinkResult {
        map: RelationalMap::new(start, range, reduced)?,
        exact: product,
        transposed,
    })
}

/// How a relational map is laid out as a square map on `domain ++ range`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Embedding {
    /// `E` in the domain-to-range block only.
    #[default]
    Forward,
    /// `E` domain-to-range and `E^T` range-to-domain, so a cognitive run alternates spaces.
    Bidirectional,
}

pub fn to_cognitive(m: &RelationalMap, embedding: Embedding) -> CognitiveMap {
    let names = m.domain.names().iter().chain(m.range.names()).cloned();
    let catalog = ConceptCatalog::new(names).expect("spaces are disjoint");
    let n = m.domain.len();
    let total = catalog.len();
    let w = NeutroMatrix::from_fn(total, total, |i, j| {
        if i < n && j >= n {
            m.weights.get(i, j - n).clone()
        } else if embedding == Embedding::Bidirectional && i >= n && j < n {
            m.weights.get(j, i - n).clone()
        } else {
            NeutroValue::zero()
        }
    });
    CognitiveMap::new(catalog, w).expect("square by construction")
}

/// Two-colours the undirected nonzero-edge graph. Components are coloured from their
/// lowest-index vertex, which goes in the first part.
pub fn is_bigraph(m: &CognitiveMap) -> Option<(Vec<String>, Vec<String>)> {
    let n = m.len();
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in m.edges() {
        if i == j {
            return None;
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, c) in colour.into_iter().enumerate() {
        let name = m.catalog().name(i).to_string();
        if c == Some(false) {
            a.push(name);
        } else {
            b.push(name);
        }
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neutro::rational;

    fn teacher() -> RelationalMap {
        RelationalMap::from_int_rows(
            vec!["D1", "D2", "D3", "D4", "D5"],
            vec!["R1", "R2", "R3"],
            &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0], [0, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn spaces_must_be_disjoint() {
        let err = RelationalMap::from_int_rows(vec!["a", "b"], vec!["b"], &[[1], [0]]);
        assert!(matches!(err, Err(Error::OverlappingSpaces(_))));
        assert!(RelationalMap::from_int_rows(vec!["a"], vec!["b"], &[[1, 0]]).is_err());
    }

    #[test]
    fn steps_in_both_directions() {
        let m = teacher();
        let k = rational(0);
        let d = StateVector::unit(5, &[0]);
        let r = r_step(&d, &m, Direction::DomainToRange, &[], &k).unwrap();
        assert_eq!(r.to_string(), "1 0 0");
        let back = r_step(&r, &m, Direction::RangeToDomain, &[], &k).unwrap();
        assert_eq!(back.to_string(), "1 0 0 1 0");
        assert!(r_step(&r, &m, Direction::DomainToRange, &[], &k).is_err());
    }

    #[test]
    fn teacher_student_fixed_pair() {
        let hp = r_infer(
            &StateVector::unit(5, &[0]),
            Space::Domain,
            &teacher(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert_eq!(hp.domain.fixed_point().unwrap().to_string(), "1 0 0 1 0");
        assert_eq!(hp.range.fixed_point().unwrap().to_string(), "1 0 0");
        let spaces: Vec<Space> = hp.trace.iter().map(|(s, _)| *s).collect();
        assert_eq!(spaces, [Space::Range, Space::Domain, Space::Range, Space::Domain]);
    }

    #[test]
    fn link_transposes_shared_domain() {
        let a = RelationalMap::from_int_rows(vec!["c1", "c2"], vec!["g1"], &[[1], [-1]]).unwrap();
        let b = RelationalMap::from_int_rows(vec!["c1", "c2"], vec!["p1", "p2"], &[[1, 1], [1, -1]]).unwrap();
        let l = link(&[b.clone(), a.clone()]).unwrap();
        assert_eq!(l.transposed, [true, false]);
        assert_eq!(l.map.domain().names(), ["p1", "p2"]);
        assert_eq!(l.map.range().names(), ["g1"]);
        assert_eq!(l.exact, NeutroMatrix::from_int_rows(&[[0], [2]]).unwrap());
        assert_eq!(l.map.weights(), &NeutroMatrix::from_int_rows(&[[0], [1]]).unwrap());
    }

    #[test]
    fn link_of_one_map_reduces_signs() {
        let m = RelationalMap::new(
            ConceptCatalog::new(["a", "b"]).unwrap(),
            ConceptCatalog::new(["x"]).unwrap(),
            NeutroMatrix::parse_rows(&[["3"], ["-2I"]]).unwrap(),
        )
        .unwrap();
        let l = link(&[m]).unwrap();
        assert_eq!(l.map.weights(), &NeutroMatrix::parse_rows(&[["1"], ["I"]]).unwrap());
        assert_eq!(link(&[teacher()]).unwrap().map, teacher());
    }

    #[test]
    fn link_of_duplicate_renames_range() {
        let l = link(&[teacher(), teacher()]).unwrap();
        assert_eq!(l.transposed, [true, false]);
        assert_eq!(l.map.domain().names(), ["R1", "R2", "R3"]);
        assert_eq!(l.map.range().names(), ["R1'", "R2'", "R3'"]);
        let expected = teacher().weights().transpose().mul(teacher().weights()).unwrap();
        assert_eq!(l.exact, expected);
    }

    #[test]
    fn link_rejects_disjoint_catalogs() {
        let a = RelationalMap::from_int_rows(vec!["a"], vec!["b"], &[[1]]).unwrap();
        let c = RelationalMap::from_int_rows(vec!["c"], vec!["d"], &[[1]]).unwrap();
        assert!(matches!(link(&[a, c]), Err(Error::Unchainable { left: 0, right: 1 })));
        assert!(link(&[]).is_err());
    }

    #[test]
    fn link_aligns_permuted_catalogs() {
        let a = RelationalMap::from_int_rows(vec!["p"], vec!["x", "y"], &[[1, -1]]).unwrap();
        let b = RelationalMap::from_int_rows(vec!["y", "x"], vec!["q"], &[[1], [0]]).unwrap();
        let l = link(&[a, b]).unwrap();
        assert_eq!(l.exact, NeutroMatrix::from_int_rows(&[[-1]]).unwrap());
    }

    #[test]
    fn combine_relational() {
        let a = RelationalMap::from_int_rows(vec!["a"], vec!["x"], &[[1]]).unwrap();
        let b = RelationalMap::from_int_rows(vec!["b"], vec!["x", "y"], &[[1, 1]]).unwrap();
        let c = r_combine(&[a.clone(), b], None, None, None).unwrap();
        assert_eq!(c.domain().names(), ["a", "b"]);
        assert_eq!(c.weights(), &NeutroMatrix::from_int_rows(&[[1, 0], [1, 1]]).unwrap());
        assert_eq!(r_combine(std::slice::from_ref(&a), None, None, None).unwrap(), a);
        assert!(r_combine(&[a], Some(&[rational(-2)]), None, None).is_err());
    }

    #[test]
    fn cognitive_embeddings() {
        let f = to_cognitive(&teacher(), Embedding::Forward);
        assert_eq!(f.len(), 8);
        assert_eq!(f.edges().count(), 5);
        let b = to_cognitive(&teacher(), Embedding::Bidirectional);
        assert_eq!(b.edges().count(), 10);
        let (d, r) = is_bigraph(&f).unwrap();
        assert_eq!(d, teacher().domain().names());
        assert_eq!(r, teacher().range().names());
    }

    #[test]
    fn odd_cycle_is_not_bipartite() {
        let tri = CognitiveMap::from_int_rows(vec!["a", "b", "c"], &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
        assert!(is_bigraph(&tri).is_none());
        let lone = CognitiveMap::from_int_rows(vec!["a"], &[[1]]).unwrap();
        assert!(is_bigraph(&lone).is_none());
    }
}
