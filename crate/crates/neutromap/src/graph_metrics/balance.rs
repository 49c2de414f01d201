use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::Serialize;

use crate::exec::Execution;
use crate::map_core::CognitiveMap;
use crate::neutro::{rational, NeutroValue, Rational};
use crate::serde_util::opt_rational_str;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleSign {
    Positive,
    Negative,
    Indeterminate,
}

impl CycleSign {
    fn of(w: &NeutroValue) -> CycleSign {
        if !w.is_crisp() {
            CycleSign::Indeterminate
        } else if w.real().is_negative() {
            CycleSign::Negative
        } else {
            CycleSign::Positive
        }
    }

    fn times(self, other: CycleSign) -> CycleSign {
        use CycleSign::*;
        match (self, other) {
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (a, b) if a == b => Positive,
            _ => Negative,
        }
    }
}

/// A cycle of the underlying undirected multigraph: each arc is an edge, so a pair of
/// opposite arcs forms a semicycle of length 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semicycle {
    /// Vertices in traversal order, starting from the smallest.
    pub vertices: Vec<usize>,
    /// Arcs as `(from, to)`, aligned with the traversal.
    pub arcs: Vec<(usize, usize)>,
    pub sign: CycleSign,
}

impl Semicycle {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

struct Arc {
    from: usize,
    to: usize,
    sign: CycleSign,
}

fn arcs_of(m: &CognitiveMap) -> Vec<Arc> {
    m.edges()
        .filter(|(i, j, _)| i != j)
        .map(|(from, to, w)| Arc {
            from,
            to,
            sign: CycleSign::of(w),
        })
        .collect()
}

/// All semicycles of length `2..=max_len`; loops are ignored.
pub fn semicycles(m: &CognitiveMap, max_len: usize, exec: Execution) -> Vec<Semicycle> {
    let arcs = arcs_of(m);
    let n = m.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, a) in arcs.iter().enumerate() {
        adj[a.from].push((a.to, id));
        adj[a.to].push((a.from, id));
    }
    exec.map_range(n, |s| {
        let mut found = Vec::new();
        let mut path = vec![s];
        let mut used: Vec<usize> = Vec::new();
        let mut on_path = vec![false; n];
        on_path[s] = true;
        walk_undirected(
            s,
            s,
            max_len,
            &adj,
            &arcs,
            &mut path,
            &mut used,
            &mut on_path,
            &mut found,
        );
        found
    })
    .into_iter()
    .flatten()
    .collect()
}

#[allow(clippy::too_many_arguments)]
fn walk_undirected(
    start: usize,
    u: usize,
    max_len: usize,
    adj: &[Vec<(usize, usize)>],
    arcs: &[Arc],
    path: &mut Vec<usize>,
    used: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut Vec<Semicycle>,
) {
    for &(v, e) in &adj[u] {
        if used.contains(&e) {
            continue;
        }
        if v == start {
            // Each cycle is met twice, once per direction; keep the one whose first arc id is lower.
            if !used.is_empty() && used[0] < e && used.len() < max_len {
                let mut ids = used.clone();
                ids.push(e);
                found.push(Semicycle {
                    vertices: path.clone(),
                    arcs: ids.iter().map(|&k| (arcs[k].from, arcs[k].to)).collect(),
                    sign: ids.iter().fold(CycleSign::Positive, |acc, &k| acc.times(arcs[k].sign)),
                });
            }
        } else if v > start && !on_path[v] && used.len() + 1 < max_len {
            on_path[v] = true;
            path.push(v);
            used.push(e);
            walk_undirected(start, v, max_len, adj, arcs, path, used, on_path, found);
            used.pop();
            path.pop();
            on_path[v] = false;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SignCounts {
    pub positive: usize,
    pub negative: usize,
    pub indeterminate: usize,
}

impl SignCounts {
    /// Signed total `p + n`; indeterminate items are not counted.
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    fn add(&mut self, s: CycleSign) {
        match s {
            CycleSign::Positive => self.positive += 1,
            CycleSign::Negative => self.negative += 1,
            CycleSign::Indeterminate => self.indeterminate += 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BalanceCounts {
    pub overall: SignCounts,
    pub by_length: BTreeMap<usize, SignCounts>,
}

impl BalanceCounts {
    pub fn from_semicycles(cycles: &[Semicycle]) -> Self {
        let mut c = BalanceCounts::default();
        for s in cycles {
            c.overall.add(s.sign);
            c.by_length.entry(s.len()).or_default().add(s.sign);
        }
        c
    }
}

/// Length weights for the weighted balance degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthWeight {
    /// `1/m`
    Inverse,
    /// `1/m^2`
    InverseSquare,
    /// `1/2^m`
    InverseExp2,
}

impl LengthWeight {
    pub fn at(self, m: usize) -> Rational {
        let m = m as i64;
        let d = match self {
            LengthWeight::Inverse => rational(m),
            LengthWeight::InverseSquare => rational(m * m),
            LengthWeight::InverseExp2 => Rational::from_integer(num::pow(num::BigInt::from(2), m as usize)),
        };
        Rational::from_integer(1.into()) / d
    }
}

fn frac(p: usize, t: usize) -> Option<Rational> {
    (t > 0).then(|| Rational::new((p as i64).into(), (t as i64).into()))
}

/// `p / t` over semicycles up to `max_len`.
pub fn balance_simple(m: &CognitiveMap, max_len: usize) -> Option<Rational> {
    let c = BalanceCounts::from_semicycles(&semicycles(m, max_len, Execution::Sequential));
    frac(c.overall.positive, c.overall.total())
}

/// `(sum p_m f(m) / sum t_m f(m), sum p_m f(m) / sum n_m f(m))`.
pub fn balance_weighted(m: &CognitiveMap, max_len: usize, f: LengthWeight) -> (Option<Rational>, Option<Rational>) {
    let c = BalanceCounts::from_semicycles(&semicycles(m, max_len, Execution::Sequential));
    weighted_from_counts(&c, f)
}

fn weighted_from_counts(c: &BalanceCounts, f: LengthWeight) -> (Option<Rational>, Option<Rational>) {
    let mut p = Rational::zero();
    let mut t = Rational::zero();
    let mut n = Rational::zero();
    for (&len, counts) in &c.by_length {
        let w = f.at(len);
        p += &w * rational(counts.positive as i64);
        n += &w * rational(counts.negative as i64);
        t += &w * rational(counts.total() as i64);
    }
    let ratio = |d: &Rational| (!d.is_zero()).then(|| &p / d);
    (ratio(&t), ratio(&n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairBalance {
    pub from: usize,
    pub to: usize,
    pub counts: SignCounts,
    /// `min(p, n) / int((p + n + 1) / 2)`; `None` when `p + n = 0`.
    #[serde(with = "opt_rational_str")]
    pub r: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairwiseBalance {
    pub pairs: Vec<PairBalance>,
    /// Mean of `r` over pairs where it is defined.
    #[serde(with = "opt_rational_str")]
    pub aggregate: Option<Rational>,
}

pub(crate) fn pair_r(p: usize, n: usize) -> Option<Rational> {
    let t = p + n;
    (t > 0).then(|| Rational::new((p.min(n) as i64).into(), (t.div_ceil(2) as i64).into()))
}

/// Signed counts of simple directed paths `i -> j` (cycles through `i` when `i = j`) up to
/// `max_len` arcs, for every pair that has at least one.
pub fn balance_pairwise(m: &CognitiveMap, max_len: usize, exec: Execution) -> PairwiseBalance {
    let n = m.len();
    let mut out: Vec<Vec<(usize, usize, CycleSign)>> = vec![Vec::new(); n];
    for (i, j, w) in m.edges() {
        out[i].push((j, 0, CycleSign::of(w)));
    }
    let rows = exec.map_range(n, |s| {
        let mut counts: BTreeMap<usize, SignCounts> = BTreeMap::new();
        let mut on_path = vec![false; n];
        on_path[s] = true;
        walk_directed(s, s, 0, CycleSign::Positive, max_len, &out, &mut on_path, &mut counts);
        counts
            .into_iter()
            .map(|(to, counts)| PairBalance {
                from: s,
                to,
                r: pair_r(counts.positive, counts.negative),
                counts,
            })
            .collect::<Vec<_>>()
    });
    let pairs: Vec<PairBalance> = rows.into_iter().flatten().collect();
    let defined: Vec<&Rational> = pairs.iter().filter_map(|p| p.r.as_ref()).collect();
    let aggregate = (!defined.is_empty())
        .then(|| defined.iter().fold(Rational::zero(), |a, x| a + *x) / rational(defined.len() as i64));
    PairwiseBalance { pairs, aggregate }
}

#[allow(clippy::too_many_arguments)]
fn walk_directed(
    start: usize,
    u: usize,
    depth: usize,
    sign: CycleSign,
    max_len: usize,
    out: &[Vec<(usize, usize, CycleSign)>],
    on_path: &mut [bool],
    counts: &mut BTreeMap<usize, SignCounts>,
) {
    if depth == max_len {
        return;
    }
    for &(v, _, s) in &out[u] {
        let next = sign.times(s);
        if v == start {
            counts.entry(start).or_default().add(next);
        } else if !on_path[v] {
            counts.entry(v).or_default().add(next);
            on_path[v] = true;
            walk_directed(start, v, depth + 1, next, max_len, out, on_path, counts);
            on_path[v] = false;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub max_len: usize,
    pub semicycles: Vec<Semicycle>,
    pub counts: BalanceCounts,
    #[serde(with = "opt_rational_str")]
    pub simple: Option<Rational>,
    pub length_weight: LengthWeight,
    #[serde(with = "opt_rational_str")]
    pub weighted_total: Option<Rational>,
    #[serde(with = "opt_rational_str")]
    pub weighted_negative: Option<Rational>,
    pub pairwise: PairwiseBalance,
}

pub fn balance_report(m: &CognitiveMap, max_len: usize, f: LengthWeight, exec: Execution) -> BalanceReport {
    let cycles = semicycles(m, max_len, exec);
    let counts = BalanceCounts::from_semicycles(&cycles);
    let (weighted_total, weighted_negative) = weighted_from_counts(&counts, f);
    BalanceReport {
        max_len,
        simple: frac(counts.overall.positive, counts.overall.total()),
        semicycles: cycles,
        counts,
        length_weight: f,
        weighted_total,
        weighted_negative,
        pairwise: balance_pairwise(m, max_len, exec),
    }
}
