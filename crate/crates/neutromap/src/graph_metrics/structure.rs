use std::collections::{BTreeSet, VecDeque};

use num::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::map_core::CognitiveMap;

fn components(m: &CognitiveMap) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..m.len()).map(|_| g.add_node(())).collect();
    for (i, j, _) in m.edges() {
        g.add_edge(nodes[i], nodes[j], ());
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn cyclic_components(m: &CognitiveMap) -> Vec<Vec<usize>> {
    components(m)
        .into_iter()
        .filter(|c| c.len() > 1 || !m.weight(c[0], c[0]).is_zero())
        .collect()
}

/// Flags for vertices lying on some directed cycle (self-loops included).
pub fn cyclic_vertices(m: &CognitiveMap) -> Vec<bool> {
    let mut on = vec![false; m.len()];
    for c in cyclic_components(m) {
        for v in c {
            on[v] = true;
        }
    }
    on
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffectedBranch {
    pub concepts: Vec<String>,
    pub indices: Vec<usize>,
    /// Arcs entering the branch from the rest of the map.
    pub attachments: Vec<(String, String)>,
}

/// Vertices that cannot reach any cycle, split into weakly connected pieces.
///
/// Their union is the largest cycle-free vertex set with no arc leaving it, so removing
/// them never changes how the remaining concepts evolve.
pub fn find_affected_branches(m: &CognitiveMap) -> Vec<AffectedBranch> {
    let n = m.len();
    let mut reaches = cyclic_vertices(m);
    let mut preds = vec![Vec::new(); n];
    let mut neighbours = vec![Vec::new(); n];
    for (i, j, _) in m.edges() {
        preds[j].push(i);
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| reaches[v]).collect();
    while let Some(v) = queue.pop_front() {
        for &u in &preds[v] {
            if !reaches[u] {
                reaches[u] = true;
                queue.push_back(u);
            }
        }
    }

    let mut seen = reaches.clone();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbours[u] {
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        let inside: BTreeSet<usize> = members.iter().copied().collect();
        let attachments = m
            .edges()
            .filter(|(i, j, _)| !inside.contains(i) && inside.contains(j))
            .map(|(i, j, _)| (m.catalog().name(i).to_string(), m.catalog().name(j).to_string()))
            .collect();
        out.push(AffectedBranch {
            concepts: members.iter().map(|&i| m.catalog().name(i).to_string()).collect(),
            indices: members,
            attachments,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyKind {
    /// A path from a source enters a cycle here.
    InputJunction,
    /// Two or more arcs from the same cycle cluster enter here.
    CycleJunction,
    /// Chosen for a cycle that has no other key vertex.
    Representative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyVertex {
    pub index: usize,
    pub concept: String,
    pub kinds: Vec<KeyKind>,
}

pub fn find_key_vertices(m: &CognitiveMap) -> Vec<KeyVertex> {
    let n = m.len();
    let cyclic = cyclic_components(m);
    let mut comp_of = vec![usize::MAX; n];
    for (k, c) in cyclic.iter().enumerate() {
        for &v in c {
            comp_of[v] = k;
        }
    }
    let on_cycle = |v: usize| comp_of[v] != usize::MAX;
    let mut preds: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, j, _) in m.edges() {
        preds[j].insert(i);
    }

    // Off-cycle vertices reachable from an in-degree-0 vertex without crossing a cycle.
    let mut fed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| preds[v].is_empty()).collect();
    for &v in &queue {
        fed[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for v in m.successors(u) {
            if !on_cycle(v) && !fed[v] {
                fed[v] = true;
                queue.push_back(v);
            }
        }
    }

    let mut kinds: Vec<Vec<KeyKind>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| on_cycle(v)) {
        if preds[v].iter().any(|&u| !on_cycle(u) && fed[u]) {
            kinds[v].push(KeyKind::InputJunction);
        }
        if preds[v].iter().filter(|&&u| comp_of[u] == comp_of[v]).count() >= 2 {
            kinds[v].push(KeyKind::CycleJunction);
        }
    }
    // A cyclic component with no junction is a single simple cycle, since every vertex
    // has exactly one in-neighbour inside it.
    for c in &cyclic {
        if c.iter().all(|&v| kinds[v].is_empty()) {
            kinds[c[0]].push(KeyKind::Representative);
        }
    }
    kinds
        .into_iter()
        .enumerate()
        .filter(|(_, k)| !k.is_empty())
        .map(|(v, kinds)| KeyVertex {
            index: v,
            concept: m.catalog().name(v).to_string(),
            kinds,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
    }

    #[test]
    fn pendant_chain_is_a_branch() {
        // A <-> B, B -> C -> D
        let m =
            CognitiveMap::from_int_rows(names(4), &[[0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]]).unwrap();
        let b = find_affected_branches(&m);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].concepts, ["C", "D"]);
        assert_eq!(b[0].attachments, [("B".to_string(), "C".to_string())]);
    }

    #[test]
    fn strongly_connected_has_no_branch() {
        let m = CognitiveMap::from_int_rows(names(3), &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
        assert!(find_affected_branches(&m).is_empty());
    }

    #[test]
    fn isolated_cycle_gets_one_representative() {
        let m = CognitiveMap::from_int_rows(names(3), &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
        let k = find_key_vertices(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].concept, "A");
        assert_eq!(k[0].kinds, [KeyKind::Representative]);
    }

    #[test]
    fn input_chain_marks_entry() {
        // D -> E -> B, cycle A -> B -> C -> A
        let m = CognitiveMap::from_int_rows(
            names(5),
            &[
                [0, 1, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 0, 0, 1],
                [0, 1, 0, 0, 0],
            ],
        )
        .unwrap();
        let k = find_key_vertices(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].concept, "B");
        assert_eq!(k[0].kinds, [KeyKind::InputJunction]);
    }

    #[test]
    fn acyclic_has_no_keys() {
        let m = CognitiveMap::from_int_rows(names(3), &[[0, 1, 1], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert!(find_key_vertices(&m).is_empty());
        assert_eq!(find_affected_branches(&m).len(), 1);
    }

    #[test]
    fn shared_vertex_of_two_cycles() {
        // A -> B -> A and B -> C -> B
        let m = CognitiveMap::from_int_rows(names(3), &[[0, 1, 0], [1, 0, 1], [0, 1, 0]]).unwrap();
        let k = find_key_vertices(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].concept, "B");
        assert_eq!(k[0].kinds, [KeyKind::CycleJunction]);
    }
}
