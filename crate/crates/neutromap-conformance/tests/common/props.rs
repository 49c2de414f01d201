//! Randomised properties with independent oracles, shared by the acceptance run and the
//! proptest suite.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use neutromap::graph_metrics::{
    balance_pairwise, balance_simple, balance_weighted, find_affected_branches, semicycles, BalanceCounts, LengthWeight,
};
use neutromap::map_core::{degrade_to_fcm, infer, EngineConfig, Outcome};
use neutromap::relational::{r_infer, to_cognitive, Embedding, Space};
use neutromap::{
    CognitiveMap, ConceptCatalog, Execution, NeutroMatrix, NeutroValue, Rational, RelationalMap, StateSymbol,
    StateVector,
};
use num::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 10_000;

/// Runs `test` over `cases` inputs; the error text carries the shrunk counterexample.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

const NCM_CELLS: &[&str] = &["0", "0", "0", "0", "1", "-1", "I", "-I", "1+I", "2", "-1+I"];

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn matrix(rows: usize, cols: usize, cells: &[&str]) -> NeutroMatrix {
    NeutroMatrix::from_fn(rows, cols, |i, j| cells[i * cols + j].parse().unwrap())
}

pub fn map_of(n: usize, cells: &[&str]) -> CognitiveMap {
    CognitiveMap::new(ConceptCatalog::new(names("C", n)).unwrap(), matrix(n, n, cells)).unwrap()
}

fn seed_of(bits: &[bool]) -> StateVector {
    StateVector::new(
        bits.iter()
            .map(|&b| if b { StateSymbol::On } else { StateSymbol::Off })
            .collect(),
    )
}

fn map_and_seed(cells: &'static [&'static str]) -> impl Strategy<Value = (usize, Vec<&'static str>, Vec<bool>)> {
    (1usize..=6).prop_flat_map(move |n| {
        (
            Just(n),
            prop::collection::vec(select(cells), n * n),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

fn small_value() -> impl Strategy<Value = NeutroValue> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, c, d)| NeutroValue::new(Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into())))
}

// (a)

pub fn ring_laws() -> Result<(), String> {
    run(CASES, (small_value(), small_value(), small_value()), |(x, y, z)| {
        let zero = NeutroValue::zero();
        let one = NeutroValue::one();
        prop_assert_eq!(&(&(&x + &y) + &z), &(&x + &(&y + &z)));
        prop_assert_eq!(&(&x + &y), &(&y + &x));
        prop_assert_eq!(&(&(&x * &y) * &z), &(&x * &(&y * &z)));
        prop_assert_eq!(&(&x * &y), &(&y * &x));
        prop_assert_eq!(&(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z)));
        prop_assert_eq!(&(&x + &zero), &x);
        prop_assert_eq!(&(&x * &one), &x);
        prop_assert_eq!(&(&x * &zero), &zero);
        prop_assert_eq!(&(&x + &(-&x)), &zero);
        prop_assert_eq!(&(&x - &y), &(&x + &(-&y)));
        // (a + bI)(c + dI) = ac + (ad + bc + bd) I
        let (a, b, c, d) = (x.real(), x.indet(), y.real(), y.indet());
        let by_hand = NeutroValue::new(a * c, a * d + b * c + b * d);
        prop_assert_eq!(&(&x * &y), &by_hand);
        prop_assert_eq!(&(&NeutroValue::i() * &NeutroValue::i()), &NeutroValue::i());
        prop_assert_eq!(x.to_string().parse::<NeutroValue>().unwrap(), x);
        Ok(())
    })
}

// (b)

#[derive(Debug, PartialEq)]
enum BitOutcome {
    Fixed(u64),
    Cycle(Vec<u64>),
}

/// Plain integer simulation on bit masks; clamp is the seed, threshold 0.
fn bit_oracle(n: usize, w: &[i64], seed: u64) -> (Vec<(Vec<i64>, u64)>, BitOutcome) {
    let mut history = vec![seed];
    let mut seen = HashMap::from([(seed, 0usize)]);
    let mut trace = Vec::new();
    loop {
        let s = *history.last().unwrap();
        let sums: Vec<i64> = (0..n)
            .map(|j| (0..n).filter(|&i| s >> i & 1 == 1).map(|i| w[i * n + j]).sum())
            .collect();
        let next = (0..n).filter(|&j| sums[j] > 0).fold(seed, |acc, j| acc | 1 << j);
        trace.push((sums, next));
        if let Some(&k) = seen.get(&next) {
            if k + 1 == history.len() {
                return (trace, BitOutcome::Fixed(next));
            }
            let mut cycle = history[k..].to_vec();
            // Smallest state first, comparing concept 0 first with OFF below ON.
            let key = |m: &u64| (0..n).map(|i| m >> i & 1).collect::<Vec<_>>();
            let start = (0..cycle.len()).min_by_key(|&i| key(&cycle[i])).unwrap();
            cycle.rotate_left(start);
            return (trace, BitOutcome::Cycle(cycle));
        }
        seen.insert(next, history.len());
        history.push(next);
    }
}

fn mask(s: &StateVector) -> u64 {
    s.on_indices().iter().fold(0, |acc, &i| acc | 1 << i)
}

pub fn crisp_matches_bit_oracle() -> Result<(), String> {
    let strategy = (1usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-2i64..=2, n * n),
            prop::collection::vec(any::<bool>(), n),
        )
    });
    run(CASES, strategy, |(n, w, bits)| {
        let m = CognitiveMap::new(
            ConceptCatalog::new(names("C", n)).unwrap(),
            NeutroMatrix::from_fn(n, n, |i, j| NeutroValue::int(w[i * n + j])),
        )
        .unwrap();
        let seed = seed_of(&bits);
        let hp = infer(&seed, &m, &EngineConfig::default()).unwrap();
        let (trace, outcome) = bit_oracle(n, &w, mask(&seed));
        prop_assert_eq!(hp.trace.len(), trace.len());
        for (rec, (sums, state)) in hp.trace.iter().zip(&trace) {
            prop_assert_eq!(mask(&rec.state), *state);
            prop_assert!(rec.state.is_crisp());
            let products: Vec<NeutroValue> = sums.iter().map(|&x| NeutroValue::int(x)).collect();
            prop_assert_eq!(&rec.product, &products);
        }
        let got = match &hp.outcome {
            Outcome::FixedPoint(s) => BitOutcome::Fixed(mask(s)),
            Outcome::LimitCycle(c) => BitOutcome::Cycle(c.iter().map(mask).collect()),
            Outcome::NonConvergent => return Err(TestCaseError::fail("engine did not converge")),
        };
        prop_assert_eq!(got, outcome);
        Ok(())
    })
}

// (c)

pub fn terminates_within_bound() -> Result<(), String> {
    run(CASES, map_and_seed(NCM_CELLS), |(n, cells, bits)| {
        let m = map_of(n, &cells);
        let hp = infer(&seed_of(&bits), &m, &EngineConfig::default()).unwrap();
        prop_assert!(hp.converged(), "no recurrence for n = {}", n);
        prop_assert!(
            hp.trace.len() <= 3usize.pow(n as u32) + 1,
            "{} steps for n = {}",
            hp.trace.len(),
            n
        );
        Ok(())
    })
}

// (d)

pub fn acyclic_settles_after_longest_path() -> Result<(), String> {
    let strategy = (1usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(select(NCM_CELLS), n * n),
            prop::collection::vec(any::<bool>(), n),
        )
    });
    run(CASES, strategy, |(n, order, cells, bits)| {
        // Arcs only go forward in `order`, so the map has no cycle.
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let cells: Vec<&str> = (0..n * n)
            .map(|k| if rank[k / n] < rank[k % n] { cells[k] } else { "0" })
            .collect();
        let m = map_of(n, &cells);
        let mut depth = vec![0usize; n];
        for &v in &order {
            for u in (0..n).filter(|&u| cells[u * n + v] != "0") {
                depth[v] = depth[v].max(depth[u] + 1);
            }
        }
        let longest = depth.iter().copied().max().unwrap_or(0);
        let hp = infer(&seed_of(&bits), &m, &EngineConfig::default()).unwrap();
        let fixed = match &hp.outcome {
            Outcome::FixedPoint(s) => s.clone(),
            other => return Err(TestCaseError::fail(format!("acyclic map gave {other:?}"))),
        };
        let first = hp.states().position(|s| *s == fixed).unwrap() + 1;
        prop_assert!(first <= longest + 1, "fixed at step {} with L = {}", first, longest);
        Ok(())
    })
}

// (e)

pub fn degrade_commutes_with_inference() -> Result<(), String> {
    run(CASES, map_and_seed(NCM_CELLS), |(n, cells, bits)| {
        let m = map_of(n, &cells);
        let seed = seed_of(&bits);
        let cfg = EngineConfig::default();
        let degraded = degrade_to_fcm(&m);
        let zeroed = NeutroMatrix::from_fn(n, n, |i, j| NeutroValue::crisp(m.weight(i, j).real().clone()));
        prop_assert_eq!(degraded.weights(), &zeroed);
        let crisp = map_of(
            n,
            &cells
                .iter()
                .map(|c| if c.contains('I') { "0" } else { c })
                .collect::<Vec<_>>(),
        );
        prop_assert_eq!(degrade_to_fcm(&crisp), crisp.clone());
        prop_assert_eq!(
            infer(&seed, &degrade_to_fcm(&crisp), &cfg).unwrap(),
            infer(&seed, &crisp, &cfg).unwrap()
        );
        let hp = infer(&seed, &degraded, &cfg).unwrap();
        prop_assert!(hp.states().all(StateVector::is_crisp));
        Ok(())
    })
}

// (f)

pub fn relational_matches_embedded_run() -> Result<(), String> {
    let strategy = (1usize..=3, 1usize..=3).prop_flat_map(|(d, r)| {
        (
            Just((d, r)),
            prop::collection::vec(select(NCM_CELLS), d * r),
            any::<bool>(),
            prop::collection::vec(any::<bool>(), d.max(r)),
        )
    });
    run(CASES, strategy, |((d, r), cells, from_range, bits)| {
        let m = RelationalMap::new(
            ConceptCatalog::new(names("D", d)).unwrap(),
            ConceptCatalog::new(names("R", r)).unwrap(),
            matrix(d, r, &cells),
        )
        .unwrap();
        let (space, len, offset) = if from_range {
            (Space::Range, r, d)
        } else {
            (Space::Domain, d, 0)
        };
        let seed = seed_of(&bits[..len]);
        let mut full = vec![false; d + r];
        full[offset..offset + len].copy_from_slice(&bits[..len]);
        let cfg = EngineConfig::default();
        let dual = r_infer(&seed, space, &m, &cfg).unwrap();
        let cog = infer(&seed_of(&full), &to_cognitive(&m, Embedding::Bidirectional), &cfg).unwrap();
        let domain: Vec<usize> = (0..d).collect();
        let range: Vec<usize> = (d..d + r).collect();
        let steps = dual.trace.len().min(cog.trace.len());
        prop_assert!(steps > 0);
        for t in 0..steps {
            let (sp, rec) = &dual.trace[t];
            let idx = if *sp == Space::Domain { &domain } else { &range };
            prop_assert_eq!(&cog.trace[t].state.project(idx), &rec.state, "step {}", t + 1);
        }
        Ok(())
    })
}

// (g)

/// Counts semicycles by brute force over arc subsets: a subset is a semicycle when it is
/// connected and every touched vertex has degree two.
fn subset_oracle(
    n: usize,
    arcs: &[(usize, usize, NeutroValue)],
    max_len: usize,
) -> BTreeMap<usize, (usize, usize, usize)> {
    let mut out: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for subset in 1u32..(1 << arcs.len()) {
        let chosen: Vec<&(usize, usize, NeutroValue)> = (0..arcs.len())
            .filter(|&k| subset >> k & 1 == 1)
            .map(|k| &arcs[k])
            .collect();
        if chosen.len() < 2 || chosen.len() > max_len {
            continue;
        }
        let mut degree = vec![0; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &&(a, b, _) in &chosen {
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let touched: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
        if touched.iter().any(|&v| degree[v] != 2) {
            continue;
        }
        let root = find(&mut parent, touched[0]);
        if touched.iter().any(|&v| find(&mut parent, v) != root) {
            continue;
        }
        let e = out.entry(chosen.len()).or_default();
        if chosen.iter().any(|(_, _, w)| !w.indet().is_zero()) {
            e.2 += 1;
        } else if chosen.iter().filter(|(_, _, w)| w.real().is_negative()).count() % 2 == 1 {
            e.1 += 1;
        } else {
            e.0 += 1;
        }
    }
    out
}

fn arc_map() -> impl Strategy<Value = (usize, Vec<(usize, usize, &'static str)>, usize)> {
    (2usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(
                (0..n, 0..n, select(&["1", "-1", "1", "-1", "I", "2", "1+I"][..])),
                0..=10,
            ),
            2usize..=6,
        )
    })
}

fn build_arcs(n: usize, raw: &[(usize, usize, &str)]) -> (CognitiveMap, Vec<(usize, usize, NeutroValue)>) {
    let mut cells = vec!["0"; n * n];
    for &(i, j, w) in raw {
        cells[i * n + j] = w;
    }
    let m = map_of(n, &cells);
    let arcs = m
        .edges()
        .filter(|(i, j, _)| i != j)
        .map(|(i, j, w)| (i, j, w.clone()))
        .collect();
    (m, arcs)
}

fn unit_interval(x: &Option<Rational>) -> bool {
    x.as_ref().is_none_or(|v| !v.is_negative() && *v <= Rational::one())
}

/// Semicycle counts against the subset oracle, `p + n = t`, and `[0, 1]` bounds of the
/// degrees other than `ā₃`.
pub fn balance_counts_and_bounds() -> Result<(), String> {
    run(CASES, arc_map(), |(n, raw, max_len)| {
        let (m, arcs) = build_arcs(n, &raw);
        let oracle = subset_oracle(n, &arcs, max_len);
        let counts = BalanceCounts::from_semicycles(&semicycles(&m, max_len, Execution::Sequential));
        let got: BTreeMap<usize, (usize, usize, usize)> = counts
            .by_length
            .iter()
            .map(|(&len, c)| (len, (c.positive, c.negative, c.indeterminate)))
            .filter(|(_, c)| *c != (0, 0, 0))
            .collect();
        prop_assert_eq!(&got, &oracle);
        let crisp_total: usize = oracle.values().map(|c| c.0 + c.1).sum();
        prop_assert_eq!(counts.overall.positive + counts.overall.negative, crisp_total);
        prop_assert_eq!(counts.overall.total(), crisp_total);
        for c in counts.by_length.values() {
            prop_assert_eq!(c.positive + c.negative, c.total());
        }
        prop_assert!(unit_interval(&balance_simple(&m, max_len)));
        for f in [
            LengthWeight::Inverse,
            LengthWeight::InverseSquare,
            LengthWeight::InverseExp2,
        ] {
            prop_assert!(unit_interval(&balance_weighted(&m, max_len, f).0), "a2 with {:?}", f);
        }
        let pw = balance_pairwise(&m, max_len, Execution::Sequential);
        prop_assert!(pw.pairs.iter().all(|p| unit_interval(&p.r)));
        prop_assert!(unit_interval(&pw.aggregate));
        Ok(())
    })
}

/// `ā₃ ∈ [0, 1]` for every length weight.
pub fn balance_a3_bound() -> Result<(), String> {
    run(CASES, arc_map(), |(n, raw, max_len)| {
        let (m, _) = build_arcs(n, &raw);
        for f in [
            LengthWeight::Inverse,
            LengthWeight::InverseSquare,
            LengthWeight::InverseExp2,
        ] {
            let a3 = balance_weighted(&m, max_len, f).1;
            prop_assert!(unit_interval(&a3), "a3 = {} with {:?}", a3.unwrap(), f);
        }
        Ok(())
    })
}

// (h)

fn has_cycle_within(n: usize, m: &CognitiveMap, set: u32) -> bool {
    // Repeatedly strip vertices with no in-arc from inside the set; a leftover means a cycle.
    let mut alive = set;
    loop {
        let strip: Vec<usize> = (0..n)
            .filter(|&v| alive >> v & 1 == 1)
            .filter(|&v| !(0..n).any(|u| alive >> u & 1 == 1 && !m.weight(u, v).is_zero()))
            .collect();
        if strip.is_empty() {
            return alive != 0;
        }
        for v in strip {
            alive &= !(1 << v);
        }
    }
}

pub fn branch_removal_preserves_patterns() -> Result<(), String> {
    let cells: &'static [&'static str] = &["0", "0", "0", "0", "0", "0", "1", "-1", "I"];
    run(CASES, map_and_seed(cells), |(n, cells, bits)| {
        let m = map_of(n, &cells);
        let branches = find_affected_branches(&m);
        let in_branch: BTreeSet<usize> = branches.iter().flat_map(|b| b.indices.iter().copied()).collect();

        // Definition check: the union is the largest arc-closed, cycle-free vertex set.
        let union = in_branch.iter().fold(0u32, |acc, &v| acc | 1 << v);
        for set in 0u32..(1 << n) {
            let closed = (0..n)
                .filter(|&u| set >> u & 1 == 1)
                .all(|u| (0..n).all(|v| m.weight(u, v).is_zero() || set >> v & 1 == 1));
            if closed && !has_cycle_within(n, &m, set) {
                prop_assert_eq!(set & !union, 0, "closed acyclic set {:b} escapes {:b}", set, union);
            }
        }
        prop_assert!(!has_cycle_within(n, &m, union));

        let keep: Vec<usize> = (0..n).filter(|v| !in_branch.contains(v)).collect();
        if keep.is_empty() {
            return Ok(());
        }
        let rest = m.restrict(&keep);
        let full_seed: Vec<bool> = (0..n).map(|v| bits[v] && !in_branch.contains(&v)).collect();
        let rest_seed: Vec<bool> = keep.iter().map(|&v| bits[v]).collect();
        let cfg = EngineConfig::default();
        let full = infer(&seed_of(&full_seed), &m, &cfg).unwrap();
        let part = infer(&seed_of(&rest_seed), &rest, &cfg).unwrap();
        for (a, b) in full.states().zip(part.states()) {
            prop_assert_eq!(&a.project(&keep), b);
        }
        let projected: BTreeSet<StateVector> = full.attractor().iter().map(|s| s.project(&keep)).collect();
        let own: BTreeSet<StateVector> = part.attractor().into_iter().collect();
        prop_assert_eq!(full.attractor().len(), part.attractor().len());
        prop_assert_eq!(projected, own);
        Ok(())
    })
}

/// Names and runners in reporting order.
pub type Property = (&'static str, &'static str, fn() -> Result<(), String>);

pub fn all() -> Vec<Property> {
    vec![
        ("10a", "NeutroValue ring laws", ring_laws),
        (
            "10b",
            "crisp inference equals bit-vector oracle",
            crisp_matches_bit_oracle,
        ),
        ("10c", "termination within 3^n + 1 steps", terminates_within_bound),
        (
            "10d",
            "acyclic maps fix within L + 1 steps",
            acyclic_settles_after_longest_path,
        ),
        (
            "10e",
            "degrade_to_fcm commutes with inference",
            degrade_commutes_with_inference,
        ),
        (
            "10f",
            "r_infer equals infer on the embedded map",
            relational_matches_embedded_run,
        ),
        (
            "10h",
            "affected-branch removal preserves patterns",
            branch_removal_preserves_patterns,
        ),
    ]
}
