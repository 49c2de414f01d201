//! Structural analysis of cognitive maps.

mod balance;
mod structure;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map_core::CognitiveMap;
use crate::neutro::{rational, Rational};
use crate::serde_util::{opt_rational_str, rational_str};

pub use balance::{
    balance_pairwise, balance_report, balance_simple, balance_weighted, semicycles, BalanceCounts, BalanceReport,
    CycleSign, LengthWeight, PairBalance, PairwiseBalance, Semicycle, SignCounts,
};
pub use structure::{cyclic_vertices, find_affected_branches, find_key_vertices, AffectedBranch, KeyKind, KeyVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityConvention {
    /// `C / (N (N - 1))`, loops not expected.
    LoopFree,
    /// `C / N^2`.
    WithLoops,
}

/// Nonzero-entry count over the convention's denominator.
pub fn density(m: &CognitiveMap, convention: DensityConvention) -> Result<Rational> {
    let n = m.len() as i64;
    let (denominator, needed) = match convention {
        DensityConvention::LoopFree => (n * (n - 1), 2),
        DensityConvention::WithLoops => (n * n, 1),
    };
    if n < needed {
        return Err(Error::TooSmall {
            what: "density",
            needed: needed as usize,
            found: m.len(),
        });
    }
    Ok(rational(m.edges().count() as i64) / rational(denominator))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableClass {
    Transmitter,
    Receiver,
    Ordinary,
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConceptDegree {
    pub concept: String,
    #[serde(with = "rational_str")]
    pub out_degree: Rational,
    #[serde(with = "rational_str")]
    pub in_degree: Rational,
    #[serde(with = "rational_str")]
    pub centrality: Rational,
    pub class: VariableClass,
}

/// Absolute row and column sums; `|a + bI|` counts as `|a| + |b|`.
pub fn degrees(m: &CognitiveMap) -> Vec<ConceptDegree> {
    let n = m.len();
    let mut od = vec![Rational::zero(); n];
    let mut id = vec![Rational::zero(); n];
    for (i, j, w) in m.edges() {
        let mag = w.magnitude();
        od[i] += &mag;
        id[j] += &mag;
    }
    (0..n)
        .map(|i| {
            let class = match (od[i].is_positive(), id[i].is_positive()) {
                (true, false) => VariableClass::Transmitter,
                (false, true) => VariableClass::Receiver,
                (true, true) => VariableClass::Ordinary,
                (false, false) => VariableClass::Isolated,
            };
            ConceptDegree {
                concept: m.catalog().name(i).to_string(),
                centrality: &od[i] + &id[i],
                out_degree: od[i].clone(),
                in_degree: id[i].clone(),
                class,
            }
        })
        .collect()
}

/// `12 / ((N-1) N (N+1)) * sum_i (od_i - mean od)^2`.
pub fn hierarchy_index(m: &CognitiveMap) -> Result<Rational> {
    let n = m.len();
    if n < 2 {
        return Err(Error::TooSmall {
            what: "hierarchy index",
            needed: 2,
            found: n,
        });
    }
    let od: Vec<Rational> = degrees(m).into_iter().map(|d| d.out_degree).collect();
    let nn = rational(n as i64);
    let mean = od.iter().fold(Rational::zero(), |a, x| a + x) / &nn;
    let spread = od.iter().fold(Rational::zero(), |a, x| {
        let d = x - &mean;
        a + &d * &d
    });
    let scale = rational(12) / (&nn - Rational::one()) / &nn / (&nn + Rational::one());
    Ok(scale * spread)
}

/// Receivers per transmitter; `None` when the map has no transmitter.
pub fn rt_ratio(m: &CognitiveMap) -> Option<Rational> {
    let d = degrees(m);
    let count = |c: VariableClass| d.iter().filter(|x| x.class == c).count() as i64;
    let t = count(VariableClass::Transmitter);
    (t > 0).then(|| Rational::new(count(VariableClass::Receiver).into(), t.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub concepts: Vec<ConceptDegree>,
    pub edges: usize,
    #[serde(with = "opt_rational_str")]
    pub density_loop_free: Option<Rational>,
    #[serde(with = "opt_rational_str")]
    pub density_with_loops: Option<Rational>,
    #[serde(with = "opt_rational_str")]
    pub hierarchy_index: Option<Rational>,
    #[serde(with = "opt_rational_str")]
    pub receiver_transmitter_ratio: Option<Rational>,
}

pub fn metrics(m: &CognitiveMap) -> MetricsReport {
    MetricsReport {
        concepts: degrees(m),
        edges: m.edges().count(),
        density_loop_free: density(m, DensityConvention::LoopFree).ok(),
        density_with_loops: density(m, DensityConvention::WithLoops).ok(),
        hierarchy_index: hierarchy_index(m).ok(),
        receiver_transmitter_ratio: rt_ratio(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::ConceptCatalog;
    use crate::neutro::{ratio, NeutroMatrix};

    fn socio() -> CognitiveMap {
        CognitiveMap::from_int_rows(
            vec!["C1", "C2", "C3", "C4", "C5"],
            &[
                [0, 0, -1, 0, 1],
                [0, 0, 0, -1, 0],
                [0, -1, 0, 0, -1],
                [-1, 1, 0, 0, 0],
                [0, 0, 0, 1, 0],
            ],
        )
        .unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rational(x)).collect()
    }

    #[test]
    fn socio_economic_degrees() {
        let d = degrees(&socio());
        let od: Vec<Rational> = d.iter().map(|x| x.out_degree.clone()).collect();
        let id: Vec<Rational> = d.iter().map(|x| x.in_degree.clone()).collect();
        let c: Vec<Rational> = d.iter().map(|x| x.centrality.clone()).collect();
        assert_eq!(od, ints(&[2, 1, 2, 2, 1]));
        assert_eq!(id, ints(&[1, 2, 1, 2, 2]));
        assert_eq!(c, ints(&[3, 3, 3, 4, 3]));
        assert!(d.iter().all(|x| x.class == VariableClass::Ordinary));
        assert_eq!(rt_ratio(&socio()), None);
    }

    #[test]
    fn density_conventions() {
        assert_eq!(density(&socio(), DensityConvention::LoopFree).unwrap(), ratio(2, 5));
        assert_eq!(density(&socio(), DensityConvention::WithLoops).unwrap(), ratio(8, 25));
        let full = CognitiveMap::from_int_rows(vec!["a", "b", "c"], &[[0, 1, 1], [1, 0, 1], [1, 1, 0]]).unwrap();
        assert_eq!(density(&full, DensityConvention::LoopFree).unwrap(), rational(1));
        let zero = CognitiveMap::from_int_rows(vec!["a", "b"], &[[0, 0], [0, 0]]).unwrap();
        assert_eq!(density(&zero, DensityConvention::LoopFree).unwrap(), rational(0));
        let one = CognitiveMap::from_int_rows(vec!["a"], &[[0]]).unwrap();
        assert!(density(&one, DensityConvention::LoopFree).is_err());
        assert!(density(&one, DensityConvention::WithLoops).is_ok());
    }

    #[test]
    fn hierarchy_values() {
        assert_eq!(hierarchy_index(&socio()).unwrap(), ratio(3, 25));
        let edge = CognitiveMap::from_int_rows(vec!["a", "b"], &[[0, 1], [0, 0]]).unwrap();
        assert_eq!(hierarchy_index(&edge).unwrap(), rational(1));
        let ring = CognitiveMap::from_int_rows(vec!["a", "b", "c"], &[[0, 1, 0], [0, 0, -1], [1, 0, 0]]).unwrap();
        assert_eq!(hierarchy_index(&ring).unwrap(), rational(0));
        let star = CognitiveMap::from_int_rows(
            vec!["a", "b", "c", "d", "e"],
            &[[0, 1, 1, 1, 1], [0; 5], [0; 5], [0; 5], [0; 5]],
        )
        .unwrap();
        assert_eq!(hierarchy_index(&star).unwrap(), ratio(32, 25));
    }

    #[test]
    fn classes_and_ratio() {
        let star =
            CognitiveMap::from_int_rows(vec!["s", "a", "b", "c"], &[[0, 1, 1, 1], [0; 4], [0; 4], [0; 4]]).unwrap();
        assert_eq!(rt_ratio(&star), Some(rational(3)));
        let chain = CognitiveMap::from_int_rows(vec!["a", "b", "c"], &[[0, 1, 0], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert_eq!(rt_ratio(&chain), Some(rational(1)));
        let d = degrees(&chain);
        assert_eq!(d[0].class, VariableClass::Transmitter);
        assert_eq!(d[1].class, VariableClass::Ordinary);
        assert_eq!(d[2].class, VariableClass::Receiver);
    }

    #[test]
    fn indeterminate_edges_weigh_one() {
        let m = CognitiveMap::new(
            ConceptCatalog::new(["a", "b"]).unwrap(),
            NeutroMatrix::parse_rows(&[["0", "I"], ["-2I", "0"]]).unwrap(),
        )
        .unwrap();
        let d = degrees(&m);
        assert_eq!(d[0].out_degree, rational(1));
        assert_eq!(d[1].out_degree, rational(2));
    }
}
