use super::{CognitiveMap, ConceptCatalog};
use crate::error::{Error, Result};
use crate::neutro::{NeutroMatrix, NeutroValue};

/// How a lagged edge's strength is spread over its dummy chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagOperator {
    /// Every chain edge has magnitude `|s|`.
    Min,
    /// Every chain edge has magnitude `|s|^(1/m)`, so the chain product is `s`.
    Product,
}

/// Replaces each edge with lag `m > 1` by a chain through `m - 1` dummy concepts named `<src>#<k>`.
pub fn expand_time_lags(
    catalog: &ConceptCatalog,
    strengths: &[Vec<f64>],
    lags: &[Vec<u32>],
    op: LagOperator,
) -> Result<CognitiveMap> {
    let n = catalog.len();
    let square = |rows: usize, cols: Option<usize>| rows == n && cols.is_none_or(|c| c == n);
    if !square(strengths.len(), strengths.iter().map(Vec::len).find(|&l| l != n))
        || !square(lags.len(), lags.iter().map(Vec::len).find(|&l| l != n))
    {
        return Err(Error::DimensionMismatch {
            op: "time lags",
            left_rows: strengths.len(),
            left_cols: strengths.first().map_or(0, Vec::len),
            right_rows: lags.len(),
            right_cols: lags.first().map_or(0, Vec::len),
        });
    }

    let mut names = catalog.clone();
    let mut counters = vec![0usize; n];
    let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = strengths[i][j];
            if s == 0.0 {
                continue;
            }
            if !s.is_finite() {
                return Err(Error::Parse {
                    what: "edge strength",
                    input: s.to_string(),
                });
            }
            let m = lags[i][j];
            if m == 0 {
                return Err(Error::InvalidLag {
                    from: catalog.name(i).to_string(),
                    to: catalog.name(j).to_string(),
                    lag: m,
                });
            }
            let magnitude = match op {
                LagOperator::Min => s.abs(),
                LagOperator::Product => s.abs().powf(1.0 / m as f64),
            };
            let mut chain = vec![i];
            for _ in 1..m {
                let name = loop {
                    counters[i] += 1;
                    let candidate = format!("{}#{}", catalog.name(i), counters[i]);
                    if !names.contains(&candidate) {
                        break candidate;
                    }
                };
                chain.push(names.push(name)?);
            }
            chain.push(j);
            let m = m as usize;
            for (k, pair) in chain.windows(2).enumerate() {
                // Odd lags: every edge negative. Even lags: only the first.
                let negative = s < 0.0 && (m % 2 == 1 || k == 0);
                let w = if negative { -magnitude } else { magnitude };
                arcs.push((pair[0], pair[1], w));
            }
        }
    }

    let total = names.len();
    let mut w = NeutroMatrix::zeros(total, total);
    for (a, b, x) in arcs {
        w.set(a, b, NeutroValue::from_f64(x).expect("finite strength"));
    }
    CognitiveMap::new(names, w)
}
