use super::{CognitiveMap, ConceptCatalog, StateVector};
use crate::error::{Error, Result};
use crate::neutro::{NeutroMatrix, NeutroValue, StateSymbol};

/// Hebbian storage of a state cycle: `sum_i X_i^T X_{i+1}` over bipolar states, wrapping around.
///
/// The diagonal is kept, so the result usually fails the zero-diagonal check.
pub fn tam_encode(catalog: &ConceptCatalog, cycle: &[StateVector]) -> Result<CognitiveMap> {
    if cycle.is_empty() {
        return Err(Error::Empty("cycle to encode"));
    }
    let n = catalog.len();
    let mut bipolar = Vec::with_capacity(cycle.len());
    for s in cycle {
        if s.len() != n {
            return Err(Error::StateLength {
                expected: n,
                found: s.len(),
            });
        }
        if !s.is_crisp() {
            return Err(Error::IndeterminateSeed);
        }
        bipolar.push(
            s.symbols()
                .iter()
                .map(|&x| if x == StateSymbol::On { 1i64 } else { -1 })
                .collect::<Vec<_>>(),
        );
    }
    let mut sums = vec![0i64; n * n];
    for (k, x) in bipolar.iter().enumerate() {
        let y = &bipolar[(k + 1) % bipolar.len()];
        for a in 0..n {
            for b in 0..n {
                sums[a * n + b] += x[a] * y[b];
            }
        }
    }
    let w = NeutroMatrix::from_fn(n, n, |a, b| NeutroValue::int(sums[a * n + b]));
    CognitiveMap::new(catalog.clone(), w)
}
