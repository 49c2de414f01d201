//! Maps and rankings from numeric data: similarity-driven edge construction and the
//! alpha-cut ranking of a relational data matrix.

use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::map_core::{CognitiveMap, ConceptCatalog};
use crate::neutro::{NeutroMatrix, NeutroValue};

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSeries {
    pub name: String,
    pub values: Vec<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl NumericSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("numeric series"));
        }
        Ok(NumericSeries {
            name: name.into(),
            values,
            lower: None,
            upper: None,
        })
    }

    pub fn with_thresholds(mut self, lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        if let (Some(l), Some(u)) = (lower, upper) {
            if l >= u {
                return Err(Error::Degenerate(format!("lower threshold {l} not below upper {u}")));
            }
        }
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }
}

/// Projects the series onto `[0, 1]`, saturating at the thresholds when present.
pub fn fuzzify_series(s: &NumericSeries) -> Result<Vec<f64>> {
    let min = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = s.lower.unwrap_or(min);
    let hi = s.upper.unwrap_or(max);
    if hi <= lo {
        return Err(Error::Degenerate(format!(
            "series {:?} has no spread to normalise over",
            s.name
        )));
    }
    Ok(s.values
        .iter()
        .map(|&v| {
            if s.upper.is_some_and(|u| v >= u) {
                1.0
            } else if s.lower.is_some_and(|l| v <= l) {
                0.0
            } else {
                ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMode {
    Direct,
    /// Compares `x` against `1 - y`.
    Inverse,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMetric {
    /// `sum |d| / n`
    #[default]
    MeanAbs,
    /// `sqrt(sum d^2)`, not divided by `n`.
    Rms,
}

/// `1 - distance` between two membership vectors.
pub fn similarity(x: &[f64], y: &[f64], mode: SimilarityMode, metric: DistanceMetric) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::StateLength {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Empty("membership vector"));
    }
    let d = x.iter().zip(y).map(|(a, b)| match mode {
        SimilarityMode::Direct => (a - b).abs(),
        SimilarityMode::Inverse => (a - (1.0 - b)).abs(),
    });
    let distance = match metric {
        DistanceMetric::MeanAbs => d.sum::<f64>() / x.len() as f64,
        DistanceMetric::Rms => d.map(|v| v * v).sum::<f64>().sqrt(),
    };
    Ok(1.0 - distance)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeEvidence {
    pub from: String,
    pub to: String,
    pub direct: f64,
    pub inverse: f64,
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataMap {
    pub map: CognitiveMap,
    pub evidence: Vec<EdgeEvidence>,
    /// Similarity is symmetric, so every edge has its reverse with the same weight.
    pub symmetric: bool,
}

/// Edge `+S` when direct similarity reaches the threshold and beats the inverse one,
/// `-S` in the mirrored case, nothing on a tie or below the threshold.
pub fn infer_edges_from_data(series: &[NumericSeries], edge_threshold: f64, metric: DistanceMetric) -> Result<DataMap> {
    if series.is_empty() {
        return Err(Error::Empty("series list"));
    }
    if !(edge_threshold > 0.0 && edge_threshold <= 1.0) {
        return Err(Error::Degenerate(format!(
            "edge threshold {edge_threshold} outside (0, 1]"
        )));
    }
    let len = series[0].values.len();
    if let Some(bad) = series.iter().find(|s| s.values.len() != len) {
        return Err(Error::StateLength {
            expected: len,
            found: bad.values.len(),
        });
    }
    let catalog = ConceptCatalog::new(series.iter().map(|s| s.name.clone()))?;
    let memberships = series.iter().map(fuzzify_series).collect::<Result<Vec<_>>>()?;
    let n = series.len();
    let mut w = NeutroMatrix::zeros(n, n);
    let mut evidence = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let direct = similarity(&memberships[i], &memberships[j], SimilarityMode::Direct, metric)?;
            let inverse = similarity(&memberships[i], &memberships[j], SimilarityMode::Inverse, metric)?;
            let weight = if direct >= edge_threshold && direct > inverse {
                Some(direct)
            } else if inverse >= edge_threshold && inverse > direct {
                Some(-inverse)
            } else {
                None
            };
            if let Some(x) = weight {
                w.set(i, j, NeutroValue::from_f64(x).expect("finite similarity"));
            }
            evidence.push(EdgeEvidence {
                from: series[i].name.clone(),
                to: series[j].name.clone(),
                direct,
                inverse,
                weight,
            });
        }
    }
    Ok(DataMap {
        map: CognitiveMap::new(catalog, w)?,
        evidence,
        symmetric: true,
    })
}

/// Rows are effects or periods, columns attributes.
#[derive(Clone, Debug, PartialEq)]
pub struct RawRelationalData {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Raw values are divided by this to form the average matrix.
    pub divisor: f64,
}

impl RawRelationalData {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, values: Vec<Vec<f64>>, divisor: f64) -> Result<Self> {
        if values.len() != row_labels.len() {
            return Err(Error::StateLength {
                expected: row_labels.len(),
                found: values.len(),
            });
        }
        for (r, row) in values.iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(Error::RaggedMatrix {
                    row: r,
                    expected: col_labels.len(),
                    found: row.len(),
                });
            }
        }
        if divisor.is_nan() || divisor <= 0.0 {
            return Err(Error::Degenerate(format!("divisor {divisor} must be positive")));
        }
        Ok(RawRelationalData {
            row_labels,
            col_labels,
            values,
            divisor,
        })
    }

    /// Header row of column labels (first cell ignored), then one labelled row per line.
    pub fn from_csv<R: Read>(reader: R, divisor: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let csv_err = |e: csv::Error| Error::Document(e.to_string());
        let headers = rdr.headers().map_err(csv_err)?.clone();
        let col_labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut row_labels = Vec::new();
        let mut values = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(csv_err)?;
            let mut cells = record.iter();
            row_labels.push(cells.next().unwrap_or_default().to_string());
            values.push(
                cells
                    .map(|c| {
                        c.parse::<f64>().map_err(|_| Error::Parse {
                            what: "decimal",
                            input: c.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        RawRelationalData::new(row_labels, col_labels, values, divisor)
    }

    pub fn average(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|r| r.iter().map(|v| v / self.divisor).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationRule {
    /// `sqrt(mean(d^2) - mean(d)^2)` with `d = |a - mu|`.
    #[default]
    AbsoluteDeviation,
    /// Population standard deviation.
    Standard,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnStats {
    pub mean: Vec<f64>,
    pub deviation: Vec<f64>,
    pub rule: DeviationRule,
}

pub fn column_stats(d: &RawRelationalData) -> Result<ColumnStats> {
    column_stats_with(d, DeviationRule::default())
}

pub fn column_stats_with(d: &RawRelationalData, rule: DeviationRule) -> Result<ColumnStats> {
    let m = d.values.len();
    if m < 2 {
        return Err(Error::TooSmall {
            what: "column statistics",
            needed: 2,
            found: m,
        });
    }
    let avg = d.average();
    let mf = m as f64;
    let mut mean = Vec::with_capacity(d.col_labels.len());
    let mut deviation = Vec::with_capacity(d.col_labels.len());
    for j in 0..d.col_labels.len() {
        let mu = avg.iter().map(|r| r[j]).sum::<f64>() / mf;
        let sigma = match rule {
            DeviationRule::AbsoluteDeviation => {
                let dev: Vec<f64> = avg.iter().map(|r| (r[j] - mu).abs()).collect();
                let m1 = dev.iter().sum::<f64>() / mf;
                let m2 = dev.iter().map(|x| x * x).sum::<f64>() / mf;
                (m2 - m1 * m1).max(0.0).sqrt()
            }
            DeviationRule::Standard => (avg.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / mf).sqrt(),
        };
        mean.push(mu);
        deviation.push(sigma);
    }
    Ok(ColumnStats { mean, deviation, rule })
}

/// Linear ramp across `mu - alpha*sigma .. mu + alpha*sigma`; a step at `mu` when the band is empty.
pub fn alpha_fuzzify(stats: &ColumnStats, avg: &[Vec<f64>], alpha: f64) -> Result<Vec<Vec<f64>>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    avg.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != stats.mean.len() {
                return Err(Error::RaggedMatrix {
                    row: r,
                    expected: stats.mean.len(),
                    found: row.len(),
                });
            }
            Ok(row
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    let mu = stats.mean[j];
                    let half = alpha * stats.deviation[j];
                    if half == 0.0 {
                        if a > mu {
                            1.0
                        } else if a < mu {
                            0.0
                        } else {
                            0.5
                        }
                    } else if a <= mu - half {
                        0.0
                    } else if a >= mu + half {
                        1.0
                    } else {
                        (a - (mu - half)) / (2.0 * half)
                    }
                })
                .collect())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowMembership {
    pub row_sums: Vec<f64>,
    pub grades: Vec<f64>,
    /// All row sums equal; every grade is reported as 1.
    pub degenerate: bool,
}

/// Row sums rescaled so the smallest maps to 0 and the largest to 1.
pub fn row_membership(fuzzy: &[Vec<f64>]) -> Result<RowMembership> {
    grades_of(fuzzy.iter().map(|r| r.iter().sum()).collect())
}

pub fn grades_of(row_sums: Vec<f64>) -> Result<RowMembership> {
    if row_sums.is_empty() {
        return Err(Error::Empty("fuzzy matrix"));
    }
    let min = row_sums.iter().copied().fold(f64::INFINITY, f64::min);
    let max = row_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = max - min == 0.0;
    let grades = row_sums
        .iter()
        .map(|r| if degenerate { 1.0 } else { (r - min) / (max - min) })
        .collect();
    Ok(RowMembership {
        row_sums,
        grades,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaReport {
    /// `None` for the combined report.
    pub alpha: Option<f64>,
    pub fuzzy: Vec<Vec<f64>>,
    pub membership: RowMembership,
    /// Rows with the highest grade, ties included.
    pub winners: Vec<usize>,
}

impl AlphaReport {
    fn build(alpha: Option<f64>, fuzzy: Vec<Vec<f64>>) -> Result<Self> {
        let membership = row_membership(&fuzzy)?;
        let best = membership.grades.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners = (0..membership.grades.len())
            .filter(|&i| (membership.grades[i] - best).abs() <= 1e-12)
            .collect();
        Ok(AlphaReport {
            alpha,
            fuzzy,
            membership,
            winners,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub stats: ColumnStats,
    pub per_alpha: Vec<AlphaReport>,
    pub combined: AlphaReport,
}

/// One report per alpha plus the report of their entrywise sum.
pub fn alpha_sweep(d: &RawRelationalData, grid: &[f64], rule: DeviationRule, exec: Execution) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::Empty("alpha grid"));
    }
    let stats = column_stats_with(d, rule)?;
    let avg = d.average();
    let per_alpha = exec
        .map(grid, |&a| AlphaReport::build(Some(a), alpha_fuzzify(&stats, &avg, a)?))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![vec![0.0; d.col_labels.len()]; d.row_labels.len()];
    for r in &per_alpha {
        for (t, f) in total.iter_mut().zip(&r.fuzzy) {
            for (x, y) in t.iter_mut().zip(f) {
                *x += y;
            }
        }
    }
    Ok(SweepReport {
        row_labels: d.row_labels.clone(),
        col_labels: d.col_labels.clone(),
        stats,
        per_alpha,
        combined: AlphaReport::build(None, total)?,
    })
}

/// `alpha,<row labels...>` then one line of grades per alpha.
pub fn grade_series_csv(s: &SweepReport) -> String {
    let mut out = format!("alpha,{}\n", s.row_labels.join(","));
    for r in &s.per_alpha {
        let grades: Vec<String> = r.membership.grades.iter().map(|g| format!("{g:.6}")).collect();
        out.push_str(&format!("{},{}\n", r.alpha.unwrap_or(f64::NAN), grades.join(",")));
    }
    out
}

/// `0.1, 0.2, ..., 1.0`.
pub fn default_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}
