//! JSON documents describing maps.
//!
//! ```json
//! {"kind": "cognitive", "concepts": ["a", "b"],
//!  "edges": [{"from": "a", "to": "b", "weight": "I"}, {"from": "b", "to": "a", "weight": -1}]}
//! {"kind": "relational", "domain": ["d"], "range": ["r1", "r2"],
//!  "edges": [{"from": "d", "to": "r2", "weight": 0.5}]}
//! ```
//!
//! Pairs without an edge weigh 0. A dense `"weights"` grid (rows follow the first catalog)
//! may replace `"edges"`, which is handier for transcribing printed matrices. Weights may be
//! numbers or strings in the value syntax (`"2-I"`, `"3/2"`, `"0.25"`). Documents are always
//! written in the edge form.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map_core::{CognitiveMap, ConceptCatalog};
use crate::neutro::{NeutroMatrix, NeutroValue};
use crate::relational::RelationalMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Number(serde_json::Number),
}

impl Cell {
    fn value(&self) -> Result<NeutroValue> {
        match self {
            Cell::Text(t) => t.parse(),
            Cell::Number(n) => n.to_string().parse(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub weight: Cell,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDocument {
    Cognitive {
        concepts: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<EdgeDoc>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Vec<Cell>>>,
    },
    Relational {
        domain: Vec<String>,
        range: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<EdgeDoc>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Vec<Cell>>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyMap {
    Cognitive(CognitiveMap),
    Relational(RelationalMap),
}

fn dense(cells: &[Vec<Cell>]) -> Result<NeutroMatrix> {
    NeutroMatrix::from_rows(
        cells
            .iter()
            .map(|r| r.iter().map(Cell::value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

fn sparse(edges: &[EdgeDoc], rows: &ConceptCatalog, cols: &ConceptCatalog) -> Result<NeutroMatrix> {
    let mut grid = vec![vec![NeutroValue::zero(); cols.len()]; rows.len()];
    let mut seen = vec![vec![false; cols.len()]; rows.len()];
    for e in edges {
        let i = rows
            .index_of(&e.from)
            .ok_or_else(|| Error::UnknownConcept(e.from.clone()))?;
        let j = cols
            .index_of(&e.to)
            .ok_or_else(|| Error::UnknownConcept(e.to.clone()))?;
        if std::mem::replace(&mut seen[i][j], true) {
            return Err(Error::Document(format!("edge {} -> {} listed twice", e.from, e.to)));
        }
        grid[i][j] = e.weight.value()?;
    }
    Ok(NeutroMatrix::from_fn(rows.len(), cols.len(), |i, j| grid[i][j].clone()))
}

fn weights(
    edges: Option<&[EdgeDoc]>,
    grid: Option<&[Vec<Cell>]>,
    rows: &ConceptCatalog,
    cols: &ConceptCatalog,
) -> Result<NeutroMatrix> {
    match (edges, grid) {
        (Some(e), None) => sparse(e, rows, cols),
        (None, Some(g)) => dense(g),
        (Some(_), Some(_)) => Err(Error::Document("give either \"edges\" or \"weights\", not both".into())),
        (None, None) => Err(Error::Document("missing \"edges\"".into())),
    }
}

fn edge_list(m: &NeutroMatrix, rows: &ConceptCatalog, cols: &ConceptCatalog) -> Vec<EdgeDoc> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if !v.is_zero() {
                out.push(EdgeDoc {
                    from: rows.name(i).to_string(),
                    to: cols.name(j).to_string(),
                    weight: Cell::Text(v.to_string()),
                });
            }
        }
    }
    out
}

impl MapDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    pub fn from_cognitive(m: &CognitiveMap) -> Self {
        MapDocument::Cognitive {
            concepts: m.catalog().names().to_vec(),
            edges: Some(edge_list(m.weights(), m.catalog(), m.catalog())),
            weights: None,
        }
    }

    pub fn from_relational(m: &RelationalMap) -> Self {
        MapDocument::Relational {
            domain: m.domain().names().to_vec(),
            range: m.range().names().to_vec(),
            edges: Some(edge_list(m.weights(), m.domain(), m.range())),
            weights: None,
        }
    }

    pub fn into_map(self) -> Result<AnyMap> {
        match self {
            MapDocument::Cognitive {
                concepts,
                edges,
                weights: grid,
            } => {
                let catalog = ConceptCatalog::new(concepts)?;
                let w = weights(edges.as_deref(), grid.as_deref(), &catalog, &catalog)?;
                Ok(AnyMap::Cognitive(CognitiveMap::new(catalog, w)?))
            }
            MapDocument::Relational {
                domain,
                range,
                edges,
                weights: grid,
            } => {
                let (d, r) = (ConceptCatalog::new(domain)?, ConceptCatalog::new(range)?);
                let w = weights(edges.as_deref(), grid.as_deref(), &d, &r)?;
                Ok(AnyMap::Relational(RelationalMap::new(d, r, w)?))
            }
        }
    }

    pub fn into_cognitive(self) -> Result<CognitiveMap> {
        match self.into_map()? {
            AnyMap::Cognitive(m) => Ok(m),
            AnyMap::Relational(_) => Err(Error::Document("expected a cognitive map".into())),
        }
    }

    pub fn into_relational(self) -> Result<RelationalMap> {
        match self.into_map()? {
            AnyMap::Relational(m) => Ok(m),
            AnyMap::Cognitive(_) => Err(Error::Document("expected a relational map".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_cells_parse() {
        let doc =
            MapDocument::from_json(r#"{"kind":"cognitive","concepts":["a","b"],"weights":[[0,"I"],[-1.5,"2-I"]]}"#)
                .unwrap();
        let m = doc.into_cognitive().unwrap();
        assert_eq!(m.weight(0, 1), &NeutroValue::i());
        assert_eq!(m.weight(1, 0).to_string(), "-3/2");
        assert_eq!(m.weight(1, 1).to_string(), "2-I");
    }

    #[test]
    fn round_trip_relational() {
        let m = RelationalMap::from_int_rows(vec!["d1", "d2"], vec!["r"], &[[1], [-1]]).unwrap();
        let text = MapDocument::from_relational(&m).to_json();
        let back = MapDocument::from_json(&text).unwrap().into_relational().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(MapDocument::from_json(r#"{"kind":"other"}"#).is_err());
        assert!(
            MapDocument::from_json(r#"{"kind":"cognitive","concepts":["a"],"weights":[["x"]]}"#)
                .unwrap()
                .into_map()
                .is_err()
        );
        assert!(
            MapDocument::from_json(r#"{"kind":"cognitive","concepts":["a"],"weights":[[1,2]]}"#)
                .unwrap()
                .into_map()
                .is_err()
        );
        let rel = r#"{"kind":"relational","domain":["a"],"range":["b"],"weights":[[1]]}"#;
        assert!(MapDocument::from_json(rel).unwrap().into_cognitive().is_err());
    }

    #[test]
    fn edge_form_fills_zeros() {
        let doc = MapDocument::from_json(
            r#"{"kind":"cognitive","concepts":["a","b","c"],
                "edges":[{"from":"c","to":"a","weight":"1+I"},{"from":"a","to":"b","weight":2}]}"#,
        )
        .unwrap();
        let m = doc.into_cognitive().unwrap();
        assert_eq!(m.weight(2, 0).to_string(), "1+I");
        assert_eq!(m.weight(0, 1).to_string(), "2");
        assert_eq!(m.edges().count(), 2);
        let again = MapDocument::from_json(&MapDocument::from_cognitive(&m).to_json()).unwrap();
        assert!(matches!(&again, MapDocument::Cognitive { edges: Some(e), weights: None, .. } if e.len() == 2));
        assert_eq!(again.into_cognitive().unwrap(), m);
    }

    #[test]
    fn edge_form_errors() {
        let bad = [
            r#"{"kind":"cognitive","concepts":["a"],"edges":[{"from":"a","to":"z","weight":1}]}"#,
            r#"{"kind":"cognitive","concepts":["a","b"],"edges":[{"from":"a","to":"b","weight":1},{"from":"a","to":"b","weight":2}]}"#,
            r#"{"kind":"cognitive","concepts":["a"],"edges":[],"weights":[[0]]}"#,
            r#"{"kind":"cognitive","concepts":["a"]}"#,
            r#"{"kind":"relational","domain":["a"],"range":["b"],"edges":[{"from":"b","to":"a","weight":1}]}"#,
        ];
        for text in bad {
            assert!(
                MapDocument::from_json(text).and_then(MapDocument::into_map).is_err(),
                "{text}"
            );
        }
    }
}
