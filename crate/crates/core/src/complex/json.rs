use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{verify_balance, Complex, ComplexKind, Face, ZVertex};
use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::rational::{self, Rational};

pub const COMPLEX_FORMAT_VERSION: &str = "hdx-complex/1";

/// On-disk form of a complex. Weights are exact `p/q` strings; faces are
/// lists of `[v, b]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format_version: String,
    pub kind: ComplexKind,
    #[serde(rename = "H")]
    pub dim: usize,
    pub s: usize,
    pub n: usize,
    /// `[u, v, "p/q"]`
    pub edges: Vec<(usize, usize, String)>,
    pub levels: Vec<LevelDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub dim: usize,
    pub faces: Vec<Vec<[usize; 2]>>,
    pub weights: Vec<String>,
}

pub fn to_json(c: &Complex) -> ComplexDocument {
    let levels = (0..=c.dim())
        .map(|k| {
            let level = &c.levels[k + 1];
            LevelDocument {
                dim: k,
                faces: level
                    .faces()
                    .iter()
                    .map(|f| f.vertices().iter().map(|x| [x.v as usize, x.b as usize]).collect())
                    .collect(),
                weights: level.weights().iter().map(rational::format).collect(),
            }
        })
        .collect();
    ComplexDocument {
        format_version: COMPLEX_FORMAT_VERSION.to_string(),
        kind: c.kind(),
        dim: c.dim(),
        s: c.colors(),
        n: c.graph().n(),
        edges: c
            .graph()
            .edges()
            .iter()
            .map(|e| (e.u, e.v, rational::format(&e.weight)))
            .collect(),
        levels,
    }
}

/// Loads a document and verifies it is a balanced complex.
pub fn from_json(doc: &ComplexDocument) -> Result<Complex> {
    let c = from_json_unchecked(doc)?;
    let report = verify_balance(&c);
    if let Some(v) = report.one_level.or(report.top_sum) {
        return Err(Error::MalformedComplex(format!(
            "weights are not balanced at face {} (expected {}, found {})",
            v.face, v.expected, v.actual
        )));
    }
    Ok(c)
}

/// Loads a document checking only its shape.
pub fn from_json_unchecked(doc: &ComplexDocument) -> Result<Complex> {
    let bad = |msg: String| Error::MalformedComplex(msg);
    if doc.format_version != COMPLEX_FORMAT_VERSION {
        return Err(bad(format!("unsupported format version `{}`", doc.format_version)));
    }
    let edges = doc
        .edges
        .iter()
        .map(|(u, v, w)| {
            rational::parse(w)
                .map(|w| (*u, *v, w))
                .ok_or_else(|| bad(format!("invalid weight `{w}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let graph = WeightedGraph::new(doc.n, edges)?;
    if doc.levels.len() != doc.dim + 1 {
        return Err(bad(format!("expected {} levels, found {}", doc.dim + 1, doc.levels.len())));
    }
    let mut levels: Vec<HashMap<Face, Rational>> = Vec::with_capacity(doc.levels.len());
    for (k, level) in doc.levels.iter().enumerate() {
        if level.dim != k || level.faces.len() != level.weights.len() {
            return Err(bad(format!("level {k} is malformed")));
        }
        let mut map = HashMap::with_capacity(level.faces.len());
        for (face, weight) in level.faces.iter().zip(&level.weights) {
            if face.len() != k + 1 {
                return Err(bad(format!("face of size {} on level {k}", face.len())));
            }
            if face.iter().any(|&[v, b]| v >= doc.n || b == 0 || b > doc.s) {
                return Err(bad(format!("vertex out of range on level {k}")));
            }
            let face = Face::new(face.iter().map(|&[v, b]| ZVertex::new(v, b)).collect())?;
            let weight = rational::parse(weight)
                .filter(rational::is_positive)
                .ok_or_else(|| bad(format!("invalid weight `{weight}`")))?;
            if map.insert(face, weight).is_some() {
                return Err(bad(format!("duplicate face on level {k}")));
            }
        }
        levels.push(map);
    }
    Ok(Complex::from_levels(doc.kind, doc.dim, doc.s, graph, levels))
}
