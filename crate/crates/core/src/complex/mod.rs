//! Pure weighted simplicial complexes on `V(G) x [s]`.
//!
//! A complex stores every level explicitly, from the empty face (level -1)
//! up to the top dimension `H`, each with a canonical face order, an index
//! map and exact weights.

pub mod json;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::rational::{self, Rational};

pub use json::{from_json, from_json_unchecked, to_json, ComplexDocument, COMPLEX_FORMAT_VERSION};

/// Default refusal threshold for the predicted number of top-level faces.
pub const DEFAULT_SIZE_CAP: u128 = 10_000_000;

/// A vertex `(v, b)` of the product: graph vertex `v`, color `b` in `1..=s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZVertex {
    pub v: u32,
    pub b: u32,
}

impl ZVertex {
    pub fn new(v: usize, b: usize) -> Self {
        ZVertex { v: v as u32, b: b as u32 }
    }
}

impl fmt::Display for ZVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.b)
    }
}

/// A face: a sorted set of distinct vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(Vec<ZVertex>);

/// Serialized as a list of `[v, b]` pairs, matching the complex document.
impl Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|x| [x.v, x.b]))
    }
}

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Sorts into canonical order; rejects repeated vertices.
    pub fn new(mut vertices: Vec<ZVertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("face has a repeated vertex".into()));
        }
        Ok(Face(vertices))
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        Face::new(pairs.iter().map(|&(v, b)| ZVertex::new(v, b)).collect())
    }

    fn from_sorted(vertices: Vec<ZVertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[ZVertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, x: &ZVertex) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|x| other.contains(x))
    }

    pub fn with_vertex(&self, x: ZVertex) -> Face {
        let mut out = self.0.clone();
        match out.binary_search(&x) {
            Ok(_) => {}
            Err(pos) => out.insert(pos, x),
        }
        Face(out)
    }

    pub fn without_index(&self, i: usize) -> Face {
        let mut out = self.0.clone();
        out.remove(i);
        Face(out)
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut out: Vec<ZVertex> = self.0.iter().chain(&other.0).copied().collect();
        out.sort_unstable();
        out.dedup();
        Face(out)
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().filter(|x| !other.contains(x)).copied().collect())
    }

    /// The projection onto `[s]`.
    pub fn colors(&self) -> Vec<u32> {
        self.0.iter().map(|x| x.b).sorted_unstable().collect()
    }

    /// Applies a color permutation given as `perm[b - 1] = pi(b)`.
    pub fn permute_colors(&self, perm: &[u32]) -> Face {
        let mut out: Vec<ZVertex> = self
            .0
            .iter()
            .map(|x| ZVertex { v: x.v, b: perm[x.b as usize - 1] })
            .collect();
        out.sort_unstable();
        Face(out)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Accepts `v:b,v:b,...` or the display form `{(v,b),(v,b)}`.
impl FromStr for Face {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse face `{text}`"));
        let body = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() {
            return Ok(Face::empty());
        }
        let pairs: Vec<(usize, usize)> = if body.contains(':') {
            body.split(',')
                .map(|p| {
                    let (v, b) = p.split_once(':').ok_or_else(bad)?;
                    Ok((v.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
                })
                .collect::<Result<_>>()?
        } else {
            let numbers: Vec<usize> = body
                .split([',', '(', ')'])
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if !numbers.len().is_multiple_of(2) {
                return Err(bad());
            }
            numbers.chunks(2).map(|p| (p[0], p[1])).collect()
        };
        Face::from_pairs(&pairs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Z,
    Q,
}

impl FromStr for ComplexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(ComplexKind::Z),
            "q" => Ok(ComplexKind::Q),
            other => Err(Error::InvalidParameter(format!("unknown complex kind `{other}`"))),
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexKind::Z => "z",
            ComplexKind::Q => "q",
        })
    }
}

/// Permutation orbit of a face under recoloring.
///
/// `Split { u, v, j, k }` has `j` vertices over `u` and `k - j` over `v`,
/// with `u < v`. `Pure { u, k }` has all `k` vertices over `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceClass {
    Split { u: usize, v: usize, j: usize, k: usize },
    Pure { u: usize, k: usize },
}

impl FaceClass {
    /// Split class with `j` vertices over `a`, normalized so `u < v`.
    pub fn split(a: usize, b: usize, j: usize, k: usize) -> Self {
        if a < b {
            FaceClass::Split { u: a, v: b, j, k }
        } else {
            FaceClass::Split { u: b, v: a, j: k - j, k }
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            FaceClass::Split { k, .. } | FaceClass::Pure { k, .. } => k,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, FaceClass::Pure { .. })
    }
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FaceClass::Split { u, v, j, k } => write!(f, "({},{})_({},{})", j, k - j, u, v),
            FaceClass::Pure { u, k } => write!(f, "({})_{}", k, u),
        }
    }
}

/// Faces of one dimension in canonical order.
#[derive(Clone, Debug, Default)]
pub struct Level {
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    weights: Vec<Rational>,
}

impl Level {
    fn from_map(map: HashMap<Face, Rational>) -> Self {
        let mut entries: Vec<(Face, Rational)> = map.into_iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let (faces, weights): (Vec<Face>, Vec<Rational>) = entries.into_iter().unzip();
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Level { faces, index, weights }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.index.get(face).copied()
    }

    pub fn weight(&self, face: &Face) -> Option<&Rational> {
        self.index_of(face).map(|i| &self.weights[i])
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Face, &Rational)> {
        self.faces.iter().zip(&self.weights)
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub size_cap: u128,
    /// Allows Q on weighted graphs: split top faces get `w_G`, pure get 1.
    pub weighted_q: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { size_cap: DEFAULT_SIZE_CAP, weighted_q: false }
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    kind: ComplexKind,
    dim: usize,
    colors: usize,
    graph: WeightedGraph,
    /// `levels[k + 1]` holds the faces of dimension `k`.
    levels: Vec<Level>,
    link_of: Option<Face>,
}

impl Complex {
    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    /// Top dimension `H`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Color count `s`.
    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// The face this complex is the link of, if any.
    pub fn link_of(&self) -> Option<&Face> {
        self.link_of.as_ref()
    }

    pub fn level(&self, k: isize) -> Result<&Level> {
        self.check_level(k, -1, self.dim as isize)?;
        Ok(&self.levels[(k + 1) as usize])
    }

    pub fn faces(&self, k: isize) -> Result<&[Face]> {
        Ok(self.level(k)?.faces())
    }

    pub fn weight(&self, face: &Face) -> Option<&Rational> {
        let k = face.dim();
        if k > self.dim as isize {
            return None;
        }
        self.levels[(k + 1) as usize].weight(face)
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.weight(face).is_some()
    }

    pub fn face_count(&self) -> usize {
        self.levels.iter().skip(1).map(Level::len).sum()
    }

    pub(crate) fn check_level(&self, k: isize, min: isize, max: isize) -> Result<()> {
        if k < min || k > max {
            Err(Error::LevelOutOfRange { level: k, min, max })
        } else {
            Ok(())
        }
    }

    fn require(&self, face: &Face) -> Result<()> {
        if self.contains(face) {
            Ok(())
        } else {
            Err(Error::FaceNotInComplex(face.to_string()))
        }
    }

    /// Assembles a complex from top faces, propagating weights down by exact
    /// summation.
    fn from_top(
        kind: ComplexKind,
        dim: usize,
        colors: usize,
        graph: WeightedGraph,
        top: HashMap<Face, Rational>,
        link_of: Option<Face>,
    ) -> Self {
        let mut maps: Vec<HashMap<Face, Rational>> = vec![HashMap::new(); dim + 2];
        maps[dim + 1] = top;
        for slot in (1..=dim + 1).rev() {
            let (lower, upper) = maps.split_at_mut(slot);
            let below = &mut lower[slot - 1];
            for (face, w) in &upper[0] {
                for i in 0..face.len() {
                    *below.entry(face.without_index(i)).or_insert_with(Rational::zero) += w;
                }
            }
        }
        let levels = maps.into_iter().map(Level::from_map).collect();
        Complex { kind, dim, colors, graph, levels, link_of }
    }

    /// Assembles from explicit levels without checking balance.
    pub(crate) fn from_levels(
        kind: ComplexKind,
        dim: usize,
        colors: usize,
        graph: WeightedGraph,
        levels: Vec<HashMap<Face, Rational>>,
    ) -> Self {
        let mut all = Vec::with_capacity(levels.len() + 1);
        let empty_weight = levels
            .first()
            .map(|l| l.values().fold(Rational::zero(), |acc, w| acc + w))
            .unwrap_or_else(Rational::zero);
        all.push(Level::from_map(HashMap::from([(Face::empty(), empty_weight)])));
        all.extend(levels.into_iter().map(Level::from_map));
        Complex { kind, dim, colors, graph, levels: all, link_of: None }
    }
}

/// Predicted number of top-level faces for the given parameters.
pub fn predicted_top_faces(kind: ComplexKind, g: &WeightedGraph, dim: usize, colors: usize) -> u128 {
    let color_sets = rational::binomial(colors, dim + 1);
    let color_sets: u128 = u128::try_from(color_sets).unwrap_or(u128::MAX);
    let split_masks = (1u128 << (dim + 1).min(120)).saturating_sub(2);
    let split = (g.edge_count() as u128)
        .saturating_mul(color_sets)
        .saturating_mul(split_masks);
    match kind {
        ComplexKind::Z => split,
        ComplexKind::Q => split.saturating_add((g.n() as u128).saturating_mul(color_sets)),
    }
}

fn validate_params(g: &WeightedGraph, dim: usize, colors: usize) -> Result<()> {
    if dim < 1 {
        return Err(Error::InvalidParameter(format!("H must be >= 1, got {dim}")));
    }
    if colors < dim + 1 {
        return Err(Error::InvalidParameter(format!("s must be >= H+1 = {}, got {colors}", dim + 1)));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidParameter("graph has no edges".into()));
    }
    if colors > u32::MAX as usize || g.n() > u32::MAX as usize {
        return Err(Error::InvalidParameter("vertex or color ids exceed 32 bits".into()));
    }
    Ok(())
}

pub fn build_z(g: &WeightedGraph, dim: usize, colors: usize) -> Result<Complex> {
    build(ComplexKind::Z, g, dim, colors, &BuildOptions::default())
}

pub fn build_q(g: &WeightedGraph, dim: usize, colors: usize) -> Result<Complex> {
    build(ComplexKind::Q, g, dim, colors, &BuildOptions::default())
}

/// Builds Z or Q.
///
/// Top faces are `(H+1)`-subsets of `V(G) x [s]` with distinct colors whose
/// graph vertices lie in one edge. Z requires both endpoints present and
/// weighs a face with `j` vertices over `u` by `w_G(u,v) / C(H-1, j-1)`;
/// Q also admits faces over a single vertex and weighs every top face 1.
pub fn build(
    kind: ComplexKind,
    g: &WeightedGraph,
    dim: usize,
    colors: usize,
    options: &BuildOptions,
) -> Result<Complex> {
    validate_params(g, dim, colors)?;
    if kind == ComplexKind::Q && !options.weighted_q && !g.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    let predicted = predicted_top_faces(kind, g, dim, colors);
    if predicted > options.size_cap {
        return Err(Error::SizeCap { predicted, cap: options.size_cap });
    }

    let size = dim + 1;
    let denominators: Vec<BigInt> = (0..=size)
        .map(|j| if j == 0 { BigInt::one() } else { rational::binomial(dim - 1, j - 1) })
        .collect();
    let mut top = HashMap::with_capacity(predicted as usize);
    for color_set in (1..=colors as u32).combinations(size) {
        for edge in g.edges() {
            for mask in 1u32..(1 << size) - 1 {
                let j = mask.count_ones() as usize;
                let vertices = color_set
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        let v = if mask & (1 << i) != 0 { edge.u } else { edge.v };
                        ZVertex { v: v as u32, b }
                    })
                    .sorted_unstable()
                    .collect();
                let weight = match kind {
                    ComplexKind::Z => &edge.weight / Rational::from_integer(denominators[j].clone()),
                    ComplexKind::Q => edge.weight.clone(),
                };
                top.insert(Face::from_sorted(vertices), weight);
            }
        }
        if kind == ComplexKind::Q {
            for u in (0..g.n()).filter(|&u| !g.neighbors(u).is_empty()) {
                let vertices = color_set.iter().map(|&b| ZVertex { v: u as u32, b }).collect();
                top.insert(Face::from_sorted(vertices), Rational::one());
            }
        }
    }
    Ok(Complex::from_top(kind, dim, colors, g.clone(), top, None))
}

/// Orbit class of a face under color permutations.
pub fn classify(c: &Complex, face: &Face) -> Result<FaceClass> {
    c.require(face)?;
    classify_vertices(c.graph(), face)
}

pub(crate) fn classify_vertices(g: &WeightedGraph, face: &Face) -> Result<FaceClass> {
    let k = face.len();
    let mut graph_vertices: Vec<usize> = face.vertices().iter().map(|x| x.v as usize).collect();
    graph_vertices.sort_unstable();
    graph_vertices.dedup();
    match graph_vertices.as_slice() {
        [u] => Ok(FaceClass::Pure { u: *u, k }),
        [u, v] if g.edge_index(*u, *v).is_some() => {
            let j = face.vertices().iter().filter(|x| x.v as usize == *u).count();
            Ok(FaceClass::Split { u: *u, v: *v, j, k })
        }
        _ => Err(Error::InvalidParameter(format!("face {face} is not over a single edge or vertex"))),
    }
}

/// The link of `face`, materialized as an independent complex of dimension
/// `H - dim(face) - 1` with inherited weights.
pub fn link(c: &Complex, face: &Face) -> Result<Complex> {
    c.require(face)?;
    let size = face.len();
    if size + 1 > c.dim {
        return Err(Error::InvalidParameter(format!(
            "link of a {}-dimensional face in a {}-dimensional complex has no edges",
            face.dim(),
            c.dim
        )));
    }
    let candidates: Vec<ZVertex> = c.levels[1]
        .faces()
        .iter()
        .map(|x| x.vertices()[0])
        .filter(|x| !face.contains(x) && c.contains(&face.with_vertex(*x)))
        .collect();
    let link_dim = c.dim - size;
    let mut levels: Vec<HashMap<Face, Rational>> = vec![HashMap::new(); link_dim + 1];
    // Depth-first over increasing candidate subsets, pruned by downward closure.
    let mut stack: Vec<(Vec<ZVertex>, usize)> = vec![(Vec::new(), 0)];
    while let Some((chosen, next)) = stack.pop() {
        for i in next..candidates.len() {
            let mut extended = chosen.clone();
            extended.push(candidates[i]);
            let link_face = Face::new(extended.clone()).expect("distinct candidates");
            let Some(w) = c.weight(&face.union(&link_face)) else {
                continue;
            };
            levels[link_face.len() - 1].insert(link_face, w.clone());
            if extended.len() < link_dim + 1 {
                stack.push((extended, i + 1));
            }
        }
    }
    let mut out = Complex::from_levels(c.kind, link_dim, c.colors, c.graph.clone(), levels);
    out.levels[0] = Level::from_map(HashMap::from([(Face::empty(), c.weight(face).unwrap().clone())]));
    out.link_of = Some(match &c.link_of {
        Some(outer) => outer.union(face),
        None => face.clone(),
    });
    Ok(out)
}

/// The weighted graph `(X(0), X(1), m)`. Vertex `i` is the `i`-th face of
/// level 0 in canonical order.
pub fn one_skeleton(c: &Complex) -> Result<WeightedGraph> {
    let vertices = c.level(0)?;
    let edges = c.level(1)?;
    WeightedGraph::new(
        vertices.len(),
        edges.iter().map(|(e, w)| {
            let a = vertices.index_of(&Face::from_sorted(vec![e.vertices()[0]])).expect("closed");
            let b = vertices.index_of(&Face::from_sorted(vec![e.vertices()[1]])).expect("closed");
            (a, b, w.clone())
        }),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalanceViolation {
    pub face: Face,
    pub level: isize,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BalanceReport {
    /// First face whose weight differs from the sum over its cofaces.
    pub one_level: Option<BalanceViolation>,
    /// First face whose weight differs from `(H-k)!` times the total weight
    /// of the top faces containing it.
    pub top_sum: Option<BalanceViolation>,
}

impl BalanceReport {
    pub fn ok(&self) -> bool {
        self.one_level.is_none() && self.top_sum.is_none()
    }
}

/// Checks the balance condition exactly, both level by level and against
/// the direct top-face formula. Faces are scanned by increasing level, then
/// in canonical order.
pub fn verify_balance(c: &Complex) -> BalanceReport {
    let mut report = BalanceReport::default();
    let h = c.dim as isize;

    for k in -1..h {
        let mut sums: HashMap<&Face, Rational> = HashMap::new();
        let lower = &c.levels[(k + 1) as usize];
        let upper = &c.levels[(k + 2) as usize];
        for (tau, w) in upper.iter() {
            for i in 0..tau.len() {
                let sigma = tau.without_index(i);
                if let Some(idx) = lower.index_of(&sigma) {
                    *sums.entry(&lower.faces[idx]).or_insert_with(Rational::zero) += w;
                }
            }
        }
        let violation = lower.iter().find_map(|(sigma, m)| {
            let sum = sums.get(sigma).cloned().unwrap_or_else(Rational::zero);
            (sum != *m).then(|| BalanceViolation {
                face: sigma.clone(),
                level: k,
                expected: rational::format(&sum),
                actual: rational::format(m),
            })
        });
        if violation.is_some() {
            report.one_level = violation;
            break;
        }
    }

    let mut top_sums: HashMap<Face, Rational> = HashMap::new();
    for (tau, w) in c.levels[(h + 1) as usize].iter() {
        let n = tau.len();
        for mask in 0u64..(1 << n) {
            let sub: Vec<ZVertex> =
                (0..n).filter(|i| mask & (1 << i) != 0).map(|i| tau.vertices()[i]).collect();
            *top_sums.entry(Face::from_sorted(sub)).or_insert_with(Rational::zero) += w;
        }
    }
    'levels: for k in -1..=h {
        let scale = Rational::from_integer(rational::factorial((h - k) as usize));
        for (sigma, m) in c.levels[(k + 1) as usize].iter() {
            let total = top_sums.get(sigma).cloned().unwrap_or_else(Rational::zero);
            let expected = &scale * total;
            if expected != *m {
                report.top_sum = Some(BalanceViolation {
                    face: sigma.clone(),
                    level: k,
                    expected: rational::format(&expected),
                    actual: rational::format(m),
                });
                break 'levels;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_graph, parse_edge_list, GraphKind};
    use crate::rational::{int, ratio};

    fn k2() -> WeightedGraph {
        parse_edge_list("0 1").unwrap()
    }

    fn f(pairs: &[(usize, usize)]) -> Face {
        Face::from_pairs(pairs).unwrap()
    }

    #[test]
    fn single_edge_h2_s4_counts() {
        let z = build_z(&k2(), 2, 4).unwrap();
        assert_eq!(z.faces(2).unwrap().len(), 24);
        assert!(z.level(2).unwrap().weights().iter().all(|w| *w == int(1)));
        let q = build_q(&k2(), 2, 4).unwrap();
        assert_eq!(q.faces(2).unwrap().len(), 32);
        assert!(q.level(2).unwrap().weights().iter().all(|w| *w == int(1)));
        assert!(z.faces(2).unwrap().iter().all(|t| q.contains(t)));
    }

    #[test]
    fn top_weight_h3() {
        let z = build_z(&k2(), 3, 6).unwrap();
        let face = f(&[(0, 1), (0, 2), (1, 3), (1, 4)]);
        assert_eq!(z.weight(&face), Some(&ratio(1, 2)));
        let pure = f(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(!z.contains(&pure));
    }

    #[test]
    fn classify_examples() {
        let z = build_z(&k2(), 2, 4).unwrap();
        assert_eq!(
            classify(&z, &f(&[(0, 1), (1, 2), (1, 3)])).unwrap(),
            FaceClass::Split { u: 0, v: 1, j: 1, k: 3 }
        );
        assert_eq!(classify(&z, &f(&[(0, 1), (0, 4)])).unwrap(), FaceClass::Pure { u: 0, k: 2 });
        assert!(matches!(
            classify(&z, &f(&[(0, 1), (0, 2), (0, 3)])),
            Err(Error::FaceNotInComplex(_))
        ));
    }

    #[test]
    fn parameter_gates() {
        let g = k2();
        assert!(matches!(build_z(&g, 2, 2), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_z(&g, 0, 2), Err(Error::InvalidParameter(_))));
        let small = BuildOptions { size_cap: 10, weighted_q: false };
        assert!(matches!(
            build(ComplexKind::Z, &g, 2, 4, &small),
            Err(Error::SizeCap { predicted: 24, cap: 10 })
        ));
        let weighted = parse_edge_list("0 1 2").unwrap();
        assert!(matches!(build_q(&weighted, 2, 4), Err(Error::NonUnitWeights)));
        let opts = BuildOptions { weighted_q: true, ..BuildOptions::default() };
        let q = build(ComplexKind::Q, &weighted, 2, 4, &opts).unwrap();
        assert!(q.contains(&f(&[(0, 1), (0, 2), (0, 3)])));
    }

    #[test]
    fn link_of_empty_face_is_the_complex() {
        let z = build_z(&gen_graph(GraphKind::Cycle, 4, None, 0).unwrap(), 2, 4).unwrap();
        let l = link(&z, &Face::empty()).unwrap();
        for k in -1..=2 {
            assert_eq!(l.faces(k).unwrap(), z.faces(k).unwrap());
            assert_eq!(l.level(k).unwrap().weights(), z.level(k).unwrap().weights());
        }
    }

    #[test]
    fn link_vertex_sets() {
        let g = gen_graph(GraphKind::Cycle, 5, None, 0).unwrap();
        let z = build_z(&g, 3, 6).unwrap();
        // split face over edge {0,1}
        let sigma = f(&[(0, 1), (1, 2)]);
        let l = link(&z, &sigma).unwrap();
        let expected: Vec<Face> = [0usize, 1]
            .iter()
            .flat_map(|&v| (3..=6).map(move |b| f(&[(v, b)])))
            .sorted()
            .collect();
        assert_eq!(l.faces(0).unwrap(), expected.as_slice());
        assert_eq!(l.dim(), 1);
        // pure face over vertex 0, neighbors 1 and 4
        let sigma = f(&[(0, 1), (0, 2)]);
        let l = link(&z, &sigma).unwrap();
        let expected: Vec<Face> = [0usize, 1, 4]
            .iter()
            .flat_map(|&v| (3..=6).map(move |b| f(&[(v, b)])))
            .sorted()
            .collect();
        assert_eq!(l.faces(0).unwrap(), expected.as_slice());
        assert!(link(&z, &f(&[(0, 1), (1, 2), (1, 3)])).is_err());
    }

    #[test]
    fn skeleton_degrees_are_vertex_weights() {
        let g = parse_edge_list("0 1 1/2\n1 2 3\n2 3\n3 0 2/5").unwrap();
        let z = build_z(&g, 3, 5).unwrap();
        let sk = one_skeleton(&z).unwrap();
        for (i, w) in z.level(0).unwrap().weights().iter().enumerate() {
            assert_eq!(&sk.weighted_degree(i), w);
        }
    }

    #[test]
    fn h1_skeleton_edges() {
        let g = gen_graph(GraphKind::Cycle, 4, None, 0).unwrap();
        let z = build_z(&g, 1, 3).unwrap();
        for e in z.faces(1).unwrap() {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            assert_ne!(a.b, b.b);
            assert!(g.edge_index(a.v as usize, b.v as usize).is_some());
        }
        assert_eq!(z.faces(1).unwrap().len(), 4 * 3 * 2);
    }

    #[test]
    fn balance_holds_and_detects_perturbation() {
        let g = parse_edge_list("0 1 2/3\n1 2\n2 0 5").unwrap();
        let z = build_z(&g, 2, 4).unwrap();
        assert!(verify_balance(&z).ok());

        let mut doc = to_json(&z);
        let top = doc.levels.last_mut().unwrap();
        top.weights[0] = "7/1".into();
        let perturbed_face = top.faces[0].clone();
        let bad = from_json_unchecked(&doc).unwrap();
        let report = verify_balance(&bad);
        assert!(!report.ok());
        let one = report.one_level.unwrap();
        assert_eq!(one.level, 1);
        let tau = Face::new(perturbed_face.iter().map(|p| ZVertex::new(p[0], p[1])).collect()).unwrap();
        assert!(one.face.is_subset_of(&tau));
        assert!(report.top_sum.is_some());
    }

    #[test]
    fn vertex_weight_is_h_factorial_times_top_sum() {
        let z = build_z(&gen_graph(GraphKind::Cycle, 4, None, 0).unwrap(), 3, 6).unwrap();
        for (x, m) in z.level(0).unwrap().iter() {
            let total = z
                .level(3)
                .unwrap()
                .iter()
                .filter(|(t, _)| x.is_subset_of(t))
                .fold(Rational::zero(), |acc, (_, w)| acc + w);
            assert_eq!(*m, total * int(6));
        }
    }
}
