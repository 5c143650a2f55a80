//! Class-level weights of Z and Q in exact arithmetic.
//!
//! Every face in one permutation orbit carries the same weight, so the whole
//! weight function is determined by one rational per class. This module
//! computes those rationals three ways (downward recursion, closed form,
//! and read-off from an explicitly built complex) and checks the ratio
//! identities that make the up-down walk on Z unbiased across classes.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{classify, Complex, ComplexKind, FaceClass};
use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::rational::{self, binomial, binomial_signed, factorial, harmonic_range, Rational};

/// One weight per class `(j, k-j)_(u,v)` and `(k)_u`, for class sizes
/// `k` in `1..=H+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassWeightTable {
    kind: ComplexKind,
    dim: usize,
    colors: usize,
    graph: WeightedGraph,
    /// Keyed by (edge index, vertices over the edge's `u`, class size).
    split: HashMap<(usize, usize, usize), Rational>,
    /// Keyed by (vertex, class size).
    pure: HashMap<(usize, usize), Rational>,
}

impl ClassWeightTable {
    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// `w^{(j, k-j)}_{(a,b)}`: `j` vertices over `a`, `k - j` over `b`.
    pub fn split(&self, a: usize, b: usize, j: usize, k: usize) -> Option<&Rational> {
        let idx = self.graph.edge_index(a, b)?;
        let j = if self.graph.edges()[idx].u == a { j } else { k.checked_sub(j)? };
        self.split.get(&(idx, j, k))
    }

    /// `w^{(k)}_{(u)}`.
    pub fn pure(&self, u: usize, k: usize) -> Option<&Rational> {
        self.pure.get(&(u, k))
    }

    pub fn get(&self, class: &FaceClass) -> Option<&Rational> {
        match *class {
            FaceClass::Split { u, v, j, k } => self.split(u, v, j, k),
            FaceClass::Pure { u, k } => self.pure(u, k),
        }
    }

    /// All entries as (class, weight), sorted by class.
    pub fn entries(&self) -> Vec<(FaceClass, &Rational)> {
        let edges = self.graph.edges();
        let mut out: Vec<(FaceClass, &Rational)> = self
            .split
            .iter()
            .map(|(&(idx, j, k), w)| (FaceClass::Split { u: edges[idx].u, v: edges[idx].v, j, k }, w))
            .chain(self.pure.iter().map(|(&(u, k), w)| (FaceClass::Pure { u, k }, w)))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }

    fn empty(kind: ComplexKind, g: &WeightedGraph, dim: usize, colors: usize) -> Self {
        ClassWeightTable {
            kind,
            dim,
            colors,
            graph: g.clone(),
            split: HashMap::new(),
            pure: HashMap::new(),
        }
    }
}

fn check_params(dim: usize, colors: usize) -> Result<()> {
    if dim < 1 || colors < dim + 1 {
        return Err(Error::InvalidParameter(format!("need H >= 1 and s >= H+1 (H={dim}, s={colors})")));
    }
    Ok(())
}

/// Class weights of Z by downward recursion from the top level.
pub fn class_weights(g: &WeightedGraph, dim: usize, colors: usize) -> Result<ClassWeightTable> {
    class_weights_for(ComplexKind::Z, g, dim, colors, false)
}

/// Class weights of Z or Q by downward recursion. At class size `t` a split
/// class weighs `(s - t)` times the sum of its two one-vertex extensions;
/// a pure class weighs `(s - t)` times its pure extension plus the split
/// extensions over every neighbor.
pub fn class_weights_for(
    kind: ComplexKind,
    g: &WeightedGraph,
    dim: usize,
    colors: usize,
    weighted_q: bool,
) -> Result<ClassWeightTable> {
    check_params(dim, colors)?;
    if kind == ComplexKind::Q && !weighted_q && !g.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    let mut table = ClassWeightTable::empty(kind, g, dim, colors);
    let top = dim + 1;
    for (idx, edge) in g.edges().iter().enumerate() {
        for j in 1..top {
            let w = match kind {
                ComplexKind::Z => &edge.weight / Rational::from_integer(binomial(dim - 1, j - 1)),
                ComplexKind::Q => edge.weight.clone(),
            };
            table.split.insert((idx, j, top), w);
        }
    }
    for u in (0..g.n()).filter(|&u| !g.neighbors(u).is_empty()) {
        let w = match kind {
            ComplexKind::Z => Rational::zero(),
            ComplexKind::Q => Rational::one(),
        };
        table.pure.insert((u, top), w);
    }

    for t in (1..=dim).rev() {
        let free = Rational::from_integer((colors - t).into());
        for idx in 0..g.edge_count() {
            for j in 1..t {
                let w = &free * (&table.split[&(idx, j + 1, t + 1)] + &table.split[&(idx, j, t + 1)]);
                table.split.insert((idx, j, t), w);
            }
        }
        for u in (0..g.n()).filter(|&u| !g.neighbors(u).is_empty()) {
            let mut sum = table.pure[&(u, t + 1)].clone();
            for &(v, _) in g.neighbors(u) {
                sum += table.split(u, v, t, t + 1).expect("filled at the previous size");
            }
            table.pure.insert((u, t), &free * sum);
        }
    }
    Ok(table)
}

/// Reads the class weights off an explicitly built complex, failing if any
/// class carries two different weights. Classes with no faces (the pure
/// top class of Z) read as zero.
pub fn class_weights_from_complex(c: &Complex) -> Result<ClassWeightTable> {
    if c.link_of().is_some() {
        return Err(Error::InvalidParameter("class weights are defined on Z or Q, not on links".into()));
    }
    let g = c.graph();
    let mut table = ClassWeightTable::empty(c.kind(), g, c.dim(), c.colors());
    for k in 0..=c.dim() as isize {
        for (face, w) in c.level(k)?.iter() {
            let class = classify(c, face)?;
            let existing = match class {
                FaceClass::Split { u, v, j, k } => {
                    let idx = g.edge_index(u, v).expect("classified over an edge");
                    table.split.entry((idx, j, k)).or_insert_with(|| w.clone())
                }
                FaceClass::Pure { u, k } => table.pure.entry((u, k)).or_insert_with(|| w.clone()),
            };
            if existing != w {
                return Err(Error::InvalidParameter(format!(
                    "class {class} is not weight-constant ({} vs {})",
                    rational::format(existing),
                    rational::format(w)
                )));
            }
        }
    }
    let top = c.dim() + 1;
    for u in (0..g.n()).filter(|&u| !g.neighbors(u).is_empty()) {
        table.pure.entry((u, top)).or_insert_with(Rational::zero);
    }
    Ok(table)
}

/// `w^{(j,k-j)}_{(u,v)} / w_G(u,v)` for Z in closed form:
/// `(H+1-k)! sum_l C(s-k, l) C(s-k-l, H+1-k-l) / C(H-1, j+l-1)`.
pub fn closed_form_ratio(dim: usize, colors: usize, k: usize, j: usize) -> Result<Rational> {
    check_params(dim, colors)?;
    if k < 2 || k > dim + 1 || j < 1 || j + 1 > k {
        return Err(Error::InvalidParameter(format!(
            "closed form needs 2 <= k <= H+1 and 1 <= j <= k-1 (k={k}, j={j})"
        )));
    }
    let (h, s, k, j) = (dim as i64, colors as i64, k as i64, j as i64);
    let mut sum = Rational::zero();
    for l in 0..=(h + 1 - k) {
        let count = binomial_signed(s - k, l) * binomial_signed(s - k - l, h + 1 - k - l);
        sum += Rational::new(count, binomial_signed(h - 1, j + l - 1));
    }
    Ok(sum * Rational::from_integer(factorial((h + 1 - k) as usize)))
}

/// Number of top faces of Z over a fixed edge with `j` vertices over `u`.
pub fn expected_top_class_count(dim: usize, colors: usize, j: usize) -> Rational {
    Rational::from_integer(binomial(colors, dim + 1) * binomial(dim + 1, j))
}

/// Total Z weight of those faces per unit edge weight.
pub fn expected_top_class_mass(dim: usize, colors: usize, j: usize) -> Rational {
    expected_top_class_count(dim, colors, j) / Rational::from_integer(binomial(dim - 1, j - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub subject: String,
    pub k: usize,
    pub j: Option<usize>,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RatioReport {
    pub checks: Vec<IdentityCheck>,
}

impl RatioReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Checks, exactly, for `1 <= k <= H`:
/// `w^{(j+1,k-j)} / w^{(j,k-j+1)} = j/(k-j)` on every oriented edge and
/// `w^{(k+1)}_u / sum_{v in N(u)} w^{(k,1)}_{(u,v)} = k sum_{i=k+1}^H 1/i`
/// at every vertex.
pub fn check_ratio_identities(t: &ClassWeightTable) -> RatioReport {
    let g = t.graph();
    let h = t.dim();
    let mut report = RatioReport::default();
    for k in 1..=h {
        for edge in g.edges() {
            for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                for j in 1..k {
                    let num = t.split(a, b, j + 1, k + 1).expect("class present");
                    let den = t.split(a, b, j, k + 1).expect("class present");
                    let actual = num / den;
                    let expected = rational::ratio(j as i64, (k - j) as i64);
                    report.checks.push(IdentityCheck {
                        identity: "split-ratio",
                        subject: format!("({a},{b})"),
                        k,
                        j: Some(j),
                        holds: actual == expected,
                        expected: rational::format(&expected),
                        actual: rational::format(&actual),
                    });
                }
            }
        }
        let expected = Rational::from_integer((k as i64).into()) * harmonic_range(k + 1, h);
        for u in (0..g.n()).filter(|&u| !g.neighbors(u).is_empty()) {
            let denom = g
                .neighbors(u)
                .iter()
                .fold(Rational::zero(), |acc, &(v, _)| acc + t.split(u, v, k, k + 1).expect("class present"));
            let actual = t.pure(u, k + 1).expect("class present") / denom;
            report.checks.push(IdentityCheck {
                identity: "pure-ratio",
                subject: format!("{u}"),
                k,
                j: None,
                holds: actual == expected,
                expected: rational::format(&expected),
                actual: rational::format(&actual),
            });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepDirection {
    /// `j' = j + 1`
    Up,
    /// `j' = j - 1`
    Down,
}

/// Probability that one step of the up-down walk on faces of size `k`
/// moves from class `(j, k-j)` to `(j+1, k-j-1)` or `(j-1, k-j+1)`, on the
/// table's first edge.
pub fn updown_class_step_prob(t: &ClassWeightTable, k: usize, j: usize, dir: StepDirection) -> Result<Rational> {
    let edge = t
        .graph()
        .edges()
        .first()
        .ok_or_else(|| Error::InvalidParameter("graph has no edges".into()))?;
    updown_class_step_prob_on(t, edge.u, edge.v, k, j, dir)
}

/// As [`updown_class_step_prob`] on the edge `(a, b)`, `j` counted over `a`.
pub fn updown_class_step_prob_on(
    t: &ClassWeightTable,
    a: usize,
    b: usize,
    k: usize,
    j: usize,
    dir: StepDirection,
) -> Result<Rational> {
    if k < 2 || k > t.dim() || j < 1 || j + 1 > k {
        return Err(Error::InvalidParameter(format!(
            "step probability needs 2 <= k <= H and 1 <= j <= k-1 (k={k}, j={j})"
        )));
    }
    let missing = || Error::InvalidParameter(format!("({a},{b}) is not an edge"));
    let more_u = t.split(a, b, j + 1, k + 1).ok_or_else(missing)?;
    let more_v = t.split(a, b, j, k + 1).ok_or_else(missing)?;
    let total = more_u + more_v;
    let denom = Rational::from_integer(((k + 1) as i64).into());
    Ok(match dir {
        StepDirection::Up => more_u / &total * Rational::from_integer(((k - j) as i64).into()) / denom,
        StepDirection::Down => more_v / &total * Rational::from_integer((j as i64).into()) / denom,
    })
}
