//! High-order random walks on a weighted complex.
//!
//! Operators are column-stochastic: column `sigma` holds the distribution
//! of the next face given the current face `sigma`. Entries are assembled
//! in exact arithmetic and shadowed in `f64` for eigensolves and evolution.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};

/// Default residual allowed between the symmetrized operator and its
/// transpose.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Up,
    Down,
    UpDown,
    DownUp,
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(WalkKind::Up),
            "down" => Ok(WalkKind::Down),
            "updown" | "up-down" => Ok(WalkKind::UpDown),
            "downup" | "down-up" => Ok(WalkKind::DownUp),
            other => Err(Error::InvalidParameter(format!("unknown walk `{other}`"))),
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Up => "up",
            WalkKind::Down => "down",
            WalkKind::UpDown => "updown",
            WalkKind::DownUp => "downup",
        })
    }
}

/// Sparse matrix stored by columns, each sorted by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseColumns<T> {
    nrows: usize,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T> SparseColumns<T> {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, T)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        let col = &self.cols[j];
        col.binary_search_by_key(&i, |&(r, _)| r).ok().map(|pos| &col[pos].1)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }
}

impl SparseColumns<Rational> {
    /// `self * rhs`, exactly.
    pub fn compose(&self, rhs: &SparseColumns<Rational>) -> Result<SparseColumns<Rational>> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), got: rhs.nrows() });
        }
        let cols = rhs
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (mid, b) in col {
                    for (row, a) in &self.cols[*mid] {
                        *acc.entry(*row).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        Ok(SparseColumns { nrows: self.nrows, cols })
    }

    fn to_f64(&self) -> SparseColumns<f64> {
        SparseColumns {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(r, x)| (*r, rational::to_f64(x))).collect())
                .collect(),
        }
    }
}

impl SparseColumns<f64> {
    /// `y = A x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        for (col, &xj) in self.cols.iter().zip(x) {
            if xj != 0.0 {
                for &(r, a) in col {
                    y[r] += a * xj;
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                m[(i, j)] = a;
            }
        }
        m
    }
}

/// A walk operator on the faces of a complex, indexed by the canonical face
/// order of the domain and codomain levels.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    level: isize,
    kind: WalkKind,
    domain_level: isize,
    codomain_level: isize,
    exact: SparseColumns<Rational>,
    shadow: SparseColumns<f64>,
}

impl WalkOperator {
    fn new(level: isize, kind: WalkKind, domain_level: isize, codomain_level: isize, exact: SparseColumns<Rational>) -> Self {
        let shadow = exact.to_f64();
        WalkOperator { level, kind, domain_level, codomain_level, exact, shadow }
    }

    pub fn level(&self) -> isize {
        self.level
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn domain_level(&self) -> isize {
        self.domain_level
    }

    pub fn codomain_level(&self) -> isize {
        self.codomain_level
    }

    pub fn exact(&self) -> &SparseColumns<Rational> {
        &self.exact
    }

    pub fn shadow(&self) -> &SparseColumns<f64> {
        &self.shadow
    }

    pub fn is_square(&self) -> bool {
        self.domain_level == self.codomain_level
    }

    /// Columns whose exact sum is not one.
    pub fn column_sum_defects(&self) -> Vec<usize> {
        (0..self.exact.ncols())
            .filter(|&j| {
                let sum = self.exact.column(j).iter().fold(Rational::zero(), |acc, (_, x)| acc + x);
                !sum.is_one()
            })
            .collect()
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.column_sum_defects().is_empty()
    }
}

/// `W_k^up(tau, sigma) = m(tau) / m(sigma)` for `sigma` in `X(k)`,
/// `tau` in `X(k+1)`, `sigma` a facet of `tau`.
pub fn up_step(c: &Complex, k: isize) -> Result<WalkOperator> {
    c.check_level(k, -1, c.dim() as isize - 1)?;
    let lower = c.level(k)?;
    let upper = c.level(k + 1)?;
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); lower.len()];
    for (row, (tau, m_tau)) in upper.iter().enumerate() {
        for i in 0..tau.len() {
            let col = lower.index_of(&tau.without_index(i)).expect("downward closed");
            cols[col].push((row, m_tau / &lower.weights()[col]));
        }
    }
    for col in &mut cols {
        col.sort_unstable_by_key(|&(r, _)| r);
    }
    let exact = SparseColumns { nrows: upper.len(), cols };
    Ok(WalkOperator::new(k, WalkKind::Up, k, k + 1, exact))
}

/// `W_k^down(tau, sigma) = 1/(k+1)` for each facet `tau` of `sigma` in `X(k)`.
pub fn down_step(c: &Complex, k: isize) -> Result<WalkOperator> {
    c.check_level(k, 0, c.dim() as isize)?;
    let upper = c.level(k)?;
    let lower = c.level(k - 1)?;
    let p = rational::ratio(1, k as i64 + 1);
    let cols = upper
        .faces()
        .iter()
        .map(|sigma| {
            let mut col: Vec<(usize, Rational)> = (0..sigma.len())
                .map(|i| (lower.index_of(&sigma.without_index(i)).expect("downward closed"), p.clone()))
                .collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            col
        })
        .collect();
    let exact = SparseColumns { nrows: lower.len(), cols };
    Ok(WalkOperator::new(k, WalkKind::Down, k, k - 1, exact))
}

/// `W_k^{updown} = W_{k+1}^down W_k^up`, for `0 <= k <= H-1`.
pub fn updown(c: &Complex, k: isize) -> Result<WalkOperator> {
    c.check_level(k, 0, c.dim() as isize - 1)?;
    let up = up_step(c, k)?;
    let down = down_step(c, k + 1)?;
    Ok(WalkOperator::new(k, WalkKind::UpDown, k, k, down.exact.compose(&up.exact)?))
}

/// `W_k^{downup} = W_{k-1}^up W_k^down`, for `1 <= k <= H`.
pub fn downup(c: &Complex, k: isize) -> Result<WalkOperator> {
    c.check_level(k, 1, c.dim() as isize)?;
    let down = down_step(c, k)?;
    let up = up_step(c, k - 1)?;
    Ok(WalkOperator::new(k, WalkKind::DownUp, k, k, up.exact.compose(&down.exact)?))
}

pub fn walk(c: &Complex, k: isize, kind: WalkKind) -> Result<WalkOperator> {
    match kind {
        WalkKind::Up => up_step(c, k),
        WalkKind::Down => down_step(c, k),
        WalkKind::UpDown => updown(c, k),
        WalkKind::DownUp => downup(c, k),
    }
}

/// `pi(sigma) = m(sigma) / sum_{tau in X(k)} m(tau)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryMeasure {
    level: isize,
    probabilities: Vec<Rational>,
}

impl StationaryMeasure {
    pub fn level(&self) -> isize {
        self.level
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probabilities.iter().map(rational::to_f64).collect()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

pub fn stationary(c: &Complex, k: isize) -> Result<StationaryMeasure> {
    let level = c.level(k)?;
    let total = level.total_weight();
    let probabilities = level.weights().iter().map(|w| w / &total).collect();
    Ok(StationaryMeasure { level: k, probabilities })
}

/// Checks `pi(sigma) W(tau, sigma) = pi(tau) W(sigma, tau)` exactly; returns
/// the first offending `(tau, sigma)` index pair.
pub fn detailed_balance_violation(w: &WalkOperator, pi: &StationaryMeasure) -> Option<(usize, usize)> {
    if !w.is_square() || pi.len() != w.exact.ncols() {
        return Some((0, 0));
    }
    let p = pi.probabilities();
    for sigma in 0..w.exact.ncols() {
        for (tau, x) in w.exact.column(sigma) {
            let back = w.exact.get(sigma, *tau).cloned().unwrap_or_else(Rational::zero);
            if &p[sigma] * x != &p[*tau] * back {
                return Some((*tau, sigma));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub level: isize,
    pub walk: WalkKind,
    /// Descending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// `1 - omega_2`.
    pub gap: f64,
    pub symmetrization_residual: f64,
}

impl SpectrumReport {
    pub fn omega2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(f64::NAN)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    pub symmetry_tolerance: f64,
    pub eigen_cap: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { symmetry_tolerance: SYMMETRY_TOLERANCE, eigen_cap: linalg::DEFAULT_EIGEN_CAP }
    }
}

pub fn operator_spectrum(w: &WalkOperator, pi: &StationaryMeasure) -> Result<SpectrumReport> {
    operator_spectrum_with(w, pi, &SpectrumOptions::default())
}

/// Spectrum of a reversible operator via `diag(pi)^{-1/2} W diag(pi)^{1/2}`.
pub fn operator_spectrum_with(w: &WalkOperator, pi: &StationaryMeasure, options: &SpectrumOptions) -> Result<SpectrumReport> {
    let n = w.exact.ncols();
    if !w.is_square() {
        return Err(Error::NotReversible(format!("{} operator is not square", w.kind)));
    }
    if pi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.len() });
    }
    if n > options.eigen_cap {
        return Err(Error::EigenCap { size: n, cap: options.eigen_cap });
    }
    if let Some((tau, sigma)) = detailed_balance_violation(w, pi) {
        return Err(Error::NotReversible(format!("detailed balance fails at ({tau}, {sigma})")));
    }
    let sqrt_pi: Vec<f64> = pi.to_f64().iter().map(|p| p.sqrt()).collect();
    let mut s = DMatrix::zeros(n, n);
    for sigma in 0..n {
        for &(tau, x) in w.shadow.column(sigma) {
            s[(tau, sigma)] = x * sqrt_pi[sigma] / sqrt_pi[tau];
        }
    }
    let residual = linalg::symmetry_residual(&s);
    if residual > options.symmetry_tolerance {
        return Err(Error::SymmetrizationResidual { residual, tolerance: options.symmetry_tolerance });
    }
    let s = (&s + s.transpose()) * 0.5;
    let eigenvalues = linalg::symmetric_eigenvalues(s, options.eigen_cap)?;
    let gap = 1.0 - eigenvalues.get(1).copied().unwrap_or(f64::NAN);
    Ok(SpectrumReport { level: w.level, walk: w.kind, eigenvalues, gap, symmetrization_residual: residual })
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Evolves `p0` under `w` for `steps` steps and returns the total variation
/// distance to `pi` before the first step and after each step.
pub fn evolve(w: &WalkOperator, pi: &StationaryMeasure, p0: &[f64], steps: usize) -> Result<Vec<f64>> {
    let n = w.shadow.ncols();
    if !w.is_square() {
        return Err(Error::DimensionMismatch { expected: n, got: w.shadow.nrows() });
    }
    if p0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p0.len() });
    }
    if pi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.len() });
    }
    let target = pi.to_f64();
    let mut p = p0.to_vec();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(total_variation(&p, &target));
    for _ in 0..steps {
        p = w.shadow.apply(&p);
        trace.push(total_variation(&p, &target));
    }
    Ok(trace)
}

pub fn point_mass(n: usize, at: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[at] = 1.0;
    p
}

/// First step at which the trace drops below `threshold`.
pub fn steps_to_reach(trace: &[f64], threshold: f64) -> Option<usize> {
    trace.iter().position(|&tv| tv < threshold)
}

/// TV trace of the up-down walk at level `k` started from a point mass on
/// `start`.
pub fn mixing_trace(c: &Complex, k: isize, start: &Face, steps: usize) -> Result<Vec<f64>> {
    let at = c
        .level(k)?
        .index_of(start)
        .ok_or_else(|| Error::FaceNotInComplex(start.to_string()))?;
    let w = updown(c, k)?;
    let pi = stationary(c, k)?;
    evolve(&w, &pi, &point_mass(pi.len(), at), steps)
}

/// Samples a trajectory of face indices. Demonstration output only; the
/// mixing checks use [`evolve`].
pub fn sample_path(w: &WalkOperator, start: usize, steps: usize, seed: u64) -> Result<Vec<usize>> {
    let n = w.shadow.ncols();
    if start >= n || !w.is_square() {
        return Err(Error::DimensionMismatch { expected: n, got: start });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = Vec::with_capacity(steps + 1);
    let mut at = start;
    path.push(at);
    for _ in 0..steps {
        let col = w.shadow.column(at);
        let dist = WeightedIndex::new(col.iter().map(|&(_, p)| p))
            .map_err(|e| Error::InvalidParameter(format!("column {at}: {e}")))?;
        at = col[dist.sample(&mut rng)].0;
        path.push(at);
    }
    Ok(path)
}
