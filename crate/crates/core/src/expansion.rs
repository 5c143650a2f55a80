//! Local and global expansion, and the harness that checks the spectral
//! claims about Z and Q on a concrete graph.
//!
//! `nu^(k)` is the minimum spectral gap of the 1-skeleton of the link of a
//! `k`-dimensional face; `k = -1` is the 1-skeleton of the whole complex.
//! Every link is measured; orbit symmetry is asserted, never assumed.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{self, build_q, build_z, classify, Complex, ComplexKind, Face, FaceClass, ZVertex};
use crate::error::{Error, Result};
use crate::graphs::{graph_spectrum, GraphSpectrum, WeightedGraph};
use crate::rational::{self, Rational};
use crate::report::{Check, Relation, VerificationReport};
use crate::walks::{self, SpectrumReport};
use crate::weights;

/// Default tolerance for eigenvalue equalities and inequalities.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Tolerance for matching nonzero spectra of `W^updown_k` and `W^downup_{k+1}`.
pub const SPECTRA_MATCH_TOLERANCE: f64 = 1e-8;
/// Eigenvalues below this magnitude count as zero when matching spectra.
pub const ZERO_EIGENVALUE_CUTOFF: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkGap {
    pub face: Face,
    pub class: Option<FaceClass>,
    pub omega2: f64,
    pub gap: f64,
}

/// One level of an expansion profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalLevel {
    pub k: isize,
    pub nu: f64,
    pub argmin: Face,
    pub links: Vec<LinkGap>,
}

impl LocalLevel {
    fn from_links(k: isize, links: Vec<LinkGap>) -> Self {
        // Ties go to the first face in canonical order.
        let (argmin, nu) = links
            .iter()
            .fold((Face::empty(), f64::INFINITY), |(face, best), l| {
                if l.gap < best {
                    (l.face.clone(), l.gap)
                } else {
                    (face, best)
                }
            });
        LocalLevel { k, nu, argmin, links }
    }

    /// Largest deviation of any individual link gap from `target`.
    pub fn max_deviation(&self, target: f64) -> f64 {
        self.links.iter().map(|l| (l.gap - target).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionProfile {
    /// Levels `-1..=H-2` in order.
    pub levels: Vec<LocalLevel>,
}

impl ExpansionProfile {
    pub fn level(&self, k: isize) -> Option<&LocalLevel> {
        self.levels.iter().find(|l| l.k == k)
    }

    pub fn nu(&self, k: isize) -> Option<f64> {
        self.level(k).map(|l| l.nu)
    }
}

/// The 1-skeleton of the link of `face`, built from the two levels above it.
/// Vertex order matches level 0 of [`complex::link`].
pub fn link_one_skeleton(c: &Complex, face: &Face) -> Result<WeightedGraph> {
    if !c.contains(face) {
        return Err(Error::FaceNotInComplex(face.to_string()));
    }
    if face.len() + 1 > c.dim() {
        return Err(Error::InvalidParameter(format!("link of {face} has no edges")));
    }
    let mut vertices: Vec<ZVertex> = c
        .faces(0)?
        .iter()
        .map(|x| x.vertices()[0])
        .filter(|x| !face.contains(x) && c.contains(&face.with_vertex(*x)))
        .collect();
    vertices.sort_unstable();
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        let with_a = face.with_vertex(vertices[a]);
        for b in (a + 1)..vertices.len() {
            if let Some(w) = c.weight(&with_a.with_vertex(vertices[b])) {
                edges.push((a, b, w.clone()));
            }
        }
    }
    WeightedGraph::new(vertices.len(), edges)
}

fn link_gap(c: &Complex, face: &Face) -> Result<LinkGap> {
    let skeleton = link_one_skeleton(c, face)?;
    let spectrum = graph_spectrum(&skeleton)?;
    Ok(LinkGap {
        face: face.clone(),
        class: classify(c, face).ok(),
        omega2: spectrum.omega2(),
        gap: spectrum.gap,
    })
}

/// Gap of every link at level `k` (`0 <= k <= H-2`), with minimum and argmin.
pub fn local_sweep(c: &Complex, k: isize) -> Result<LocalLevel> {
    c.check_level(k, 0, c.dim() as isize - 2)?;
    let links = c
        .faces(k)?
        .par_iter()
        .map(|face| link_gap(c, face))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalLevel::from_links(k, links))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalBranch {
    /// `omega_2` comes from the lazy walk on G.
    Lazy,
    /// `omega_2` comes from the most negative lazy eigenvalue over `s - 1`.
    Bipartite,
}

/// Closed-form `omega_2` of the 1-skeleton of Z from the spectrum of G.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalPrediction {
    pub harmonic: f64,
    pub lazy_omega2: f64,
    pub lazy_omega_min: f64,
    pub omega2: f64,
    pub nu: f64,
    pub branch: GlobalBranch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalExpansion {
    pub omega2: f64,
    pub nu: f64,
    pub prediction: Option<GlobalPrediction>,
}

/// `max{ lazy(omega_2), -lazy(omega_n)/(s-1) }` with
/// `lazy(x) = x/h + (1 - 1/h)`, `h = sum_{l=1}^H 1/l`.
pub fn predict_global(g: &GraphSpectrum, dim: usize, colors: usize) -> GlobalPrediction {
    let harmonic = rational::to_f64(&rational::harmonic(dim));
    let lazy = |x: f64| x / harmonic + (1.0 - 1.0 / harmonic);
    let lazy_omega2 = lazy(g.omega2());
    let lazy_omega_min = lazy(g.omega_min());
    let other = -lazy_omega_min / (colors as f64 - 1.0);
    let (omega2, branch) = if lazy_omega2 >= other {
        (lazy_omega2, GlobalBranch::Lazy)
    } else {
        (other, GlobalBranch::Bipartite)
    };
    GlobalPrediction { harmonic, lazy_omega2, lazy_omega_min, omega2, nu: 1.0 - omega2, branch }
}

/// `nu^(-1)` by direct eigensolve of the 1-skeleton, plus the closed-form
/// prediction when the complex is Z.
pub fn global_expansion(c: &Complex) -> Result<GlobalExpansion> {
    let spectrum = graph_spectrum(&complex::one_skeleton(c)?)?;
    let prediction = if c.kind() == ComplexKind::Z && c.link_of().is_none() {
        Some(predict_global(&graph_spectrum(c.graph())?, c.dim(), c.colors()))
    } else {
        None
    };
    Ok(GlobalExpansion { omega2: spectrum.omega2(), nu: spectrum.gap, prediction })
}

/// Levels `-1..=H-2`.
pub fn expansion_profile(c: &Complex) -> Result<ExpansionProfile> {
    let global = global_expansion(c)?;
    let mut levels = vec![LocalLevel {
        k: -1,
        nu: global.nu,
        argmin: Face::empty(),
        links: vec![LinkGap { face: Face::empty(), class: None, omega2: global.omega2, gap: global.nu }],
    }];
    for k in 0..=(c.dim() as isize - 2) {
        levels.push(local_sweep(c, k)?);
    }
    Ok(ExpansionProfile { levels })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassGapSummary {
    pub k: isize,
    pub pure: bool,
    pub links: usize,
    pub min_gap: f64,
    pub max_gap: f64,
}

/// Link gaps grouped by split/pure class type per level.
pub fn class_gap_summary(profile: &ExpansionProfile) -> Vec<ClassGapSummary> {
    let mut groups: BTreeMap<(isize, bool), ClassGapSummary> = BTreeMap::new();
    for level in profile.levels.iter().filter(|l| l.k >= 0) {
        for link in &level.links {
            let pure = link.class.map(|c| c.is_pure()).unwrap_or(false);
            let entry = groups.entry((level.k, pure)).or_insert(ClassGapSummary {
                k: level.k,
                pure,
                links: 0,
                min_gap: f64::INFINITY,
                max_gap: f64::NEG_INFINITY,
            });
            entry.links += 1;
            entry.min_gap = entry.min_gap.min(link.gap);
            entry.max_gap = entry.max_gap.max(link.gap);
        }
    }
    groups.into_values().collect()
}

fn nonzero_sorted(values: &[f64]) -> Vec<f64> {
    values.iter().copied().filter(|x| x.abs() > ZERO_EIGENVALUE_CUTOFF).collect()
}

/// Largest gap between the nonzero parts of two descending spectra, or
/// infinity if their nonzero counts differ.
pub fn nonzero_spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (nonzero_sorted(a), nonzero_sorted(b));
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Exact and spectral checks on the walk operators of `c`, returning the
/// checks and the up-down spectra for levels `0..=H-1`.
pub fn operator_checks(c: &Complex, label: &str, tol: f64) -> Result<(Vec<Check>, Vec<SpectrumReport>)> {
    let h = c.dim() as isize;
    let mut checks = Vec::new();

    let mut defects = 0;
    for k in -1..h {
        defects += walks::up_step(c, k)?.column_sum_defects().len();
    }
    for k in 0..=h {
        defects += walks::down_step(c, k)?.column_sum_defects().len();
    }
    checks.push(Check::exact(
        format!("{label}.step_operators_column_stochastic"),
        "columns of W^up_k and W^down_k sum to 1",
        defects,
    ));

    let results = (0..h)
        .into_par_iter()
        .map(|k| -> Result<(Vec<Check>, SpectrumReport)> {
            let mut out = Vec::new();
            let ud = walks::updown(c, k)?;
            let du = walks::downup(c, k + 1)?;
            let pi = walks::stationary(c, k)?;
            let pi_next = walks::stationary(c, k + 1)?;
            out.push(Check::exact(
                format!("{label}.updown_{k}.column_stochastic"),
                "columns of W^updown_k sum to 1",
                ud.column_sum_defects().len() + du.column_sum_defects().len(),
            ));
            let imbalance = walks::detailed_balance_violation(&ud, &pi).is_some() as usize
                + walks::detailed_balance_violation(&du, &pi_next).is_some() as usize;
            out.push(Check::exact(
                format!("{label}.updown_{k}.detailed_balance"),
                "m(s) W(t,s) = m(t) W(s,t)",
                imbalance,
            ));
            let ud_spec = walks::operator_spectrum(&ud, &pi)?;
            let du_spec = walks::operator_spectrum(&du, &pi_next)?;
            out.push(
                Check::new(
                    format!("{label}.updown_{k}.matches_downup_{}", k + 1),
                    "nonzero spectra of W^updown_k and W^downup_{k+1} coincide",
                    Relation::Eq,
                    0.0,
                    nonzero_spectrum_distance(&ud_spec.eigenvalues, &du_spec.eigenvalues),
                    SPECTRA_MATCH_TOLERANCE,
                )
                .with_detail(format!(
                    "{} vs {} nonzero eigenvalues",
                    nonzero_sorted(&ud_spec.eigenvalues).len(),
                    nonzero_sorted(&du_spec.eigenvalues).len()
                )),
            );
            out.push(Check::new(
                format!("{label}.updown_{k}.eigenvalue_floor"),
                "omega_i(W^updown_k) >= -k/(k+2)",
                Relation::Ge,
                -(k as f64) / (k as f64 + 2.0),
                ud_spec.min_eigenvalue(),
                tol,
            ));
            out.push(Check::new(
                format!("{label}.updown_{k}.top_eigenvalue"),
                "omega_1(W^updown_k) = 1",
                Relation::Eq,
                1.0,
                ud_spec.eigenvalues[0],
                tol,
            ));
            Ok((out, ud_spec))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spectra = Vec::with_capacity(results.len());
    for (level_checks, spectrum) in results {
        checks.extend(level_checks);
        spectra.push(spectrum);
    }
    Ok((checks, spectra))
}

/// Exact weight identities: recursion vs explicit propagation vs closed
/// form, ratio identities, top class counts and masses, and balance.
pub fn weight_checks(z: &Complex) -> Result<Vec<Check>> {
    let g = z.graph();
    let (h, s) = (z.dim(), z.colors());
    let mut checks = Vec::new();

    let recursion = weights::class_weights(g, h, s)?;
    let explicit = weights::class_weights_from_complex(z)?;
    let mismatches = recursion
        .entries()
        .iter()
        .filter(|(class, w)| explicit.get(class) != Some(*w))
        .count()
        + explicit.entries().len().abs_diff(recursion.entries().len());
    checks.push(Check::exact(
        "weights.recursion_matches_explicit",
        "w^{(j,k-j)} = (s-k)(w^{(j+1,k-j)} + w^{(j,k-j+1)})",
        mismatches,
    ));

    let mut closed_mismatches = 0;
    for (class, w) in recursion.entries() {
        if let FaceClass::Split { u, v, j, k } = class {
            let ratio = weights::closed_form_ratio(h, s, k, j)?;
            if ratio * g.weight(u, v).expect("edge") != *w {
                closed_mismatches += 1;
            }
        }
    }
    checks.push(Check::exact(
        "weights.closed_form",
        "w^{(j,k-j)}/w_G = (H+1-k)! sum_l C(s-k,l) C(s-k-l,H+1-k-l) / C(H-1,j+l-1)",
        closed_mismatches,
    ));

    let identities = weights::check_ratio_identities(&recursion);
    let split_failures = identities.failures().filter(|c| c.identity == "split-ratio").count();
    let pure_failures = identities.failures().filter(|c| c.identity == "pure-ratio").count();
    checks.push(Check::exact("weights.split_ratio", "w^{(j+1,k-j)} / w^{(j,k-j+1)} = j/(k-j)", split_failures));
    checks.push(Check::exact(
        "weights.pure_ratio",
        "w^{(k+1)}_u / sum_v w^{(k,1)}_{(u,v)} = k sum_{i=k+1}^H 1/i",
        pure_failures,
    ));

    let mut count_failures = 0;
    let mut mass_failures = 0;
    let mut per_class: BTreeMap<(usize, usize), (usize, Rational)> = BTreeMap::new();
    for (face, w) in z.level(h as isize)?.iter() {
        if let FaceClass::Split { u, v, j, .. } = classify(z, face)? {
            let entry = per_class.entry((g.edge_index(u, v).expect("edge"), j)).or_default();
            entry.0 += 1;
            entry.1 += w;
        }
    }
    for (idx, edge) in g.edges().iter().enumerate() {
        for j in 1..=h {
            let (count, mass) = per_class.get(&(idx, j)).cloned().unwrap_or_default();
            if Rational::from_integer(count.into()) != weights::expected_top_class_count(h, s, j) {
                count_failures += 1;
            }
            if mass != weights::expected_top_class_mass(h, s, j) * &edge.weight {
                mass_failures += 1;
            }
        }
    }
    checks.push(Check::exact("weights.top_class_counts", "|Z((j,H+1-j)_(u,v))| = C(s,H+1) C(H+1,j)", count_failures));
    checks.push(Check::exact(
        "weights.top_class_mass",
        "total weight of Z((j,H+1-j)_(u,v)) = w_G C(s,H+1) C(H+1,j) / C(H-1,j-1)",
        mass_failures,
    ));

    let balance = complex::verify_balance(z);
    checks.push(Check::exact("weights.balance", "m(s) = sum_{t > s} m(t)", balance.one_level.is_some() as usize));
    checks.push(Check::exact(
        "weights.top_sum",
        "m(s) = (H-k)! sum_{t in X(H), t > s} m(t)",
        balance.top_sum.is_some() as usize,
    ));
    Ok(checks)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub tolerance: f64,
    /// Runs outside the hypotheses `H >= 2, s >= 2H, n >= 4`, reporting
    /// values without asserting the statements that depend on them.
    pub explore: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: DEFAULT_TOLERANCE, explore: false }
    }
}

pub fn hypotheses_hold(g: &WeightedGraph, dim: usize, colors: usize) -> bool {
    dim >= 2 && colors >= 2 * dim && g.n() >= 4
}

/// Builds Z and Q on `g` and checks local and global expansion, the
/// up-down gap sandwich, the local-to-global bound, the descent inequality,
/// the weight identities, operator properties, and Z-vs-Q separation.
pub fn verify_theorems(g: &WeightedGraph, dim: usize, colors: usize, options: &VerifyOptions) -> Result<VerificationReport> {
    let hyp = hypotheses_hold(g, dim, colors);
    if !hyp && !options.explore {
        return Err(Error::InvalidParameter(format!(
            "need H >= 2, s >= 2H and n >= 4 (H={dim}, s={colors}, n={}); use explore mode to report values",
            g.n()
        )));
    }
    let tol = options.tolerance;
    let gate = |check: Check| -> Check {
        if hyp {
            check
        } else {
            check.skip("outside H >= 2, s >= 2H, n >= 4")
        }
    };
    let h = dim as isize;
    let z = build_z(g, dim, colors)?;
    let q = build_q(g, dim, colors)?;
    let g_spec = graph_spectrum(g)?;
    let harmonic = rational::to_f64(&rational::harmonic(dim));

    let (profile_z, profile_q) = rayon::join(|| expansion_profile(&z), || expansion_profile(&q));
    let (profile_z, profile_q) = (profile_z?, profile_q?);
    let mut checks = Vec::new();

    for k in 0..=(h - 2) {
        let target = (k as f64 + 1.0) / (k as f64 + 2.0);
        let level = profile_z.level(k).expect("profile level");
        checks.push(gate(Check::new(
            format!("z.local_{k}"),
            "nu^(k)(Z) = (k+1)/(k+2)",
            Relation::Eq,
            target,
            level.nu,
            tol,
        )));
        checks.push(gate(
            Check::new(
                format!("z.local_{k}.every_link"),
                "omega_2 of every link 1-skeleton = 1/(k+1) for links of k-faces' cofaces",
                Relation::Eq,
                0.0,
                level.max_deviation(target),
                tol,
            )
            .with_detail(format!("{} links", level.links.len())),
        ));
    }

    let global = global_expansion(&z)?;
    let prediction = global.prediction.clone().expect("Z has a prediction");
    checks.push(gate(Check::new(
        "z.global",
        "nu^(-1)(Z) = nu_2(G) / sum_{l=1}^H 1/l",
        Relation::Eq,
        g_spec.gap / harmonic,
        global.nu,
        tol,
    )));
    checks.push(
        Check::new(
            "z.global_closed_form",
            "omega_2(Z(0),Z(1),m) = max{lazy omega_2(G), -lazy omega_n(G)/(s-1)}",
            Relation::Eq,
            prediction.omega2,
            global.omega2,
            tol,
        )
        .with_detail(format!("{:?} branch", prediction.branch)),
    );
    checks.push(gate(Check::new(
        "z.global_log_bound",
        "nu^(-1)(Z) >= nu_2(G)/(1 + log H)",
        Relation::Ge,
        g_spec.gap / (1.0 + (dim as f64).ln()),
        global.nu,
        tol,
    )));

    let ((z_ops, z_spectra), (q_ops, q_spectra)) = {
        let (a, b) = rayon::join(|| operator_checks(&z, "z", tol), || operator_checks(&q, "q", tol));
        (a?, b?)
    };
    checks.extend(z_ops);
    let enough_vertices = z.faces(0)?.len() >= 2 * (dim + 1);
    for k in 0..h {
        let gap = z_spectra[k as usize].gap;
        let kf = k as f64;
        checks.push(gate(Check::new(
            format!("z.updown_{k}.lower_bound"),
            "nu_2(W^updown_k) >= nu_2(G) / ((sum_{l=1}^H 1/l)(k+2)(k+1))",
            Relation::Ge,
            g_spec.gap / (harmonic * (kf + 2.0) * (kf + 1.0)),
            gap,
            tol,
        )));
        let upper = Check::new(
            format!("z.updown_{k}.upper_bound"),
            "nu_2(W^updown_k) <= 2/(k+2)",
            Relation::Le,
            2.0 / (kf + 2.0),
            gap,
            tol,
        );
        checks.push(if enough_vertices { upper } else { upper.skip("fewer than 2(H+1) vertices") });
        let product: f64 = (-1..k).map(|j| profile_z.nu(j).expect("profile level")).product();
        checks.push(Check::new(
            format!("z.updown_{k}.local_to_global"),
            "nu_2(W^updown_k) >= (1/(k+2)) prod_{j=-1}^{k-1} nu^(j)",
            Relation::Ge,
            product / (kf + 2.0),
            gap,
            tol,
        ));
    }
    for k in 0..=(h - 2) {
        let below = profile_z.nu(k - 1).expect("profile level");
        let above = profile_z.nu(k).expect("profile level");
        checks.push(Check::new(
            format!("z.descent_{k}"),
            "nu^(k-1) >= 2 - 1/nu^(k)",
            Relation::Ge,
            2.0 - 1.0 / above,
            below,
            tol,
        ));
    }

    checks.extend(weight_checks(&z)?);

    checks.extend(q_ops);
    for k in 0..=(h - 2) {
        let level = profile_q.level(k).expect("profile level");
        checks.push(gate(Check::new(format!("q.local_{k}"), "nu^(k)(Q) = 1/2", Relation::Eq, 0.5, level.nu, tol)));
    }
    let top = (h - 1) as usize;
    checks.push(gate(Check::new(
        format!("z_vs_q.updown_{}", h - 1),
        "nu_2(W^updown_{H-1}) on Z > same on Q",
        Relation::Gt,
        q_spectra[top].gap,
        z_spectra[top].gap,
        0.0,
    )));

    let mut report = VerificationReport::new(checks);
    report.extras = serde_json::json!({
        "graph_gap": g_spec.gap,
        "harmonic": harmonic,
        "global_prediction": prediction,
        "z_profile": profile_z.levels.iter().map(|l| (l.k, l.nu)).collect::<Vec<_>>(),
        "q_profile": profile_q.levels.iter().map(|l| (l.k, l.nu)).collect::<Vec<_>>(),
        "z_updown_gaps": z_spectra.iter().map(|s| s.gap).collect::<Vec<_>>(),
        "q_updown_gaps": q_spectra.iter().map(|s| s.gap).collect::<Vec<_>>(),
        "z_class_gaps": class_gap_summary(&profile_z),
        "hypotheses_hold": hyp,
    });
    Ok(report)
}
