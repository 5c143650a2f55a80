use std::collections::BTreeMap;

use nalgebra::DMatrix;
use proptest::prelude::*;

use hdx::expansion::{expansion_profile, global_expansion};
use hdx::linalg;
use hdx::rational::{ratio, Rational};
use hdx::walks::{self, WalkKind};
use hdx::{build_z, gen_graph, graph_spectrum, Complex, Face, GraphKind, WeightedGraph};

fn weighted_c4() -> WeightedGraph {
    WeightedGraph::new(4, [(0, 1, ratio(1, 2)), (1, 2, ratio(2, 3)), (2, 3, ratio(3, 1)), (0, 3, ratio(5, 7))]).unwrap()
}

fn updown_spectra(c: &Complex) -> Vec<Vec<f64>> {
    (0..c.dim() as isize)
        .map(|k| {
            let w = walks::updown(c, k).unwrap();
            walks::operator_spectrum(&w, &walks::stationary(c, k).unwrap()).unwrap().eigenvalues
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// A global rescaling of `w_G` cancels in every operator entry.
    #[test]
    fn rescaling_leaves_operators_and_gaps_unchanged(p in 1i64..50, q in 1i64..50) {
        let g = weighted_c4();
        let scaled = g.scaled(&ratio(p, q)).unwrap();
        let (z, zs) = (build_z(&g, 2, 4).unwrap(), build_z(&scaled, 2, 4).unwrap());
        for k in 0..2 {
            for kind in [WalkKind::UpDown, WalkKind::DownUp] {
                let k = if kind == WalkKind::DownUp { k + 1 } else { k };
                let (a, b) = (walks::walk(&z, k, kind).unwrap(), walks::walk(&zs, k, kind).unwrap());
                prop_assert_eq!(a.exact(), b.exact());
            }
        }
        let (a, b) = (graph_spectrum(&g).unwrap(), graph_spectrum(&scaled).unwrap());
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let (pa, pb) = (expansion_profile(&z).unwrap(), expansion_profile(&zs).unwrap());
        for (la, lb) in pa.levels.iter().zip(&pb.levels) {
            prop_assert!((la.nu - lb.nu).abs() < 1e-10);
        }
    }

    /// Recoloring is a weight-preserving bijection on every level.
    #[test]
    fn color_permutations_preserve_weights(perm in Just((1..=6u32).collect::<Vec<_>>()).prop_shuffle()) {
        let z = build_z(&weighted_c4(), 3, 6).unwrap();
        for k in -1..=3 {
            let level = z.level(k).unwrap();
            let image: BTreeMap<Face, &Rational> = level.iter().map(|(f, w)| (f.permute_colors(&perm), w)).collect();
            prop_assert_eq!(image.len(), level.len());
            for (face, w) in image {
                prop_assert_eq!(level.weight(&face), Some(w));
            }
        }
    }

    /// `W_G = M D^{-1}` and `D^{-1/2} M D^{-1/2}` share their spectrum.
    #[test]
    fn graph_spectrum_matches_normalized_adjacency(n in 3usize..12, seed in 0u64..1000) {
        let n = if n % 2 == 1 { n + 1 } else { n };
        let g = gen_graph(GraphKind::RandomRegular, n, Some(3), seed).unwrap();
        let direct = graph_spectrum(&g).unwrap().eigenvalues;
        let normalized = linalg::symmetric_eigenvalues(g.normalized_adjacency().unwrap(), 100).unwrap();
        for (x, y) in direct.iter().zip(&normalized) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let w = g.random_walk_matrix();
        for j in 0..n {
            prop_assert!((w.column(j).sum() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn face_counts_per_edge_are_constant_across_cycles() {
    for (dim, colors) in [(2, 4), (3, 6)] {
        let ratios: Vec<Vec<f64>> = [4, 6, 8]
            .iter()
            .map(|&n| {
                let g = gen_graph(GraphKind::Cycle, n, None, 0).unwrap();
                let z = build_z(&g, dim, colors).unwrap();
                (0..=dim as isize)
                    .map(|k| z.faces(k).unwrap().len() as f64 / g.edge_count() as f64)
                    .collect()
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[0] == w[1]), "{ratios:?}");
    }
}

#[test]
fn updown_spectra_are_scale_free() {
    let g = weighted_c4();
    let a = updown_spectra(&build_z(&g, 2, 4).unwrap());
    let b = updown_spectra(&build_z(&g.scaled(&ratio(1, 1000)).unwrap(), 2, 4).unwrap());
    for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
        assert!((x - y).abs() < 1e-10);
    }
}

/// The raw, non-symmetric operator through a general eigensolver gives the
/// same `omega_2` as the symmetrized path.
#[test]
fn general_eigensolver_agrees_on_omega2() {
    let z = build_z(&weighted_c4(), 2, 4).unwrap();
    for k in 0..2 {
        let w = walks::updown(&z, k).unwrap();
        let symmetrized = walks::operator_spectrum(&w, &walks::stationary(&z, k).unwrap()).unwrap();
        let mut general: Vec<f64> = linalg::general_eigenvalues(w.shadow().to_dense())
            .unwrap()
            .iter()
            .map(|c| {
                assert!(c.im.abs() < 1e-8);
                c.re
            })
            .collect();
        linalg::sort_descending(&mut general);
        assert!((general[1] - symmetrized.omega2()).abs() < 1e-8);
        assert!((general[0] - 1.0).abs() < 1e-8);
    }
}

#[test]
fn updown_holds_at_least_one_over_k_plus_two() {
    let z = build_z(&weighted_c4(), 3, 6).unwrap();
    for k in 0..3 {
        let w = walks::updown(&z, k).unwrap();
        let floor = ratio(1, k as i64 + 2);
        for sigma in 0..z.faces(k).unwrap().len() {
            assert!(*w.exact().get(sigma, sigma).unwrap() >= floor);
        }
    }
}

/// `TV_t <= (1/2) sqrt((1 - pi(x)) / pi(x)) rho^t` for a reversible chain
/// from a point mass at `x`, with `rho = max |omega_i|, i >= 2`.
#[test]
fn tv_trace_respects_the_spectral_bound() {
    let z = build_z(&gen_graph(GraphKind::Cycle, 6, None, 0).unwrap(), 3, 6).unwrap();
    let k = 2;
    let w = walks::updown(&z, k).unwrap();
    let pi = walks::stationary(&z, k).unwrap();
    let spectrum = walks::operator_spectrum(&w, &pi).unwrap();
    let rho = spectrum.omega2().max(-spectrum.min_eigenvalue());
    let pif = pi.to_f64();
    for start in [0, pif.len() / 2, pif.len() - 1] {
        let trace = walks::evolve(&w, &pi, &walks::point_mass(pif.len(), start), 200).unwrap();
        let c = 0.5 * ((1.0 - pif[start]) / pif[start]).sqrt();
        for (t, tv) in trace.iter().enumerate() {
            assert!(*tv <= c * rho.powi(t as i32) + 1e-12, "t={t}");
        }
        assert!(trace.windows(2).all(|p| p[1] <= p[0] + 1e-12));
    }
}

#[test]
fn stationary_start_stays_put() {
    let z = build_z(&weighted_c4(), 2, 4).unwrap();
    let pi = walks::stationary(&z, 1).unwrap();
    let trace = walks::evolve(&walks::updown(&z, 1).unwrap(), &pi, &pi.to_f64(), 20).unwrap();
    assert!(trace.iter().all(|tv| *tv < 1e-14));
}

#[test]
fn k4_global_expansion_is_eight_ninths() {
    let g = gen_graph(GraphKind::Complete, 4, None, 0).unwrap();
    let z = build_z(&g, 2, 4).unwrap();
    let direct = hdx::graph_spectrum(&hdx::one_skeleton(&z).unwrap()).unwrap();
    assert!((direct.gap - 8.0 / 9.0).abs() < 1e-12);
    assert!((global_expansion(&z).unwrap().nu - 8.0 / 9.0).abs() < 1e-12);
    // direct 4x4 cross-check of the graph itself
    let m = DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 / 3.0 });
    let eig = linalg::symmetric_eigenvalues(m, 10).unwrap();
    assert!((1.0 - eig[1] - 4.0 / 3.0).abs() < 1e-12);
}
