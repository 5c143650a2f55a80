//! Independent oracles: brute-force enumeration of Z and Q straight from
//! their defining conditions, and explicit tensor-product link skeletons.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::{One, Zero};

use hdx::complex::{link, one_skeleton};
use hdx::rational::{self, ratio, Rational};
use hdx::weights::{self, class_weights};
use hdx::{build_q, build_z, classify, Complex, Face, FaceClass, WeightedGraph, ZVertex};

fn single_edge() -> WeightedGraph {
    WeightedGraph::new(2, [(0, 1, Rational::one())]).unwrap()
}

fn weighted_c4() -> WeightedGraph {
    WeightedGraph::new(4, [(0, 1, ratio(1, 2)), (1, 2, ratio(2, 3)), (2, 3, ratio(3, 1)), (0, 3, ratio(5, 7))]).unwrap()
}

/// Every `(H+1)`-subset of `V x [s]`, kept if its colors are distinct and
/// its graph vertices span exactly an edge (Z) or lie in an edge or a single
/// vertex (Q). Top weights come straight from the definition; lower weights
/// from `m(s) = (H-k)! sum_{t in X(H), t > s} m(t)`, not from propagation.
fn enumerate(g: &WeightedGraph, dim: usize, colors: usize, q: bool) -> Vec<BTreeMap<Face, Rational>> {
    let all: Vec<ZVertex> = (0..g.n())
        .flat_map(|v| (1..=colors).map(move |b| ZVertex::new(v, b)))
        .collect();
    let mut top = BTreeMap::new();
    for subset in all.iter().copied().combinations(dim + 1) {
        if subset.iter().map(|x| x.b).all_unique() {
            let vs: Vec<u32> = subset.iter().map(|x| x.v).sorted().dedup().collect();
            let weight = match vs.as_slice() {
                [u, v] => g.weight(*u as usize, *v as usize).map(|w| {
                    if q {
                        w.clone()
                    } else {
                        let j = subset.iter().filter(|x| x.v == *u).count();
                        w / Rational::from_integer(rational::binomial(dim - 1, j - 1))
                    }
                }),
                [_] if q => Some(Rational::one()),
                _ => None,
            };
            if let Some(w) = weight {
                top.insert(Face::new(subset).unwrap(), w);
            }
        }
    }
    let mut levels: Vec<BTreeMap<Face, Rational>> = vec![BTreeMap::new(); dim + 2];
    for (t, w) in &top {
        for size in 0..=dim {
            let scale = Rational::from_integer(rational::factorial(dim + 1 - size));
            for sub in t.vertices().iter().copied().combinations(size) {
                *levels[size].entry(Face::new(sub).unwrap()).or_insert_with(Rational::zero) += w * &scale;
            }
        }
    }
    levels[dim + 1] = top;
    levels
}

fn assert_matches_enumeration(c: &Complex, oracle: &[BTreeMap<Face, Rational>]) {
    for (size, expected) in oracle.iter().enumerate() {
        let level = c.level(size as isize - 1).unwrap();
        assert_eq!(level.len(), expected.len(), "level {} size", size as isize - 1);
        for (face, w) in expected {
            assert_eq!(level.weight(face), Some(w), "weight of {face}");
        }
    }
}

#[test]
fn z_matches_enumeration() {
    for g in [single_edge(), weighted_c4()] {
        for dim in [2, 3] {
            for colors in [dim + 1, 2 * dim] {
                let z = build_z(&g, dim, colors).unwrap();
                assert_matches_enumeration(&z, &enumerate(&g, dim, colors, false));
            }
        }
    }
}

#[test]
fn q_matches_enumeration() {
    let c4 = hdx::gen_graph(hdx::GraphKind::Cycle, 4, None, 0).unwrap();
    for (dim, colors) in [(2, 3), (2, 4), (3, 6)] {
        let q = build_q(&c4, dim, colors).unwrap();
        assert_matches_enumeration(&q, &enumerate(&c4, dim, colors, true));
    }
}

#[test]
fn top_class_counts_by_enumeration() {
    for g in [single_edge(), weighted_c4()] {
        for dim in [2, 3] {
            for colors in [dim + 1, 2 * dim] {
                let top = &enumerate(&g, dim, colors, false)[dim + 1];
                for e in g.edges() {
                    for j in 1..=dim {
                        let count = top
                            .keys()
                            .filter(|f| {
                                let over_u = f.vertices().iter().filter(|x| x.v as usize == e.u).count();
                                let over_v = f.vertices().iter().filter(|x| x.v as usize == e.v).count();
                                over_u == j && over_u + over_v == dim + 1
                            })
                            .count();
                        let expected = rational::binomial(colors, dim + 1) * rational::binomial(dim + 1, j);
                        assert_eq!(count.to_string(), expected.to_string(), "edge {}-{}, j={j}", e.u, e.v);
                    }
                }
            }
        }
    }
}

#[test]
fn classes_partition_every_level() {
    let g = weighted_c4();
    let z = build_z(&g, 3, 6).unwrap();
    for k in 0..=3 {
        let mut by_class: HashMap<FaceClass, Vec<Rational>> = HashMap::new();
        for (face, w) in z.level(k).unwrap().iter() {
            by_class.entry(classify(&z, face).unwrap()).or_default().push(w.clone());
        }
        let total: usize = by_class.values().map(Vec::len).sum();
        assert_eq!(total, z.faces(k).unwrap().len());
        for weights in by_class.values() {
            assert!(weights.iter().all_equal());
        }
    }
}

#[test]
fn weight_oracle_triangle() {
    for g in [single_edge(), weighted_c4()] {
        for dim in [2, 3] {
            for colors in [dim + 1, 2 * dim] {
                let recursion = class_weights(&g, dim, colors).unwrap();
                let explicit = weights::class_weights_from_complex(&build_z(&g, dim, colors).unwrap()).unwrap();
                assert_eq!(recursion.entries().len(), explicit.entries().len());
                for (class, w) in recursion.entries() {
                    assert_eq!(explicit.get(&class), Some(w), "{class}");
                    if let FaceClass::Split { u, v, j, k } = class {
                        let closed = weights::closed_form_ratio(dim, colors, k, j).unwrap();
                        assert_eq!(closed * g.weight(u, v).unwrap(), *w, "{class}");
                    }
                }
            }
        }
    }
}

#[test]
fn split_ratios_are_edge_independent() {
    let g = weighted_c4();
    let t = class_weights(&g, 3, 6).unwrap();
    for k in 2..=4 {
        for j in 1..k {
            let ratios: Vec<Rational> = g
                .edges()
                .iter()
                .map(|e| t.split(e.u, e.v, j, k).unwrap() / &e.weight)
                .collect();
            assert!(ratios.iter().all_equal(), "k={k} j={j}");
        }
    }
}

/// The link skeleton of a split face `sigma` in class `(j, k-j)` over
/// `{u, v}` is `P (x) K` with `M_P = [[w(j+2,k-j), w(j+1,k-j+1)], [.., w(j,k-j+2)]]`
/// and `K` the complete graph on the colors missing from `sigma`.
#[test]
fn split_link_skeleton_is_a_tensor_product() {
    let g = weighted_c4();
    let (dim, colors) = (3, 6);
    let z = build_z(&g, dim, colors).unwrap();
    let t = class_weights(&g, dim, colors).unwrap();
    for k in 0..=1isize {
        for face in z.faces(k).unwrap() {
            let FaceClass::Split { u, v, j, k: size } = classify(&z, face).unwrap() else {
                continue;
            };
            let l = link(&z, face).unwrap();
            let skeleton = one_skeleton(&l).unwrap();
            let names: Vec<ZVertex> = l.faces(0).unwrap().iter().map(|f| f.vertices()[0]).collect();
            let actual: BTreeMap<(ZVertex, ZVertex), Rational> = skeleton
                .edges()
                .iter()
                .map(|e| ((names[e.u], names[e.v]), e.weight.clone()))
                .collect();

            let used = face.colors();
            let free: Vec<u32> = (1..=colors as u32).filter(|b| !used.contains(b)).collect();
            let p = |x: usize, y: usize| -> Rational {
                let over_u = j + (x == u) as usize + (y == u) as usize;
                t.split(u, v, over_u, size + 2).unwrap().clone()
            };
            let mut expected = BTreeMap::new();
            for (x, y) in [(u, u), (u, v), (v, u), (v, v)] {
                for &b in &free {
                    for &c in &free {
                        let (a, bb) = (ZVertex::new(x, b as usize), ZVertex::new(y, c as usize));
                        if b != c && a < bb {
                            expected.insert((a, bb), p(x, y));
                        }
                    }
                }
            }
            assert_eq!(actual, expected, "link of {face}");
        }
    }
}

#[test]
fn z_is_contained_in_q() {
    let g = hdx::gen_graph(hdx::GraphKind::Cycle, 4, None, 0).unwrap();
    let (z, q) = (build_z(&g, 2, 4).unwrap(), build_q(&g, 2, 4).unwrap());
    assert!(z.faces(2).unwrap().iter().all(|f| q.contains(f)));
    assert!(q.faces(2).unwrap().len() > z.faces(2).unwrap().len());
    assert!(q.level(2).unwrap().weights().iter().all(|w| w.is_one()));
}
