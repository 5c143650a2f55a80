//! Weighted high-dimensional expanders built as a product of a graph with a
//! complete complex, the unweighted baseline product, high-order up/down
//! random walks, and a harness that checks their spectral properties.

pub mod complex;
pub mod error;
pub mod expansion;
pub mod graphs;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod walks;
pub mod weights;

pub use complex::{
    build, build_q, build_z, classify, link, one_skeleton, verify_balance, BuildOptions, Complex,
    ComplexKind, Face, FaceClass, ZVertex,
};
pub use error::{Error, Result};
pub use graphs::{gen_graph, graph_spectrum, load_graph, GraphKind, GraphSpectrum, WeightedGraph};
pub use rational::Rational;
