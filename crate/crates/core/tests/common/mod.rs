#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use treegreen_core::coeffs::parse_expression;
use treegreen_core::{
    river_coefficients, BoundarySpec, Coefficients, EdgeCoefficients, EdgeId, EdgeSpec, GraphPoint, GreenOptions,
    GreensFunction, RiverData, TreeGraph, TreeSpec,
};

pub fn tree(nodes: &[&str], edges: &[(&str, &str, &str, f64)], root: Option<&str>) -> TreeGraph {
    TreeGraph::build(&TreeSpec {
        nodes: nodes.iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .map(|&(id, tail, head, length)| EdgeSpec { id: id.into(), tail: tail.into(), head: head.into(), length })
            .collect(),
        root: root.map(Into::into),
    })
    .unwrap()
}

pub fn interval() -> TreeGraph {
    tree(&["a", "b"], &[("e", "a", "b", 1.0)], Some("a"))
}

pub fn y_tree() -> TreeGraph {
    tree(
        &["phi", "n", "b1", "b2"],
        &[("e0", "phi", "n", 1.0), ("e1", "n", "b1", 1.0), ("e2", "n", "b2", 1.0)],
        Some("phi"),
    )
}

/// Root edge into a full binary tree of depth two: 7 edges, 5 boundary nodes.
pub fn binary7() -> TreeGraph {
    tree(
        &["r", "a", "b", "c", "l1", "l2", "l3", "l4"],
        &[
            ("e0", "r", "a", 1.0),
            ("e1", "a", "b", 0.8),
            ("e2", "a", "c", 1.2),
            ("e3", "b", "l1", 0.5),
            ("e4", "b", "l2", 0.7),
            ("e5", "c", "l3", 0.9),
            ("e6", "c", "l4", 1.1),
        ],
        Some("r"),
    )
}

pub fn per_edge(t: &TreeGraph, p: &str, q: &str, rho: &[f64]) -> Coefficients {
    let edges = rho
        .iter()
        .map(|&r| EdgeCoefficients::new(parse_expression(p).unwrap(), parse_expression(q).unwrap(), r))
        .collect();
    Coefficients::new(t, edges).unwrap()
}

pub fn green(t: TreeGraph, c: Coefficients) -> GreensFunction {
    GreensFunction::new(t, c, BoundarySpec::dirichlet(), GreenOptions::default()).unwrap()
}

pub fn y_weighted() -> GreensFunction {
    let t = y_tree();
    let c = per_edge(&t, "1", "0", &[1.0, 2.0, 3.0]);
    green(t, c)
}

pub fn river_data() -> RiverData {
    RiverData { diffusivity: vec![1.0, 0.5, 2.0], velocity: vec![0.8, -0.4, 1.2], sigma: 1.5, rho: None }
}

pub fn y_river() -> GreensFunction {
    let t = y_tree();
    let c = river_coefficients(&t, &river_data()).unwrap();
    green(t, c)
}

/// River coefficients on [`binary7`] (`p` continuous across nodes) with
/// non-uniform weights.
pub fn binary_variable() -> GreensFunction {
    let t = binary7();
    let data = RiverData {
        diffusivity: vec![1.0, 0.6, 1.4, 0.8, 2.0, 0.5, 1.1],
        velocity: vec![0.5, -0.3, 0.9, 0.2, -0.7, 0.4, 0.0],
        sigma: 0.8,
        rho: Some((0..7).map(|i| 1.0 + 0.25 * i as f64).collect()),
    };
    let c = river_coefficients(&t, &data).unwrap();
    green(t, c)
}

/// Every configuration the property tests sweep.
pub fn configurations() -> Vec<(&'static str, GreensFunction)> {
    let i = interval();
    let sinh = per_edge(&i, "1", "1", &[1.0]);
    let lin = per_edge(&i, "1", "0", &[1.0]);
    vec![
        ("interval", green(i.clone(), lin)),
        ("sinh", green(i, sinh)),
        ("y-weighted", y_weighted()),
        ("y-river", y_river()),
        ("binary", binary_variable()),
    ]
}

pub fn random_points(t: &TreeGraph, count: usize, seed: u64) -> Vec<GraphPoint> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e = EdgeId(rng.random_range(0..t.edge_count()));
            let len = t.edge(e).length;
            GraphPoint::new(e, len * rng.random_range(0.01..0.99))
        })
        .collect()
}
