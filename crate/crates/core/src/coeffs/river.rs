//! Coefficients of the river-network dispersion model `D u'' - v u'`.
//!
//! With the integrating factor `p(x) = exp(-∫ v/D)` taken along the path from
//! the root, `(p/D)(sigma - A)` is the Sturm-Liouville operator with
//! `q = sigma p / D`. On each edge `p` is an exponential in the local
//! coordinate, `p_e(x) = p(tail) exp(-v_e x / D_e)`, so `p'/p = -v_e/D_e`
//! with `v_e` measured in the edge's own orientation.

use crate::coeffs::expr::{BinOp, Expr, Func};
use crate::coeffs::{Coefficients, EdgeCoefficients, EdgeFunction};
use crate::error::{Error, Result};
use crate::graph::{Direction, GraphPoint, TreeGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct RiverData {
    /// `D_e > 0` per edge.
    pub diffusivity: Vec<f64>,
    /// `v_e` per edge, positive when flowing towards increasing `x`.
    pub velocity: Vec<f64>,
    pub sigma: f64,
    /// Optional per-edge weights; 1 when absent.
    pub rho: Option<Vec<f64>>,
}

/// Value of the integrating factor at every node.
pub fn node_integrating_factor(tree: &TreeGraph, r: &RiverData) -> Result<Vec<f64>> {
    let root = tree.root().ok_or(Error::NoRootDesignated)?;
    let mut values = vec![f64::NAN; tree.node_count()];
    values[root.0] = 1.0;
    for n in tree.node_ids().filter(|&n| n != root) {
        let e = tree.incident(n)[0];
        let edge = tree.edge(e);
        let target = GraphPoint::new(e, if edge.tail == n { 0.0 } else { edge.length });
        let exponent: f64 = tree
            .path_from_root(&target)?
            .iter()
            .map(|seg| {
                let rate = r.velocity[seg.edge.0] / r.diffusivity[seg.edge.0];
                match seg.direction {
                    Direction::Forward => rate * seg.length(),
                    Direction::Backward => -rate * seg.length(),
                }
            })
            .sum();
        values[n.0] = (-exponent).exp();
    }
    Ok(values)
}

pub fn river_coefficients(tree: &TreeGraph, r: &RiverData) -> Result<Coefficients> {
    let m = tree.edge_count();
    for len in [r.diffusivity.len(), r.velocity.len()] {
        if len != m {
            return Err(Error::EdgeCountMismatch { expected: m, got: len });
        }
    }
    if let Some(rho) = &r.rho {
        if rho.len() != m {
            return Err(Error::EdgeCountMismatch { expected: m, got: rho.len() });
        }
    }
    if !(r.sigma.is_finite() && r.sigma > 0.0) {
        return Err(Error::InvalidRiverData {
            edge: "*".into(),
            reason: format!("sigma must be positive, got {}", r.sigma),
        });
    }
    for e in tree.edge_ids() {
        let (d, v) = (r.diffusivity[e.0], r.velocity[e.0]);
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidRiverData {
                edge: tree.edge_name(e).into(),
                reason: format!("D must be positive, got {d}"),
            });
        }
        if !v.is_finite() {
            return Err(Error::InvalidRiverData {
                edge: tree.edge_name(e).into(),
                reason: format!("v must be finite, got {v}"),
            });
        }
    }
    let at_node = node_integrating_factor(tree, r)?;
    let edges = tree
        .edge_ids()
        .map(|e| {
            let (d, v) = (r.diffusivity[e.0], r.velocity[e.0]);
            let p0 = at_node[tree.edge(e).tail.0];
            let rho = r.rho.as_ref().map_or(1.0, |rho| rho[e.0]);
            EdgeCoefficients {
                p: scaled_exponential(p0, -v / d),
                q: scaled_exponential(r.sigma * p0 / d, -v / d),
                rho,
            }
        })
        .collect();
    Coefficients::new(tree, edges)
}

/// `scale * exp(rate * x)`
fn scaled_exponential(scale: f64, rate: f64) -> EdgeFunction {
    if rate == 0.0 {
        return EdgeFunction::Constant(scale);
    }
    EdgeFunction::Expression(Expr::binary(
        BinOp::Mul,
        Expr::num(scale),
        Expr::call(Func::Exp, Expr::binary(BinOp::Mul, Expr::num(rate), Expr::Var)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{EdgeId, End};

    fn data(d: &[f64], v: &[f64], sigma: f64) -> RiverData {
        RiverData { diffusivity: d.to_vec(), velocity: v.to_vec(), sigma, rho: None }
    }

    #[test]
    fn single_edge_closed_form() {
        let t = interval(1.0);
        let c = river_coefficients(&t, &data(&[2.0], &[1.0], 1.0)).unwrap();
        let p1 = c.p(EdgeId(0), 1.0).unwrap();
        assert!((p1 - 0.6065306597126334).abs() < 1e-13);
        assert!((c.q(EdgeId(0), 1.0).unwrap() - 0.3032653298563167).abs() < 1e-13);
        assert_eq!(c.rho(EdgeId(0)), 1.0);
    }

    #[test]
    fn zero_velocity_gives_unit_p() {
        let t = y_tree();
        let c = river_coefficients(&t, &data(&[1.0, 2.0, 4.0], &[0.0; 3], 3.0)).unwrap();
        for e in t.edge_ids() {
            assert_eq!(c.edge(e).p, EdgeFunction::Constant(1.0));
        }
        assert_eq!(c.edge(EdgeId(1)).q, EdgeFunction::Constant(1.5));
    }

    #[test]
    fn p_continuous_at_nodes() {
        let t = y_tree();
        let c = river_coefficients(&t, &data(&[1.0, 2.0, 0.5], &[1.0, -0.5, 2.0], 1.0)).unwrap();
        let n = t.node_id("n").unwrap();
        let vals: Vec<f64> = t.incident(n).iter().map(|&e| c.p_at(e, t.end_of(e, n).unwrap()).unwrap()).collect();
        for v in &vals {
            assert!((v - vals[0]).abs() <= 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn reversed_edge_still_continuous() {
        // edge y points towards the root
        let t = crate::graph::TreeGraph::build(&spec(
            &["r", "a", "b"],
            &[("x", "r", "a", 1.5), ("y", "b", "a", 0.7)],
            Some("r"),
        ))
        .unwrap();
        let c = river_coefficients(&t, &data(&[1.0, 0.3], &[0.4, -1.1], 2.0)).unwrap();
        let pa_x = c.p_at(EdgeId(0), End::Head).unwrap();
        let pa_y = c.p_at(EdgeId(1), End::Head).unwrap();
        assert!((pa_x - pa_y).abs() <= 1e-12 * pa_x.abs());
        assert!((c.p_at(EdgeId(0), End::Tail).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_data() {
        let t = interval(1.0);
        assert!(river_coefficients(&t, &data(&[0.0], &[1.0], 1.0)).is_err());
        assert!(river_coefficients(&t, &data(&[1.0], &[1.0], 0.0)).is_err());
        assert!(river_coefficients(&t, &data(&[1.0, 1.0], &[1.0], 1.0)).is_err());
        let unrooted =
            crate::graph::TreeGraph::build(&spec(&["a", "b"], &[("e", "a", "b", 1.0)], None)).unwrap();
        assert_eq!(river_coefficients(&unrooted, &data(&[1.0], &[1.0], 1.0)).unwrap_err(), Error::NoRootDesignated);
    }
}
