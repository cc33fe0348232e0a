//! Per-edge coefficients `p`, `q` and the constant edge weights `rho` of the
//! operator `-(p f')' + q f`.

pub mod expr;
pub mod river;
pub mod table;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, TreeGraph};

pub use expr::{EvalError, Expr, ParseError};
pub use river::{river_coefficients, RiverData};
pub use table::MonotoneCubic;

/// A real function on one edge, in the edge-local coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeFunction {
    Constant(f64),
    Expression(Expr),
    Table(MonotoneCubic),
}

impl EdgeFunction {
    /// Parses a coefficient expression. Expressions without `x` fold to
    /// [`EdgeFunction::Constant`].
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let expr = Expr::parse(text)?;
        if !expr.depends_on_x() {
            if let Ok(v) = expr.eval(0.0) {
                return Ok(EdgeFunction::Constant(v));
            }
        }
        Ok(EdgeFunction::Expression(expr))
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            EdgeFunction::Constant(v) => Ok(*v),
            EdgeFunction::Expression(e) => e.eval(x),
            EdgeFunction::Table(t) => t.eval(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EdgeFunction::Constant(v) if *v == 0.0)
    }
}

impl From<f64> for EdgeFunction {
    fn from(v: f64) -> Self {
        EdgeFunction::Constant(v)
    }
}

/// Shorthand for [`EdgeFunction::parse`].
pub fn parse_expression(text: &str) -> Result<EdgeFunction, ParseError> {
    EdgeFunction::parse(text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCoefficients {
    pub p: EdgeFunction,
    pub q: EdgeFunction,
    pub rho: f64,
}

impl EdgeCoefficients {
    pub fn new(p: impl Into<EdgeFunction>, q: impl Into<EdgeFunction>, rho: f64) -> Self {
        Self { p: p.into(), q: q.into(), rho }
    }
}

/// Coefficients for every edge of one tree, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    edges: Vec<EdgeCoefficients>,
    names: Vec<String>,
    lengths: Vec<f64>,
}

impl Coefficients {
    pub fn new(tree: &TreeGraph, edges: Vec<EdgeCoefficients>) -> Result<Self> {
        if edges.len() != tree.edge_count() {
            return Err(Error::EdgeCountMismatch { expected: tree.edge_count(), got: edges.len() });
        }
        for (edge, c) in tree.edges().iter().zip(&edges) {
            if !(c.rho.is_finite() && c.rho > 0.0) {
                return Err(Error::NonPositiveRho { edge: edge.name.clone(), rho: c.rho });
            }
            for f in [&c.p, &c.q] {
                if let EdgeFunction::Table(t) = f {
                    let (lo, hi) = t.domain();
                    if lo > 0.0 || hi < edge.length {
                        return Err(Error::TableCoverage { edge: edge.name.clone(), length: edge.length });
                    }
                }
            }
        }
        Ok(Self {
            edges,
            names: tree.edges().iter().map(|e| e.name.clone()).collect(),
            lengths: tree.edges().iter().map(|e| e.length).collect(),
        })
    }

    /// The same coefficients on every edge.
    pub fn uniform(tree: &TreeGraph, c: EdgeCoefficients) -> Result<Self> {
        Self::new(tree, vec![c; tree.edge_count()])
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeCoefficients {
        &self.edges[e.0]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.names[e.0]
    }

    pub fn rho(&self, e: EdgeId) -> f64 {
        self.edges[e.0].rho
    }

    pub fn p(&self, e: EdgeId, x: f64) -> Result<f64> {
        self.wrap(e, self.edges[e.0].p.eval(x))
    }

    pub fn q(&self, e: EdgeId, x: f64) -> Result<f64> {
        self.wrap(e, self.edges[e.0].q.eval(x))
    }

    /// `p` at the given end of `e`.
    pub fn p_at(&self, e: EdgeId, end: End) -> Result<f64> {
        let x = match end {
            End::Tail => 0.0,
            End::Head => self.lengths[e.0],
        };
        self.p(e, x)
    }

    fn wrap(&self, e: EdgeId, r: Result<f64, EvalError>) -> Result<f64> {
        r.map_err(|source| Error::CoefficientEvaluation { edge: self.names[e.0].clone(), source })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    pub min_p: f64,
    pub max_p: f64,
    pub max_abs_q: f64,
    pub min_rho: f64,
    /// Largest difference of `p` between incident edges at an internal
    /// node. The tree formula assumes `p` continuous across nodes.
    pub max_p_jump: f64,
}

/// Samples `p` and `q` on `n_samples` equispaced points per edge and checks
/// `p > 0`, `rho > 0`.
pub fn validate(c: &Coefficients, tree: &TreeGraph, n_samples: usize) -> Result<CoefficientReport> {
    let n_samples = n_samples.max(2);
    let mut report = CoefficientReport {
        min_p: f64::INFINITY,
        max_p: f64::NEG_INFINITY,
        max_abs_q: 0.0,
        min_rho: f64::INFINITY,
        max_p_jump: 0.0,
    };
    for e in tree.edge_ids() {
        let len = tree.edge(e).length;
        let rho = c.rho(e);
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::NonPositiveRho { edge: c.edge_name(e).to_string(), rho });
        }
        report.min_rho = report.min_rho.min(rho);
        let mut edge_min = f64::INFINITY;
        for k in 0..n_samples {
            let x = len * k as f64 / (n_samples - 1) as f64;
            let p = c.p(e, x)?;
            let q = c.q(e, x)?;
            // NaN must not slip through the comparisons below
            edge_min = if p.is_nan() { f64::NEG_INFINITY } else { edge_min.min(p) };
            report.max_p = report.max_p.max(p);
            report.max_abs_q = report.max_abs_q.max(if q.is_nan() { f64::INFINITY } else { q.abs() });
        }
        if edge_min.is_nan() || edge_min <= 0.0 {
            return Err(Error::NonPositiveP { edge: c.edge_name(e).to_string(), min: edge_min });
        }
        report.min_p = report.min_p.min(edge_min);
    }
    for &n in tree.internal_nodes() {
        let values = tree
            .incident(n)
            .iter()
            .map(|&e| c.p_at(e, tree.end_of(e, n).expect("incident edge")))
            .collect::<Result<Vec<_>>>()?;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        report.max_p_jump = report.max_p_jump.max(hi - lo);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn constant_folding() {
        assert_eq!(parse_expression("1").unwrap(), EdgeFunction::Constant(1.0));
        assert_eq!(parse_expression("2*pi").unwrap(), EdgeFunction::Constant(2.0 * std::f64::consts::PI));
        assert!(matches!(parse_expression("x").unwrap(), EdgeFunction::Expression(_)));
    }

    #[test]
    fn validate_unit_coefficients() {
        let t = y_tree();
        let c = Coefficients::uniform(&t, EdgeCoefficients::new(1.0, 0.0, 1.0)).unwrap();
        let r = validate(&c, &t, 11).unwrap();
        assert_eq!(r.min_p, 1.0);
        assert_eq!(r.max_abs_q, 0.0);
        assert_eq!(r.max_p_jump, 0.0);
    }

    #[test]
    fn validate_rejects_sign_change() {
        let t = interval(1.0);
        let c = Coefficients::uniform(&t, EdgeCoefficients::new(parse_expression("x - 0.5").unwrap(), 0.0, 1.0))
            .unwrap();
        assert!(matches!(validate(&c, &t, 11), Err(Error::NonPositiveP { .. })));
    }

    #[test]
    fn non_positive_rho_rejected() {
        let t = interval(1.0);
        assert!(matches!(
            Coefficients::uniform(&t, EdgeCoefficients::new(1.0, 0.0, 0.0)),
            Err(Error::NonPositiveRho { .. })
        ));
    }

    #[test]
    fn table_must_cover_edge() {
        let t = interval(2.0);
        let table = MonotoneCubic::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            Coefficients::uniform(&t, EdgeCoefficients::new(EdgeFunction::Table(table), 0.0, 1.0)),
            Err(Error::TableCoverage { .. })
        ));
    }

    #[test]
    fn p_jump_reported() {
        let t = y_tree();
        let mut edges = vec![EdgeCoefficients::new(1.0, 0.0, 1.0); 3];
        edges[1].p = EdgeFunction::Constant(3.0);
        let c = Coefficients::new(&t, edges).unwrap();
        assert_eq!(validate(&c, &t, 4).unwrap().max_p_jump, 2.0);
    }
}
