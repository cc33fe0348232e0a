//! Node conditions as linear functionals on function traces, and the matrix
//! `Δ_ij = ℓ_i[φ_j]` that decides solvability.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::coeffs::Coefficients;
use crate::edgeode::FundamentalBasis;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, NodeId, TreeGraph};

/// Reciprocal condition number at or below which `Δ` counts as singular.
pub const DEGENERACY_RCOND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// `f(n) = 0`
    Dirichlet,
    /// `f'^b(n) = 0`
    Neumann,
    /// `alpha f(n) + beta f'^b(n) = 0`
    Robin { alpha: f64, beta: f64 },
}

/// Boundary conditions keyed by node, with an optional fallback.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundarySpec {
    conditions: HashMap<NodeId, BoundaryCondition>,
    default: Option<BoundaryCondition>,
}

impl BoundarySpec {
    /// Every boundary node Dirichlet unless overridden.
    pub fn dirichlet() -> Self {
        Self { conditions: HashMap::new(), default: Some(BoundaryCondition::Dirichlet) }
    }

    /// No fallback: every boundary node must be listed.
    pub fn explicit() -> Self {
        Self::default()
    }

    pub fn with(mut self, node: NodeId, bc: BoundaryCondition) -> Self {
        self.conditions.insert(node, bc);
        self
    }

    pub fn set(&mut self, node: NodeId, bc: BoundaryCondition) {
        self.conditions.insert(node, bc);
    }

    pub fn condition(&self, node: NodeId) -> Option<BoundaryCondition> {
        self.conditions.get(&node).copied().or(self.default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalKind {
    /// `f_to(n) - f_from(n)`
    Continuity { node: NodeId, from: (EdgeId, End), to: (EdgeId, End) },
    /// `Σ rho_e f_e'^b(n)` over the incident edges.
    FluxSum { node: NodeId, incident: Vec<(EdgeId, End)> },
    Dirichlet { node: NodeId, at: (EdgeId, End) },
    Neumann { node: NodeId, at: (EdgeId, End) },
    Robin { node: NodeId, at: (EdgeId, End), alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub index: usize,
    pub kind: FunctionalKind,
}

impl Functional {
    pub fn node(&self) -> NodeId {
        match &self.kind {
            FunctionalKind::Continuity { node, .. }
            | FunctionalKind::FluxSum { node, .. }
            | FunctionalKind::Dirichlet { node, .. }
            | FunctionalKind::Neumann { node, .. }
            | FunctionalKind::Robin { node, .. } => *node,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(
            self.kind,
            FunctionalKind::Dirichlet { .. } | FunctionalKind::Neumann { .. } | FunctionalKind::Robin { .. }
        )
    }

    pub fn label(&self, tree: &TreeGraph) -> String {
        let n = tree.node_name(self.node());
        match &self.kind {
            FunctionalKind::Continuity { from, to, .. } => {
                format!("continuity({n}: {} -> {})", tree.edge_name(from.0), tree.edge_name(to.0))
            }
            FunctionalKind::FluxSum { .. } => format!("flux({n})"),
            FunctionalKind::Dirichlet { .. } => format!("dirichlet({n})"),
            FunctionalKind::Neumann { .. } => format!("neumann({n})"),
            FunctionalKind::Robin { alpha, beta, .. } => format!("robin({n}; {alpha}, {beta})"),
        }
    }

    /// Evaluates the functional on a trace.
    pub fn apply(&self, tr: &Trace, c: &Coefficients) -> Result<f64> {
        Ok(match &self.kind {
            FunctionalKind::Continuity { from, to, .. } => tr.get(to.0, to.1)?.value - tr.get(from.0, from.1)?.value,
            FunctionalKind::FluxSum { incident, .. } => {
                let mut sum = 0.0;
                for &(e, end) in incident {
                    sum += c.rho(e) * tr.get(e, end)?.derivative_b;
                }
                sum
            }
            FunctionalKind::Dirichlet { at, .. } => tr.get(at.0, at.1)?.value,
            FunctionalKind::Neumann { at, .. } => tr.get(at.0, at.1)?.derivative_b,
            FunctionalKind::Robin { at, alpha, beta, .. } => {
                let t = tr.get(at.0, at.1)?;
                alpha * t.value + beta * t.derivative_b
            }
        })
    }
}

/// The ordered family `ℓ_1 … ℓ_2m`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeConditions {
    functionals: Vec<Functional>,
    boundary_row: HashMap<NodeId, usize>,
}

impl NodeConditions {
    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Functional> {
        self.functionals.iter()
    }

    /// Row of the boundary functional attached to `node`.
    pub fn boundary_row(&self, node: NodeId) -> Option<usize> {
        self.boundary_row.get(&node).copied()
    }

    /// All functionals applied to one trace.
    pub fn apply_all(&self, tr: &Trace, c: &Coefficients) -> Result<Vec<f64>> {
        self.functionals.iter().map(|f| f.apply(tr, c)).collect()
    }
}

/// Continuity and flux functionals at internal nodes, one boundary
/// functional per boundary node; ordered by node id, then variant.
pub fn standard_functionals(tree: &TreeGraph, bc: &BoundarySpec) -> Result<NodeConditions> {
    for (&node, cond) in &bc.conditions {
        if node.0 >= tree.node_count() {
            return Err(Error::UnknownNode(format!("#{}", node.0)));
        }
        if !tree.is_boundary(node) {
            return Err(Error::NotBoundaryNode(tree.node_name(node).into()));
        }
        if let BoundaryCondition::Robin { alpha, beta } = cond {
            if !(alpha.is_finite() && beta.is_finite()) || (*alpha == 0.0 && *beta == 0.0) {
                return Err(Error::InvalidRobin(tree.node_name(node).into()));
            }
        }
    }
    let mut functionals = Vec::with_capacity(2 * tree.edge_count());
    let mut boundary_row = HashMap::new();
    let end = |e: EdgeId, n: NodeId| (e, tree.end_of(e, n).expect("incident edge"));
    for node in tree.node_ids() {
        let incident = tree.incident(node);
        if incident.len() == 1 {
            let at = end(incident[0], node);
            let kind = match bc.condition(node).ok_or_else(|| Error::MissingBoundarySpec(tree.node_name(node).into()))? {
                BoundaryCondition::Dirichlet => FunctionalKind::Dirichlet { node, at },
                BoundaryCondition::Neumann => FunctionalKind::Neumann { node, at },
                BoundaryCondition::Robin { alpha, beta } => FunctionalKind::Robin { node, at, alpha, beta },
            };
            boundary_row.insert(node, functionals.len());
            functionals.push(Functional { index: functionals.len(), kind });
        } else {
            for pair in incident.windows(2) {
                let kind = FunctionalKind::Continuity { node, from: end(pair[0], node), to: end(pair[1], node) };
                functionals.push(Functional { index: functionals.len(), kind });
            }
            let kind = FunctionalKind::FluxSum { node, incident: incident.iter().map(|&e| end(e, node)).collect() };
            functionals.push(Functional { index: functionals.len(), kind });
        }
    }
    debug_assert_eq!(functionals.len(), 2 * tree.edge_count());
    Ok(NodeConditions { functionals, boundary_row })
}

/// Value and outward derivatives of a function at one edge end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointTrace {
    pub value: f64,
    /// Derivative pointing out of the node into the edge.
    pub derivative_b: f64,
    /// `p f'^b`
    pub flux_b: f64,
}

impl EndpointTrace {
    pub const ZERO: EndpointTrace = EndpointTrace { value: 0.0, derivative_b: 0.0, flux_b: 0.0 };

    /// From the value and the parametrized flux `p f'` at the given end.
    pub fn from_state(end: End, value: f64, flux: f64, p: f64) -> Self {
        let s = end.outward_sign();
        EndpointTrace { value, derivative_b: s * flux / p, flux_b: s * flux }
    }
}

/// Endpoint data of one function on every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    ends: Vec<[Option<EndpointTrace>; 2]>,
    names: Vec<String>,
}

impl Trace {
    pub fn empty(tree: &TreeGraph) -> Self {
        Self { ends: vec![[None, None]; tree.edge_count()], names: tree.edges().iter().map(|e| e.name.clone()).collect() }
    }

    pub fn zeros(tree: &TreeGraph) -> Self {
        let mut t = Self::empty(tree);
        t.ends.iter_mut().for_each(|e| *e = [Some(EndpointTrace::ZERO); 2]);
        t
    }

    pub fn set(&mut self, e: EdgeId, end: End, t: EndpointTrace) {
        self.ends[e.0][end_index(end)] = Some(t);
    }

    pub fn get(&self, e: EdgeId, end: End) -> Result<&EndpointTrace> {
        self.ends[e.0][end_index(end)].as_ref().ok_or_else(|| Error::IncompleteTrace(self.names[e.0].clone()))
    }

    /// Trace of a function given by its `(f, p f')` state on each edge.
    pub fn from_states<F>(tree: &TreeGraph, c: &Coefficients, mut state: F) -> Result<Self>
    where
        F: FnMut(EdgeId, f64) -> Result<[f64; 2]>,
    {
        let mut t = Self::empty(tree);
        for e in tree.edge_ids() {
            for end in [End::Tail, End::Head] {
                let x = tree.edge(e).coordinate(end);
                let [value, flux] = state(e, x)?;
                t.set(e, end, EndpointTrace::from_state(end, value, flux, c.p_at(e, end)?));
            }
        }
        Ok(t)
    }
}

fn end_index(end: End) -> usize {
    match end {
        End::Tail => 0,
        End::Head => 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondegeneracyReport {
    pub det: f64,
    pub rcond: f64,
    pub nondegenerate: bool,
}

/// `Δ` with its LU factorization and conditioning.
#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    matrix: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    inverse: Option<DMatrix<f64>>,
    det: f64,
    rcond: f64,
}

impl DeltaMatrix {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        let lu = matrix.clone().lu();
        let det = lu.determinant();
        let inverse = lu.try_inverse().filter(|inv| inv.iter().all(|v| v.is_finite()));
        let rcond = match &inverse {
            Some(inv) => {
                let (a, b) = (norm1(&matrix), norm1(inv));
                if a > 0.0 && b > 0.0 {
                    1.0 / (a * b)
                } else {
                    0.0
                }
            }
            None => 0.0,
        };
        Self { matrix, lu, inverse, det, rcond }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rcond > DEGENERACY_RCOND
    }

    pub fn report(&self) -> NondegeneracyReport {
        check_nondegenerate(self)
    }

    /// Solves `Δ a = rhs`.
    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        if rhs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: rhs.len() });
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateProblem { rcond: self.rcond });
        }
        self.lu.solve(rhs).ok_or(Error::DegenerateProblem { rcond: self.rcond })
    }

    /// `Δ^{-1}`; column `i` holds the basis coefficients of `η_i`.
    pub fn inverse(&self) -> Result<&DMatrix<f64>> {
        match &self.inverse {
            Some(inv) if self.is_nondegenerate() => Ok(inv),
            _ => Err(Error::DegenerateProblem { rcond: self.rcond }),
        }
    }
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn check_nondegenerate(delta: &DeltaMatrix) -> NondegeneracyReport {
    NondegeneracyReport { det: delta.det, rcond: delta.rcond, nondegenerate: delta.is_nondegenerate() }
}

/// Trace of basis function `φ_j`: its own edge from the dense solution,
/// zero on every other edge.
pub fn basis_trace(tree: &TreeGraph, basis: &FundamentalBasis, c: &Coefficients, j: usize) -> Result<Trace> {
    let own = basis.edge_of(j);
    let sol = basis.function(j);
    Trace::from_states(tree, c, |e, x| if e == own { sol.state(x) } else { Ok([0.0, 0.0]) })
}

pub fn delta_matrix(
    tree: &TreeGraph,
    basis: &FundamentalBasis,
    fs: &NodeConditions,
    c: &Coefficients,
) -> Result<DeltaMatrix> {
    let n = basis.len();
    if fs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: fs.len() });
    }
    let mut matrix = DMatrix::zeros(n, n);
    for j in 0..n {
        let tr = basis_trace(tree, basis, c, j)?;
        for (i, f) in fs.iter().enumerate() {
            matrix[(i, j)] = f.apply(&tr, c)?;
        }
    }
    Ok(DeltaMatrix::from_matrix(matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::EdgeCoefficients;
    use crate::edgeode::IntegratorOptions;
    use crate::graph::fixtures::*;

    fn unit(tree: &TreeGraph, q: f64) -> Coefficients {
        Coefficients::uniform(tree, EdgeCoefficients::new(1.0, q, 1.0)).unwrap()
    }

    #[test]
    fn functional_counts() {
        let y = y_tree();
        let fs = standard_functionals(&y, &BoundarySpec::dirichlet()).unwrap();
        let kinds: Vec<_> = fs.iter().map(|f| f.label(&y)).collect();
        assert_eq!(
            kinds,
            ["dirichlet(phi)", "continuity(n: e0 -> e1)", "continuity(n: e1 -> e2)", "flux(n)", "dirichlet(b1)", "dirichlet(b2)"]
        );
        assert_eq!(standard_functionals(&interval(1.0), &BoundarySpec::dirichlet()).unwrap().len(), 2);
        let path = TreeGraph::build(&spec(&["a", "b", "c"], &[("x", "a", "b", 1.0), ("y", "b", "c", 1.0)], None)).unwrap();
        let fs = standard_functionals(&path, &BoundarySpec::dirichlet()).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs.iter().filter(|f| matches!(f.kind, FunctionalKind::Continuity { .. })).count(), 1);
    }

    #[test]
    fn missing_and_misplaced_specs() {
        let y = y_tree();
        let phi = y.node_id("phi").unwrap();
        let spec = BoundarySpec::explicit().with(phi, BoundaryCondition::Dirichlet);
        assert_eq!(standard_functionals(&y, &spec).unwrap_err(), Error::MissingBoundarySpec("b1".into()));
        let n = y.node_id("n").unwrap();
        let spec = BoundarySpec::dirichlet().with(n, BoundaryCondition::Neumann);
        assert_eq!(standard_functionals(&y, &spec).unwrap_err(), Error::NotBoundaryNode("n".into()));
        let spec = BoundarySpec::dirichlet().with(phi, BoundaryCondition::Robin { alpha: 0.0, beta: 0.0 });
        assert!(matches!(standard_functionals(&y, &spec), Err(Error::InvalidRobin(_))));
    }

    #[test]
    fn apply_on_hand_traces() {
        let y = y_tree();
        let c = unit(&y, 0.0);
        let fs = standard_functionals(&y, &BoundarySpec::dirichlet()).unwrap();
        // piecewise-linear, value 1 at n: slopes -1 out of n into e0 and e2, +2 into e1
        let lines: [(f64, f64); 3] = [(0.0, 1.0), (1.0, 2.0), (1.0, -1.0)]; // (f(0), f'(x)) per edge
        let tr = Trace::from_states(&y, &c, |e, x| {
            let (a, s) = lines[e.0];
            Ok([a + s * x, s])
        })
        .unwrap();
        let flux = fs.iter().find(|f| matches!(f.kind, FunctionalKind::FluxSum { .. })).unwrap();
        assert!(flux.apply(&tr, &c).unwrap().abs() < 1e-15);
        for f in fs.iter().filter(|f| matches!(f.kind, FunctionalKind::Continuity { .. })) {
            assert_eq!(f.apply(&tr, &c).unwrap(), 0.0);
        }
        // Dirichlet at b1 = (e1, 1): value 3
        assert_eq!(fs.functionals()[4].apply(&tr, &c).unwrap(), 3.0);
    }

    #[test]
    fn dirichlet_of_identity_at_head() {
        let t = interval(1.0);
        let c = unit(&t, 0.0);
        let fs = standard_functionals(&t, &BoundarySpec::dirichlet()).unwrap();
        let tr = Trace::from_states(&t, &c, |_, x| Ok([x, 1.0])).unwrap();
        assert_eq!(fs.functionals()[1].apply(&tr, &c).unwrap(), 1.0);
    }

    #[test]
    fn incomplete_trace() {
        let t = interval(1.0);
        let c = unit(&t, 0.0);
        let fs = standard_functionals(&t, &BoundarySpec::dirichlet()).unwrap();
        let mut tr = Trace::empty(&t);
        tr.set(EdgeId(0), End::Tail, EndpointTrace::ZERO);
        assert_eq!(fs.functionals()[0].apply(&tr, &c).unwrap(), 0.0);
        assert_eq!(fs.functionals()[1].apply(&tr, &c).unwrap_err(), Error::IncompleteTrace("e".into()));
    }

    #[test]
    fn interval_dirichlet_delta() {
        let t = interval(1.0);
        let c = unit(&t, 0.0);
        let b = FundamentalBasis::build(&t, &c, &IntegratorOptions::default()).unwrap();
        let fs = standard_functionals(&t, &BoundarySpec::dirichlet()).unwrap();
        let d = delta_matrix(&t, &b, &fs, &c).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        assert!((d.matrix() - &expect).amax() < 1e-14);
        let r = d.report();
        assert!((r.det - 1.0).abs() < 1e-14);
        assert!(r.nondegenerate);
    }

    #[test]
    fn neumann_neumann_is_degenerate() {
        let t = interval(1.0);
        let c = unit(&t, 0.0);
        let b = FundamentalBasis::build(&t, &c, &IntegratorOptions::default()).unwrap();
        let spec = BoundarySpec::explicit()
            .with(NodeId(0), BoundaryCondition::Neumann)
            .with(NodeId(1), BoundaryCondition::Neumann);
        let fs = standard_functionals(&t, &spec).unwrap();
        let d = delta_matrix(&t, &b, &fs, &c).unwrap();
        // rows [0, 1] and [0, -1]
        assert!((d.matrix()[(0, 1)] - 1.0).abs() < 1e-14);
        assert!((d.matrix()[(1, 1)] + 1.0).abs() < 1e-14);
        let r = d.report();
        assert_eq!(r.det, 0.0);
        assert!(!r.nondegenerate);
        assert!(matches!(d.solve(&DVector::from_element(2, 1.0)), Err(Error::DegenerateProblem { .. })));
    }

    #[test]
    fn identity_nondegenerate() {
        let d = DeltaMatrix::from_matrix(DMatrix::identity(4, 4));
        assert_eq!(d.rcond(), 1.0);
        assert!(d.report().nondegenerate);
    }

    #[test]
    fn y_tree_harmonic_nondegenerate() {
        let y = y_tree();
        let c = unit(&y, 0.0);
        let b = FundamentalBasis::build(&y, &c, &IntegratorOptions::default()).unwrap();
        let fs = standard_functionals(&y, &BoundarySpec::dirichlet()).unwrap();
        let d = delta_matrix(&y, &b, &fs, &c).unwrap();
        assert!(d.det().abs() > 0.1);
        assert!(d.is_nondegenerate());
    }

    #[test]
    fn robin_row() {
        let t = interval(1.0);
        let c = unit(&t, 0.0);
        let spec = BoundarySpec::dirichlet().with(NodeId(1), BoundaryCondition::Robin { alpha: 2.0, beta: 3.0 });
        let fs = standard_functionals(&t, &spec).unwrap();
        // f = x at the head: value 1, outward derivative -1
        let tr = Trace::from_states(&t, &c, |_, x| Ok([x, 1.0])).unwrap();
        assert_eq!(fs.functionals()[1].apply(&tr, &c).unwrap(), 2.0 - 3.0);
    }
}
