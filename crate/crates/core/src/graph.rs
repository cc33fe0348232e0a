//! Finite metric tree graphs.
//!
//! Every edge is parametrized as `[0, length]` running from its tail node
//! (`x = 0`) to its head node (`x = length`). Nodes and edges are addressed
//! by dense indices assigned in declaration order; the user-facing names are
//! kept for diagnostics and output.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Which end of an edge a node sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    /// `x = 0`
    Tail,
    /// `x = length`
    Head,
}

impl End {
    /// Sign that turns the parametrized derivative into the derivative
    /// pointing out of the node into the edge.
    pub fn outward_sign(self) -> f64 {
        match self {
            End::Tail => 1.0,
            End::Head => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TreeSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub root: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub name: String,
    pub tail: NodeId,
    pub head: NodeId,
    pub length: f64,
}

impl Edge {
    pub fn node_at(&self, end: End) -> NodeId {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }

    pub fn coordinate(&self, end: End) -> f64 {
        match end {
            End::Tail => 0.0,
            End::Head => self.length,
        }
    }
}

/// A point `(e, x)` with `0 <= x <= length(e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub edge: EdgeId,
    pub x: f64,
}

impl GraphPoint {
    pub fn new(edge: EdgeId, x: f64) -> Self {
        Self { edge, x }
    }
}

/// Side of a cut `(e, x)`. `Gamma` is the component containing `(e, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Gamma,
    Lambda,
}

/// One component of the tree cut at an interior point.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtreeSide {
    pub side: Side,
    pub cut: GraphPoint,
    /// Member edges with the retained sub-interval `[from, to]` in the
    /// edge's own coordinate.
    pub segments: Vec<(EdgeId, f64, f64)>,
    pub nodes: Vec<NodeId>,
}

impl SubtreeSide {
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|(_, a, b)| b - a).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Increasing edge coordinate.
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSegment {
    pub edge: EdgeId,
    pub direction: Direction,
    pub from: f64,
    pub to: f64,
}

impl PathSegment {
    pub fn length(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

#[derive(Debug, Clone)]
pub struct TreeGraph {
    node_names: Vec<String>,
    edges: Vec<Edge>,
    root: Option<NodeId>,
    /// Incident edges per node, sorted by edge id.
    incidence: Vec<Vec<EdgeId>>,
    boundary: Vec<NodeId>,
    internal: Vec<NodeId>,
    /// `tail_component[e][n]`: node `n` is reachable from the tail of `e`
    /// without crossing `e`.
    tail_component: Vec<Vec<bool>>,
    node_index: HashMap<String, NodeId>,
    edge_index: HashMap<String, EdgeId>,
}

impl TreeGraph {
    pub fn build(spec: &TreeSpec) -> Result<Self> {
        if spec.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut node_index = HashMap::new();
        for (i, name) in spec.nodes.iter().enumerate() {
            if node_index.insert(name.clone(), NodeId(i)).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
        }
        let n = spec.nodes.len();
        let mut edge_index = HashMap::new();
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut dsu = DisjointSets::new(n);
        for (i, e) in spec.edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), EdgeId(i)).is_some() {
                return Err(Error::DuplicateId(e.id.clone()));
            }
            let lookup = |name: &str| {
                node_index.get(name).copied().ok_or_else(|| Error::DanglingEndpoint {
                    edge: e.id.clone(),
                    node: name.to_string(),
                })
            };
            let tail = lookup(&e.tail)?;
            let head = lookup(&e.head)?;
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::NonPositiveLength { edge: e.id.clone(), length: e.length });
            }
            if !dsu.union(tail.0, head.0) {
                return Err(Error::CycleDetected(e.id.clone()));
            }
            edges.push(Edge { name: e.id.clone(), tail, head, length: e.length });
        }
        let anchor = dsu.find(0);
        if let Some(lost) = (0..n).find(|&i| dsu.find(i) != anchor) {
            return Err(Error::Disconnected(spec.nodes[lost].clone()));
        }

        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.tail.0].push(EdgeId(i));
            incidence[e.head.0].push(EdgeId(i));
        }
        let (boundary, internal): (Vec<NodeId>, Vec<NodeId>) =
            (0..n).map(NodeId).partition(|v| incidence[v.0].len() == 1);

        let root = match &spec.root {
            Some(name) => {
                Some(*node_index.get(name).ok_or_else(|| Error::UnknownNode(name.clone()))?)
            }
            None => None,
        };

        let mut tree = TreeGraph {
            node_names: spec.nodes.clone(),
            edges,
            root,
            incidence,
            boundary,
            internal,
            tail_component: Vec::new(),
            node_index,
            edge_index,
        };
        tree.tail_component = (0..tree.edge_count())
            .map(|e| tree.component_without(EdgeId(e), tree.edges[e].tail))
            .collect();
        Ok(tree)
    }

    fn component_without(&self, cut: EdgeId, start: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[start.0] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.incidence[v.0] {
                if e == cut {
                    continue;
                }
                let w = self.opposite(e, v);
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    /// Number of edges, `m`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_names.len()).map(NodeId)
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.node_names[n.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId> {
        self.node_index.get(name).copied().ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_index.get(name).copied().ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn incident(&self, n: NodeId) -> &[EdgeId] {
        &self.incidence[n.0]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.incidence[n.0].len()
    }

    pub fn is_boundary(&self, n: NodeId) -> bool {
        self.degree(n) == 1
    }

    /// `∂Γ`, sorted by node id.
    pub fn boundary_nodes(&self) -> &[NodeId] {
        &self.boundary
    }

    pub fn internal_nodes(&self) -> &[NodeId] {
        &self.internal
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Endpoint of `e` other than `n`.
    pub fn opposite(&self, e: EdgeId, n: NodeId) -> NodeId {
        let edge = &self.edges[e.0];
        if edge.tail == n {
            edge.head
        } else {
            edge.tail
        }
    }

    /// Which end of `e` the node `n` sits at.
    pub fn end_of(&self, e: EdgeId, n: NodeId) -> Option<End> {
        let edge = &self.edges[e.0];
        if edge.tail == n {
            Some(End::Tail)
        } else if edge.head == n {
            Some(End::Head)
        } else {
            None
        }
    }

    pub fn point(&self, edge: EdgeId, x: f64) -> Result<GraphPoint> {
        self.check_point(&GraphPoint { edge, x })?;
        Ok(GraphPoint { edge, x })
    }

    pub fn check_point(&self, p: &GraphPoint) -> Result<()> {
        let edge = self.edges.get(p.edge.0).ok_or_else(|| Error::UnknownEdge(format!("#{}", p.edge.0)))?;
        if !(p.x >= 0.0 && p.x <= edge.length) {
            return Err(Error::OutOfDomain { edge: edge.name.clone(), x: p.x, length: edge.length });
        }
        Ok(())
    }

    pub fn is_interior(&self, p: &GraphPoint) -> bool {
        p.x > 0.0 && p.x < self.edges[p.edge.0].length
    }

    /// The node a point coincides with, if it sits at an edge end.
    pub fn node_at(&self, p: &GraphPoint) -> Option<NodeId> {
        let edge = &self.edges[p.edge.0];
        if p.x == 0.0 {
            Some(edge.tail)
        } else if p.x == edge.length {
            Some(edge.head)
        } else {
            None
        }
    }

    /// Side of the tail component of `cut` on which node `n` lies.
    pub fn node_side(&self, cut: EdgeId, n: NodeId) -> Side {
        if self.tail_component[cut.0][n.0] {
            Side::Gamma
        } else {
            Side::Lambda
        }
    }

    /// Side of `cut` that a whole edge other than `cut` lies on.
    pub fn edge_side(&self, cut: EdgeId, e: EdgeId) -> Side {
        debug_assert_ne!(cut, e);
        self.node_side(cut, self.edges[e.0].tail)
    }

    /// Boundary nodes of the original tree on one side of `cut`, sorted.
    pub fn boundary_nodes_on(&self, cut: EdgeId, side: Side) -> Vec<NodeId> {
        self.boundary.iter().copied().filter(|&n| self.node_side(cut, n) == side).collect()
    }

    /// Splits the tree at an interior point into its two components.
    pub fn split(&self, p: &GraphPoint) -> Result<(SubtreeSide, SubtreeSide)> {
        self.check_point(p)?;
        if !self.is_interior(p) {
            return Err(Error::PointAtNode);
        }
        let cut = p.edge;
        let mut sides = [Side::Gamma, Side::Lambda].map(|side| SubtreeSide {
            side,
            cut: *p,
            segments: Vec::new(),
            nodes: Vec::new(),
        });
        for e in self.edge_ids() {
            if e == cut {
                sides[0].segments.push((e, 0.0, p.x));
                sides[1].segments.push((e, p.x, self.edges[e.0].length));
            } else {
                let k = side_index(self.edge_side(cut, e));
                sides[k].segments.push((e, 0.0, self.edges[e.0].length));
            }
        }
        for n in self.node_ids() {
            let k = side_index(self.node_side(cut, n));
            sides[k].nodes.push(n);
        }
        let [gamma, lambda] = sides;
        Ok((gamma, lambda))
    }

    /// Side of the cut `(e, x)` containing `y`. Points on the cut edge are
    /// compared by coordinate.
    pub fn locate_side(&self, cut: &GraphPoint, y: &GraphPoint) -> Result<Side> {
        self.check_point(cut)?;
        self.check_point(y)?;
        if !self.is_interior(cut) {
            return Err(Error::PointAtNode);
        }
        self.side_of(cut, y).ok_or(Error::CoincidentPoints)
    }

    /// Like [`locate_side`](Self::locate_side) but also accepts a cut at an
    /// edge end (understood as the one-sided limit along `cut.edge`).
    /// Returns `None` when the points coincide.
    pub(crate) fn side_of(&self, cut: &GraphPoint, y: &GraphPoint) -> Option<Side> {
        if y.edge == cut.edge {
            return if y.x < cut.x {
                Some(Side::Gamma)
            } else if y.x > cut.x {
                Some(Side::Lambda)
            } else {
                None
            };
        }
        match self.node_at(y) {
            Some(n) if n == self.edges[cut.edge.0].tail => {
                if cut.x == 0.0 {
                    None
                } else {
                    Some(Side::Gamma)
                }
            }
            Some(n) if n == self.edges[cut.edge.0].head => {
                if cut.x == self.edges[cut.edge.0].length {
                    None
                } else {
                    Some(Side::Lambda)
                }
            }
            _ => Some(self.edge_side(cut.edge, y.edge)),
        }
    }

    /// Node path from the root to `target`, as the sequence of edges walked.
    fn node_path_from_root(&self, target: NodeId) -> Result<Vec<(EdgeId, Direction)>> {
        let root = self.root.ok_or(Error::NoRootDesignated)?;
        let mut parent: Vec<Option<(EdgeId, NodeId)>> = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        seen[root.0] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if v == target {
                break;
            }
            for &e in &self.incidence[v.0] {
                let w = self.opposite(e, v);
                if !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some((e, v));
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = target;
        while let Some((e, from)) = parent[v.0] {
            let dir = if self.edges[e.0].tail == from { Direction::Forward } else { Direction::Backward };
            path.push((e, dir));
            v = from;
        }
        path.reverse();
        Ok(path)
    }

    /// The unique path from the root to `p`. Zero-length pieces are omitted.
    pub fn path_from_root(&self, p: &GraphPoint) -> Result<Vec<PathSegment>> {
        self.check_point(p)?;
        let root = self.root.ok_or(Error::NoRootDesignated)?;
        let edge = &self.edges[p.edge.0];
        // Enter p's edge through whichever endpoint faces the root.
        let (entry, last) = if root == edge.tail || self.node_side(p.edge, root) == Side::Gamma {
            (edge.tail, PathSegment { edge: p.edge, direction: Direction::Forward, from: 0.0, to: p.x })
        } else {
            (
                edge.head,
                PathSegment { edge: p.edge, direction: Direction::Backward, from: edge.length, to: p.x },
            )
        };
        let mut segments: Vec<PathSegment> = self
            .node_path_from_root(entry)?
            .into_iter()
            .map(|(e, direction)| {
                let len = self.edges[e.0].length;
                match direction {
                    Direction::Forward => PathSegment { edge: e, direction, from: 0.0, to: len },
                    Direction::Backward => PathSegment { edge: e, direction, from: len, to: 0.0 },
                }
            })
            .collect();
        if last.length() > 0.0 {
            segments.push(last);
        }
        Ok(segments)
    }
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Gamma => 0,
        Side::Lambda => 1,
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Gamma => f.write_str("gamma"),
            Side::Lambda => f.write_str("lambda"),
        }
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn y_tree_classification() {
        let t = y_tree();
        assert_eq!(t.edge_count(), 3);
        let names = |v: &[NodeId]| v.iter().map(|&n| t.node_name(n).to_string()).collect::<Vec<_>>();
        assert_eq!(names(t.boundary_nodes()), ["phi", "b1", "b2"]);
        assert_eq!(names(t.internal_nodes()), ["n"]);
        let degree_sum: usize = t.node_ids().map(|n| t.degree(n)).sum();
        assert_eq!(degree_sum, 2 * t.edge_count());
    }

    #[test]
    fn single_edge_has_two_boundary_nodes() {
        let t = interval(1.0);
        assert_eq!(t.edge_count(), 1);
        assert_eq!(t.boundary_nodes().len(), 2);
        assert!(t.internal_nodes().is_empty());
    }

    #[test]
    fn build_errors() {
        let tri = spec(&["a", "b", "c"], &[("x", "a", "b", 1.0), ("y", "b", "c", 1.0), ("z", "c", "a", 1.0)], None);
        assert_eq!(TreeGraph::build(&tri).unwrap_err(), Error::CycleDetected("z".into()));

        let loop_edge = spec(&["a", "b"], &[("x", "a", "b", 1.0), ("y", "b", "b", 1.0)], None);
        assert!(matches!(TreeGraph::build(&loop_edge), Err(Error::CycleDetected(_))));

        let split = spec(&["a", "b", "c", "d"], &[("x", "a", "b", 1.0), ("y", "c", "d", 1.0)], None);
        assert!(matches!(TreeGraph::build(&split), Err(Error::Disconnected(_))));

        let isolated = spec(&["a", "b", "c"], &[("x", "a", "b", 1.0)], None);
        assert_eq!(TreeGraph::build(&isolated).unwrap_err(), Error::Disconnected("c".into()));

        let zero = spec(&["a", "b"], &[("x", "a", "b", 0.0)], None);
        assert!(matches!(TreeGraph::build(&zero), Err(Error::NonPositiveLength { .. })));

        let nan = spec(&["a", "b"], &[("x", "a", "b", f64::NAN)], None);
        assert!(matches!(TreeGraph::build(&nan), Err(Error::NonPositiveLength { .. })));

        let dangling = spec(&["a", "b"], &[("x", "a", "q", 1.0)], None);
        assert!(matches!(TreeGraph::build(&dangling), Err(Error::DanglingEndpoint { .. })));

        let dup = spec(&["a", "a"], &[("x", "a", "a", 1.0)], None);
        assert!(matches!(TreeGraph::build(&dup), Err(Error::DuplicateId(_))));

        let bad_root = spec(&["a", "b"], &[("x", "a", "b", 1.0)], Some("zz"));
        assert!(matches!(TreeGraph::build(&bad_root), Err(Error::UnknownNode(_))));

        assert_eq!(TreeGraph::build(&TreeSpec::default()).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn split_on_root_edge() {
        let t = y_tree();
        let e0 = t.edge_id("e0").unwrap();
        let (g, l) = t.split(&GraphPoint::new(e0, 0.5)).unwrap();
        assert_eq!(g.side, Side::Gamma);
        assert_eq!(g.nodes, vec![t.node_id("phi").unwrap()]);
        assert_eq!(g.segments, vec![(e0, 0.0, 0.5)]);
        let lambda_nodes: Vec<_> = l.nodes.iter().map(|&n| t.node_name(n)).collect();
        assert_eq!(lambda_nodes, ["n", "b1", "b2"]);
        assert_eq!(l.segments.len(), 3);
        assert_eq!(l.segments[0], (e0, 0.5, 1.0));
        assert!((g.total_length() + l.total_length() - t.total_length()).abs() < 1e-15);
    }

    #[test]
    fn split_single_edge() {
        let t = interval(1.0);
        let (g, l) = t.split(&GraphPoint::new(EdgeId(0), 0.3)).unwrap();
        assert!((g.total_length() - 0.3).abs() < 1e-15);
        assert!((l.total_length() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn split_on_branch_edge() {
        let t = y_tree();
        let e1 = t.edge_id("e1").unwrap();
        let (g, l) = t.split(&GraphPoint::new(e1, 0.5)).unwrap();
        let g_edges: Vec<_> = g.segments.iter().map(|s| t.edge_name(s.0)).collect();
        assert_eq!(g_edges, ["e0", "e1", "e2"]);
        assert_eq!(g.segments[1], (e1, 0.0, 0.5));
        assert!(g.nodes.contains(&t.node_id("phi").unwrap()));
        assert_eq!(l.nodes, vec![t.node_id("b1").unwrap()]);
    }

    #[test]
    fn split_at_node_rejected() {
        let t = y_tree();
        assert_eq!(t.split(&GraphPoint::new(EdgeId(0), 0.0)).unwrap_err(), Error::PointAtNode);
        assert_eq!(t.split(&GraphPoint::new(EdgeId(0), 1.0)).unwrap_err(), Error::PointAtNode);
    }

    #[test]
    fn locate_side_examples() {
        let t = y_tree();
        let (e0, e1, e2) = (EdgeId(0), EdgeId(1), EdgeId(2));
        let side = |c: (EdgeId, f64), y: (EdgeId, f64)| {
            t.locate_side(&GraphPoint::new(c.0, c.1), &GraphPoint::new(y.0, y.1))
        };
        assert_eq!(side((e0, 0.5), (e1, 0.2)).unwrap(), Side::Lambda);
        assert_eq!(side((e0, 0.5), (e0, 0.25)).unwrap(), Side::Gamma);
        assert_eq!(side((e1, 0.5), (e2, 0.9)).unwrap(), Side::Gamma);
        // node n given through different incident edges
        assert_eq!(side((e0, 0.5), (e1, 0.0)).unwrap(), Side::Lambda);
        assert_eq!(side((e0, 0.5), (e0, 1.0)).unwrap(), Side::Lambda);
        assert_eq!(side((e1, 0.5), (e0, 1.0)).unwrap(), Side::Gamma);
        assert_eq!(side((e0, 0.5), (e0, 0.5)).unwrap_err(), Error::CoincidentPoints);
        assert_eq!(side((e0, 0.0), (e1, 0.5)).unwrap_err(), Error::PointAtNode);
    }

    #[test]
    fn path_from_root_examples() {
        let t = y_tree();
        let path = t.path_from_root(&GraphPoint::new(EdgeId(1), 0.4)).unwrap();
        assert_eq!(
            path,
            vec![
                PathSegment { edge: EdgeId(0), direction: Direction::Forward, from: 0.0, to: 1.0 },
                PathSegment { edge: EdgeId(1), direction: Direction::Forward, from: 0.0, to: 0.4 },
            ]
        );
        let on_root_edge = t.path_from_root(&GraphPoint::new(EdgeId(0), 0.3)).unwrap();
        assert_eq!(on_root_edge.len(), 1);
        assert!(t.path_from_root(&GraphPoint::new(EdgeId(0), 0.0)).unwrap().is_empty());

        let unrooted = TreeGraph::build(&spec(&["a", "b"], &[("x", "a", "b", 1.0)], None)).unwrap();
        assert_eq!(
            unrooted.path_from_root(&GraphPoint::new(EdgeId(0), 0.5)).unwrap_err(),
            Error::NoRootDesignated
        );
    }

    #[test]
    fn path_against_orientation() {
        // root at the head end of the first edge
        let t = TreeGraph::build(&spec(
            &["a", "r", "c"],
            &[("x", "a", "r", 2.0), ("y", "a", "c", 1.0)],
            Some("r"),
        ))
        .unwrap();
        let path = t.path_from_root(&GraphPoint::new(EdgeId(1), 0.5)).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path[0].direction, Direction::Backward);
        assert_eq!((path[0].from, path[0].to), (2.0, 0.0));
        assert_eq!(path[1].direction, Direction::Forward);
    }
}
