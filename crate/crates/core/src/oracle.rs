//! Finite-difference discretization of `-(p f')' + q f` on a tree, used to
//! validate the Green's function path independently.
//!
//! Each edge carries `n` uniform intervals. Interior points use the
//! conservative three-point stencil with midpoint `p`; every node carries one
//! shared unknown whose row encodes its condition, with outward derivatives
//! approximated by the second-order one-sided stencil
//! `(-3 u_0 + 4 u_1 - u_2) / (2 dx)`.
//!
//! The system is solved by eliminating each edge's interior (a tridiagonal
//! block) and solving the dense node system that remains.

use nalgebra::{DMatrix, DVector};

use crate::coeffs::{Coefficients, EdgeFunction};
use crate::conditions::{BoundaryCondition, BoundarySpec};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, GraphPoint, NodeId, TreeGraph};

/// Reciprocal condition number of the node system at or below which the
/// discretization is reported singular.
const SINGULAR_RCOND: f64 = 1e-12;

/// Tridiagonal LU with partial pivoting (row interchanges between
/// neighbours, as in LAPACK `gttrf`).
#[derive(Debug, Clone)]
struct Tridiagonal {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    ipiv: Vec<usize>,
}

impl Tridiagonal {
    fn factor(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>) -> Result<Self> {
        let n = d.len();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut ipiv: Vec<usize> = (0..n).collect();
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                ipiv[i] = i + 1;
            }
        }
        if d.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        Ok(Self { dl, d, du, du2, ipiv })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            let ip = self.ipiv[i];
            let temp = b[2 * i + 1 - ip] - self.dl[i] * b[ip];
            b[i] = b[ip];
            b[i + 1] = temp;
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[derive(Debug, Clone)]
struct EdgeBlock {
    tail: usize,
    head: usize,
    dx: f64,
    /// Global index of interior point `j = 1`.
    offset: usize,
    tri: Tridiagonal,
    /// `T^{-1}` applied to the couplings to the tail and head unknowns.
    col_tail: Vec<f64>,
    col_head: Vec<f64>,
}

/// Assembled finite-difference system.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    n: usize,
    node_count: usize,
    lengths: Vec<f64>,
    blocks: Vec<EdgeBlock>,
    rows: Vec<Vec<(usize, f64)>>,
    weights: Vec<f64>,
    schur: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    rcond: f64,
}

/// Builds the system with `n` intervals per edge.
pub fn discretize(tree: &TreeGraph, c: &Coefficients, bc: &BoundarySpec, n: usize) -> Result<DiscreteSystem> {
    if n < 8 {
        return Err(Error::MeshTooCoarse(n));
    }
    let k = tree.node_count();
    let m = tree.edge_count();
    let unknowns = k + m * (n - 1);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); unknowns];
    let mut weights = vec![0.0; unknowns];
    let mut blocks = Vec::with_capacity(m);
    let mut singular = false;

    for e in tree.edge_ids() {
        let edge = tree.edge(e);
        let dx = edge.length / n as f64;
        let dx2 = dx * dx;
        let rho = c.rho(e);
        let offset = k + e.0 * (n - 1);
        let (tail, head) = (edge.tail.0, edge.head.0);
        let pm: Vec<f64> = (0..n).map(|j| c.p(e, (j as f64 + 0.5) * dx)).collect::<Result<_>>()?;
        let mut d = Vec::with_capacity(n - 1);
        for j in 1..n {
            let q = c.q(e, j as f64 * dx)?;
            let diag = (pm[j - 1] + pm[j]) / dx2 + q;
            d.push(diag);
            let row = offset + j - 1;
            let left = if j == 1 { tail } else { row - 1 };
            let right = if j == n - 1 { head } else { row + 1 };
            rows[row] = vec![(left, -pm[j - 1] / dx2), (row, diag), (right, -pm[j] / dx2)];
            weights[row] = rho * dx;
        }
        weights[tail] += 0.5 * rho * dx;
        weights[head] += 0.5 * rho * dx;
        let dl: Vec<f64> = (2..n).map(|j| -pm[j - 1] / dx2).collect();
        let du = dl.clone();
        let tri = match Tridiagonal::factor(dl, d, du) {
            Ok(t) => t,
            Err(_) => {
                singular = true;
                Tridiagonal { dl: vec![], d: vec![1.0; n - 1], du: vec![], du2: vec![], ipiv: vec![] }
            }
        };
        let mut col_tail = vec![0.0; n - 1];
        col_tail[0] = -pm[0] / dx2;
        let mut col_head = vec![0.0; n - 1];
        col_head[n - 2] = -pm[n - 1] / dx2;
        if !singular {
            tri.solve(&mut col_tail);
            tri.solve(&mut col_head);
        }
        blocks.push(EdgeBlock { tail, head, dx, offset, tri, col_tail, col_head });
    }

    // node rows: `a u_node + Σ w u_interior`
    let mut schur = DMatrix::<f64>::zeros(k, k);
    for node in tree.node_ids() {
        let i = node.0;
        let incident = tree.incident(node);
        // (weight on u_node, weight on the outward derivative of each incident edge)
        let (a_node, flux_weight): (f64, Vec<f64>) = if incident.len() > 1 {
            (0.0, incident.iter().map(|&e| Ok(c.rho(e) * c.p_at(e, end(tree, e, node))?)).collect::<Result<_>>()?)
        } else {
            let bc = bc.condition(node).ok_or_else(|| Error::MissingBoundarySpec(tree.node_name(node).into()))?;
            match bc {
                BoundaryCondition::Dirichlet => (1.0, vec![0.0]),
                BoundaryCondition::Neumann => (0.0, vec![1.0]),
                BoundaryCondition::Robin { alpha, beta } => (alpha, vec![beta]),
            }
        };
        let mut row = vec![(i, a_node)];
        for (&e, &w) in incident.iter().zip(&flux_weight) {
            if w == 0.0 {
                continue;
            }
            let b = &blocks[e.0];
            let s = w / (2.0 * b.dx);
            row[0].1 += -3.0 * s;
            let (j1, j2) = near_points(n, end(tree, e, node));
            row.push((b.offset + j1, 4.0 * s));
            row.push((b.offset + j2, -s));
        }
        for &(col, w) in &row {
            if col < k {
                schur[(i, col)] += w;
            } else {
                let (b, j) = locate(&blocks, k, n, col);
                schur[(i, b.tail)] -= w * b.col_tail[j];
                schur[(i, b.head)] -= w * b.col_head[j];
            }
        }
        rows[i] = row;
    }

    let (schur, rcond) = if singular {
        (None, 0.0)
    } else {
        let lu = schur.clone().lu();
        let rcond = match lu.try_inverse() {
            Some(inv) if inv.iter().all(|v| v.is_finite()) => 1.0 / (norm1(&schur) * norm1(&inv)),
            _ => 0.0,
        };
        (Some(lu), rcond)
    };
    Ok(DiscreteSystem {
        n,
        node_count: k,
        lengths: tree.edges().iter().map(|e| e.length).collect(),
        blocks,
        rows,
        weights,
        schur,
        rcond,
    })
}

fn end(tree: &TreeGraph, e: EdgeId, n: NodeId) -> End {
    tree.end_of(e, n).expect("incident edge")
}

/// Interior indices (0-based within the block) at distance `dx`, `2 dx`
/// from the given end.
fn near_points(n: usize, end: End) -> (usize, usize) {
    match end {
        End::Tail => (0, 1),
        End::Head => (n - 2, n - 3),
    }
}

fn locate(blocks: &[EdgeBlock], k: usize, n: usize, col: usize) -> (&EdgeBlock, usize) {
    let idx = col - k;
    (&blocks[idx / (n - 1)], idx % (n - 1))
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

impl DiscreteSystem {
    /// Intervals per edge.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unknowns(&self) -> usize {
        self.rows.len()
    }

    /// Row `i` of `A` as `(column, value)` pairs.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// `ρ`-weighted trapezoid weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn is_singular(&self) -> bool {
        self.schur.is_none() || self.rcond <= SINGULAR_RCOND
    }

    /// Global index of mesh point `j` (0 ..= n) on edge `e`; the ends map
    /// to the node unknowns.
    pub fn index(&self, e: EdgeId, j: usize) -> usize {
        let b = &self.blocks[e.0];
        if j == 0 {
            b.tail
        } else if j == self.n {
            b.head
        } else {
            b.offset + j - 1
        }
    }

    pub fn position(&self, e: EdgeId, j: usize) -> f64 {
        self.blocks[e.0].dx * j as f64
    }

    pub fn spacing(&self, e: EdgeId) -> f64 {
        self.blocks[e.0].dx
    }

    /// `A u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, a)| a * u[j]).sum()).collect()
    }

    /// Solves `A u = b`.
    pub fn solve_vector(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.unknowns() {
            return Err(Error::DimensionMismatch { expected: self.unknowns(), got: b.len() });
        }
        let schur = match &self.schur {
            Some(lu) if !self.is_singular() => lu,
            _ => return Err(Error::SingularSystem),
        };
        let k = self.node_count;
        let mut u = b.to_vec();
        for blk in &self.blocks {
            blk.tri.solve(&mut u[blk.offset..blk.offset + self.n - 1]);
        }
        // node rows with the particular interior parts substituted
        let mut rhs = DVector::from_column_slice(&b[..k]);
        for i in 0..k {
            for &(col, w) in &self.rows[i] {
                if col >= k {
                    rhs[i] -= w * u[col];
                }
            }
        }
        let nodes = schur.solve(&rhs).ok_or(Error::SingularSystem)?;
        u[..k].copy_from_slice(nodes.as_slice());
        for blk in &self.blocks {
            let (ut, uh) = (nodes[blk.tail], nodes[blk.head]);
            for j in 0..self.n - 1 {
                u[blk.offset + j] -= ut * blk.col_tail[j] + uh * blk.col_head[j];
            }
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        Ok(u)
    }

    fn mesh_function(&self, u: &[f64]) -> MeshFunction {
        let values = (0..self.blocks.len())
            .map(|e| (0..=self.n).map(|j| u[self.index(EdgeId(e), j)]).collect())
            .collect();
        MeshFunction { n: self.n, lengths: self.lengths.clone(), values }
    }

    /// Smallest eigenvalue of `A` restricted to non-Dirichlet unknowns, by
    /// inverse iteration. Intended for Dirichlet problems.
    pub fn smallest_eigenvalue(&self, iterations: usize) -> Result<f64> {
        let k = self.node_count;
        let mut u = vec![0.0; self.unknowns()];
        for (i, v) in u.iter_mut().enumerate().skip(k) {
            *v = 1.0 + 0.1 * ((i % 7) as f64);
        }
        let mut lambda = f64::NAN;
        for _ in 0..iterations.max(1) {
            let mut b = u.clone();
            b[..k].iter_mut().for_each(|v| *v = 0.0);
            let next = self.solve_vector(&b)?;
            let num: f64 = b[k..].iter().map(|v| v * v).sum();
            let den: f64 = b[k..].iter().zip(&next[k..]).map(|(a, b)| a * b).sum();
            lambda = num / den;
            let norm = next[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            u = next.iter().map(|v| v / norm).collect();
        }
        Ok(lambda)
    }
}

/// Values at the mesh points of every edge, `n + 1` per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFunction {
    n: usize,
    lengths: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl MeshFunction {
    pub fn edge_values(&self, e: EdgeId) -> &[f64] {
        &self.values[e.0]
    }

    pub fn at(&self, e: EdgeId, j: usize) -> f64 {
        self.values[e.0][j]
    }

    /// Piecewise-linear interpolation.
    pub fn eval(&self, p: &GraphPoint) -> f64 {
        let len = self.lengths[p.edge.0];
        let t = (p.x / len * self.n as f64).clamp(0.0, self.n as f64);
        let j = (t.floor() as usize).min(self.n - 1);
        let s = t - j as f64;
        let v = &self.values[p.edge.0];
        (1.0 - s) * v[j] + s * v[j + 1]
    }
}

/// Discrete solution of `L f = h` with homogeneous node conditions.
pub fn oracle_solve(sys: &DiscreteSystem, tree: &TreeGraph, h: &[EdgeFunction]) -> Result<MeshFunction> {
    if h.len() != sys.blocks.len() {
        return Err(Error::EdgeCountMismatch { expected: sys.blocks.len(), got: h.len() });
    }
    let mut b = vec![0.0; sys.unknowns()];
    for e in tree.edge_ids() {
        for j in 1..sys.n {
            let x = sys.position(e, j);
            b[sys.index(e, j)] = h[e.0]
                .eval(x)
                .map_err(|source| Error::CoefficientEvaluation { edge: tree.edge_name(e).into(), source })?;
        }
    }
    Ok(sys.mesh_function(&sys.solve_vector(&b)?))
}

/// Discrete kernel column `x ↦ G(x, y)` against `dρ`. The unit source is
/// split linearly between the two mesh points around `y` (a single point
/// when `y` is on the mesh or in the first or last cell).
pub fn oracle_green(sys: &DiscreteSystem, y: &GraphPoint) -> Result<MeshFunction> {
    let e = y.edge;
    let len = sys.lengths[e.0];
    if !(y.x > 0.0 && y.x < len) {
        return Err(Error::PointAtNode);
    }
    let n = sys.n;
    let t = y.x / sys.spacing(e);
    let mut j0 = t.floor() as usize;
    let mut s = t - j0 as f64;
    if j0 == 0 {
        (j0, s) = (1, 0.0);
    } else if j0 >= n - 1 {
        (j0, s) = (n - 1, 0.0);
    }
    let mut b = vec![0.0; sys.unknowns()];
    for (j, w) in [(j0, 1.0 - s), (j0 + 1, s)] {
        if w > 0.0 {
            let i = sys.index(e, j);
            b[i] += w / sys.weights[i];
        }
    }
    Ok(sys.mesh_function(&sys.solve_vector(&b)?))
}
