//! Green's function of a non-degenerate problem on a tree.
//!
//! For a point `x` on edge `e`, the kernel is assembled from two global
//! kernel solutions: `ψ^Γ`, which vanishes at every boundary node on the
//! tail side of `e`, and `ψ^Λ`, which vanishes at every boundary node on the
//! head side. `ψ^Λ` is rescaled so that `p W[ψ^Γ, ψ^Λ] = -1` on `e`, and
//!
//! ```text
//! G(x, y) = ψ^Γ(y) ψ^Λ(x) / ρ_e    for y on the tail side of x
//! G(x, y) = ψ^Λ(y) ψ^Γ(x) / ρ_e    otherwise
//! ```
//!
//! so that `f(x) = ∫ G(x, y) h(y) ρ(y) dy` solves `L f = h` with homogeneous
//! node conditions.

mod pokornyi;
mod solution;

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::coeffs::{self, Coefficients};
use crate::conditions::{delta_matrix, standard_functionals, BoundarySpec, DeltaMatrix, NodeConditions};
use crate::edgeode::{EdgeState, FundamentalBasis, IntegratorOptions};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, NodeId, Side, TreeGraph};
use crate::quadrature::QuadOptions;

pub use pokornyi::{FarEnd, IntervalKernel};
pub use solution::GreenSolution;

/// Relative spread of `p W` along an edge above which the integration is
/// considered inaccurate.
const WRONSKIAN_SPREAD_TOL: f64 = 1e-6;

/// Largest relative jump of `p` across an internal node that is accepted.
const P_JUMP_TOL: f64 = 1e-10;

fn node_p_jump(tree: &TreeGraph, c: &Coefficients, n: NodeId) -> f64 {
    let values: Vec<f64> =
        tree.incident(n).iter().filter_map(|&e| c.p_at(e, tree.end_of(e, n)?).ok()).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreenOptions {
    pub ode: IntegratorOptions,
    pub quad: QuadOptions,
}

/// Kernel element `Σ a_i φ_i` with `ψ(n) = 1` at its boundary node and
/// every other functional zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalKernelSolution {
    node: NodeId,
    coefficients: DVector<f64>,
}

impl GlobalKernelSolution {
    pub fn node(&self) -> NodeId {
        self.node
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn eval(&self, basis: &FundamentalBasis, p: &GraphPoint) -> Result<EdgeState> {
        combine_state(basis, &self.coefficients, p.edge, p.x)
    }
}

/// `(f, f', p f')` of `Σ a_i φ_i` restricted to edge `e`.
pub(crate) fn combine_state(basis: &FundamentalBasis, a: &DVector<f64>, e: EdgeId, x: f64) -> Result<EdgeState> {
    let [u, v] = basis.pair(e);
    let (wu, wv) = (a[2 * e.0], a[2 * e.0 + 1]);
    if wu == 0.0 && wv == 0.0 {
        return Ok(EdgeState { value: 0.0, derivative: 0.0, flux: 0.0 });
    }
    let (su, sv) = (u.eval(x)?, v.eval(x)?);
    Ok(EdgeState {
        value: wu * su.value + wv * sv.value,
        derivative: wu * su.derivative + wv * sv.derivative,
        flux: wu * su.flux + wv * sv.flux,
    })
}

fn scale_state(s: EdgeState, k: f64) -> EdgeState {
    EdgeState { value: k * s.value, derivative: k * s.derivative, flux: k * s.flux }
}

/// The normalized pair used on one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiPair {
    pub edge: EdgeId,
    /// Boundary node (head side) whose kernel solution is `ψ^Γ`.
    pub gamma_node: NodeId,
    /// Boundary node (tail side) whose kernel solution, times `scale`, is `ψ^Λ`.
    pub lambda_node: NodeId,
    pub scale: f64,
    /// `p W` before rescaling, at a quarter, half and three quarters of the edge.
    pub raw_wronskian: [f64; 3],
}

impl PsiPair {
    /// `p W[ψ^Γ, ψ^Λ]` after rescaling, averaged over the sample points.
    pub fn wronskian(&self) -> f64 {
        self.scale * self.raw_wronskian.iter().sum::<f64>() / 3.0
    }
}

#[derive(Debug, Clone)]
pub struct GreensFunction {
    tree: TreeGraph,
    coeffs: Coefficients,
    bcs: BoundarySpec,
    functionals: NodeConditions,
    basis: FundamentalBasis,
    delta: DeltaMatrix,
    psi: BTreeMap<NodeId, GlobalKernelSolution>,
    pairs: Vec<PsiPair>,
    solve_count: usize,
    opts: GreenOptions,
}

impl GreensFunction {
    /// Builds the basis, factors `Δ` and constructs the normalized pair of
    /// every edge. Each boundary node costs one linear solve.
    pub fn new(tree: TreeGraph, coeffs: Coefficients, bcs: BoundarySpec, opts: GreenOptions) -> Result<Self> {
        let report = coeffs::validate(&coeffs, &tree, 33)?;
        if report.max_p_jump > P_JUMP_TOL * report.max_p {
            let node = tree
                .internal_nodes()
                .iter()
                .copied()
                .max_by(|&a, &b| node_p_jump(&tree, &coeffs, a).total_cmp(&node_p_jump(&tree, &coeffs, b)))
                .map(|n| tree.node_name(n).to_string())
                .unwrap_or_default();
            return Err(Error::DiscontinuousP { node, jump: report.max_p_jump });
        }
        let functionals = standard_functionals(&tree, &bcs)?;
        let basis = FundamentalBasis::build(&tree, &coeffs, &opts.ode)?;
        let delta = delta_matrix(&tree, &basis, &functionals, &coeffs)?;
        if !delta.is_nondegenerate() {
            return Err(Error::DegenerateProblem { rcond: delta.rcond() });
        }
        let mut gf = Self {
            tree,
            coeffs,
            bcs,
            functionals,
            basis,
            delta,
            psi: BTreeMap::new(),
            pairs: Vec::new(),
            solve_count: 0,
            opts,
        };
        let pairs = gf.tree.edge_ids().map(|e| gf.build_pair(e)).collect::<Result<Vec<_>>>()?;
        gf.pairs = pairs;
        Ok(gf)
    }

    fn ensure_psi(&mut self, n: NodeId) -> Result<()> {
        if self.psi.contains_key(&n) {
            return Ok(());
        }
        let row = self.functionals.boundary_row(n).ok_or_else(|| Error::NotBoundaryNode(self.tree.node_name(n).into()))?;
        let mut eps = DVector::zeros(self.delta.dim());
        eps[row] = 1.0;
        let coefficients = self.delta.solve(&eps)?;
        self.solve_count += 1;
        self.psi.insert(n, GlobalKernelSolution { node: n, coefficients });
        Ok(())
    }

    fn build_pair(&mut self, e: EdgeId) -> Result<PsiPair> {
        let gamma_node = self.tree.boundary_nodes_on(e, Side::Lambda)[0];
        let lambda_node = self.tree.boundary_nodes_on(e, Side::Gamma)[0];
        self.ensure_psi(gamma_node)?;
        self.ensure_psi(lambda_node)?;
        let len = self.tree.edge(e).length;
        let mut raw = [0.0; 3];
        let mut scale: f64 = 0.0;
        for (k, w) in raw.iter_mut().enumerate() {
            let x = len * (k + 1) as f64 / 4.0;
            let a = self.psi[&gamma_node].eval(&self.basis, &GraphPoint::new(e, x))?;
            let b = self.psi[&lambda_node].eval(&self.basis, &GraphPoint::new(e, x))?;
            *w = a.value * b.flux - a.flux * b.value;
            scale = scale.max((a.value * b.flux).abs() + (a.flux * b.value).abs());
        }
        let mean = raw.iter().sum::<f64>() / 3.0;
        if mean.is_nan() || mean.abs() <= 1e-12 * scale {
            return Err(Error::DegenerateProblem { rcond: self.delta.rcond() });
        }
        let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > WRONSKIAN_SPREAD_TOL * mean.abs() {
            return Err(Error::NonConstantWronskian { edge: self.tree.edge_name(e).into(), spread: hi - lo });
        }
        Ok(PsiPair { edge: e, gamma_node, lambda_node, scale: -1.0 / mean, raw_wronskian: raw })
    }

    pub fn tree(&self) -> &TreeGraph {
        &self.tree
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn boundary_spec(&self) -> &BoundarySpec {
        &self.bcs
    }

    pub fn functionals(&self) -> &NodeConditions {
        &self.functionals
    }

    pub fn basis(&self) -> &FundamentalBasis {
        &self.basis
    }

    pub fn delta(&self) -> &DeltaMatrix {
        &self.delta
    }

    pub fn options(&self) -> &GreenOptions {
        &self.opts
    }

    /// Number of linear solves with `Δ` performed while building the pairs.
    pub fn solve_count(&self) -> usize {
        self.solve_count
    }

    pub fn psi_for_boundary_node(&self, n: NodeId) -> Result<&GlobalKernelSolution> {
        if n.0 >= self.tree.node_count() || !self.tree.is_boundary(n) {
            return Err(Error::NotBoundaryNode(format!("#{}", n.0)));
        }
        self.psi.get(&n).ok_or_else(|| Error::NotBoundaryNode(self.tree.node_name(n).into()))
    }

    pub fn psi_pair(&self, e: EdgeId) -> &PsiPair {
        &self.pairs[e.0]
    }

    pub fn pairs(&self) -> &[PsiPair] {
        &self.pairs
    }

    /// `ψ^Γ(e)` evaluated anywhere on the tree.
    pub fn psi_gamma(&self, e: EdgeId, p: &GraphPoint) -> Result<EdgeState> {
        self.psi[&self.pairs[e.0].gamma_node].eval(&self.basis, p)
    }

    /// `ψ^Λ(e)` (rescaled) evaluated anywhere on the tree.
    pub fn psi_lambda(&self, e: EdgeId, p: &GraphPoint) -> Result<EdgeState> {
        let pair = &self.pairs[e.0];
        Ok(scale_state(self.psi[&pair.lambda_node].eval(&self.basis, p)?, pair.scale))
    }

    /// `p W[ψ^Γ, ψ^Λ]` at `x` on edge `e`; `-1` up to integration error.
    pub fn wronskian(&self, e: EdgeId, x: f64) -> Result<f64> {
        let p = self.tree.point(e, x)?;
        let (a, b) = (self.psi_gamma(e, &p)?, self.psi_lambda(e, &p)?);
        Ok(a.value * b.flux - a.flux * b.value)
    }

    /// `G(x, y)` for `x` interior to its edge.
    pub fn green_eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        self.tree.check_point(x)?;
        if !self.tree.is_interior(x) {
            return Err(Error::PointAtNode);
        }
        Ok(self.green_state(x, y)?.value)
    }

    /// `G(x, y)` where `x` may sit at an end of its edge; the value is the
    /// limit along `x.edge`.
    pub fn green_eval_limit(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        Ok(self.green_state(x, y)?.value)
    }

    /// `G(·, y)` with its `x`-derivative and flux at `x`, taken along
    /// `x.edge`. At `x = y` the derivative is the limit from the head side.
    pub fn green_state(&self, x: &GraphPoint, y: &GraphPoint) -> Result<EdgeState> {
        self.tree.check_point(x)?;
        self.tree.check_point(y)?;
        let e = x.edge;
        let rho = self.coeffs.rho(e);
        let (coef, at_x) = match self.tree.side_of(x, y).unwrap_or(Side::Gamma) {
            Side::Gamma => (self.psi_gamma(e, y)?.value, self.psi_lambda(e, x)?),
            Side::Lambda => (self.psi_lambda(e, y)?.value, self.psi_gamma(e, x)?),
        };
        Ok(scale_state(at_x, coef / rho))
    }

    /// `f = ∫ G(·, y) h(y) dρ(y)`, the solution with homogeneous node
    /// conditions.
    pub fn green_apply(&self, h: &[coeffs::EdgeFunction]) -> Result<GreenSolution<'_>> {
        GreenSolution::new(self, h, None)
    }

    /// Solution of `L f = h` with `ℓ_i[f] = c_i`.
    pub fn solve_general(&self, h: &[coeffs::EdgeFunction], c: &[f64]) -> Result<GreenSolution<'_>> {
        let a = self.delta.solve(&DVector::from_column_slice(c))?;
        GreenSolution::new(self, h, Some(a))
    }
}
