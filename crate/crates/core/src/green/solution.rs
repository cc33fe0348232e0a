use std::collections::HashMap;

use nalgebra::DVector;

use super::{combine_state, GreensFunction};
use crate::coeffs::EdgeFunction;
use crate::conditions::Trace;
use crate::edgeode::EdgeState;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, NodeId, Side};
use crate::quadrature::integrate_with_breaks;

/// Solution produced by the Green operator, optionally plus a kernel
/// element fixing inhomogeneous node data. Evaluated lazily: the
/// contributions of all other edges are integrated once up front, the
/// partial integrals on the evaluation edge per query.
#[derive(Debug, Clone)]
pub struct GreenSolution<'a> {
    gf: &'a GreensFunction,
    h: Vec<EdgeFunction>,
    /// `(C_Γ, C_Λ)` per edge: `ρ`-weighted integrals of `ψ^Γ h` over the
    /// tail side and of `ψ^Λ h` over the head side, excluding the edge itself.
    outer: Vec<[f64; 2]>,
    homogeneous: Option<DVector<f64>>,
}

impl<'a> GreenSolution<'a> {
    pub(super) fn new(gf: &'a GreensFunction, h: &[EdgeFunction], homogeneous: Option<DVector<f64>>) -> Result<Self> {
        let tree = gf.tree();
        if h.len() != tree.edge_count() {
            return Err(Error::EdgeCountMismatch { expected: tree.edge_count(), got: h.len() });
        }
        let mut sol = Self { gf, h: h.to_vec(), outer: Vec::with_capacity(tree.edge_count()), homogeneous };
        let mut memo: HashMap<(NodeId, EdgeId), f64> = HashMap::new();
        let mut whole = |sol: &Self, n: NodeId, a: EdgeId| -> Result<f64> {
            if let Some(&v) = memo.get(&(n, a)) {
                return Ok(v);
            }
            let v = sol.integral(n, a, 0.0, tree.edge(a).length)?;
            memo.insert((n, a), v);
            Ok(v)
        };
        for e in tree.edge_ids() {
            let pair = gf.psi_pair(e);
            let (mut cg, mut cl) = (0.0, 0.0);
            for a in tree.edge_ids().filter(|&a| a != e) {
                let rho = gf.coefficients().rho(a);
                match tree.edge_side(e, a) {
                    Side::Gamma => cg += rho * whole(&sol, pair.gamma_node, a)?,
                    Side::Lambda => cl += rho * whole(&sol, pair.lambda_node, a)?,
                }
            }
            sol.outer.push([cg, pair.scale * cl]);
        }
        Ok(sol)
    }

    /// `∫_lo^hi ψ_n h dy` on edge `a`, with panel breaks at the integration
    /// mesh of the basis pair.
    fn integral(&self, n: NodeId, a: EdgeId, lo: f64, hi: f64) -> Result<f64> {
        if self.h[a.0].is_zero() || hi <= lo {
            return Ok(0.0);
        }
        let basis = self.gf.basis();
        let psi = &self.gf.psi[&n];
        let [u, v] = basis.pair(a);
        let mut breaks: Vec<f64> =
            u.mesh().into_iter().chain(v.mesh()).filter(|&x| x > lo && x < hi).chain([lo, hi]).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let h = &self.h[a.0];
        let name = self.gf.tree().edge_name(a);
        integrate_with_breaks(
            |y| {
                let hy = h.eval(y).map_err(|source| Error::CoefficientEvaluation { edge: name.into(), source })?;
                Ok(psi.eval(basis, &GraphPoint::new(a, y))?.value * hy)
            },
            &breaks,
            &self.gf.options().quad,
        )
    }

    /// Solution states at ascending positions `xs` on edge `e`.
    pub fn sample_edge(&self, e: EdgeId, xs: &[f64]) -> Result<Vec<EdgeState>> {
        let gf = self.gf;
        let len = gf.tree().edge(e).length;
        for &x in xs {
            gf.tree().check_point(&GraphPoint::new(e, x))?;
        }
        if xs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::OutOfDomain { edge: gf.tree().edge_name(e).into(), x: f64::NAN, length: len });
        }
        let pair = gf.psi_pair(e);
        let rho = gf.coefficients().rho(e);
        let [cg, cl] = self.outer[e.0];

        // running ∫_0^x ψ^Γ h and ∫_x^l ψ_{n''} h
        let mut left = Vec::with_capacity(xs.len());
        let mut right = Vec::with_capacity(xs.len());
        let (mut acc_g, mut prev) = (0.0, 0.0);
        for &x in xs {
            acc_g += self.integral(pair.gamma_node, e, prev, x)?;
            left.push(acc_g);
            prev = x;
        }
        let mut acc_l = 0.0;
        let mut next = len;
        for &x in xs.iter().rev() {
            acc_l += self.integral(pair.lambda_node, e, x, next)?;
            right.push(acc_l);
            next = x;
        }
        right.reverse();

        xs.iter()
            .enumerate()
            .map(|(k, &x)| {
                let p = GraphPoint::new(e, x);
                let (g, l) = (gf.psi_gamma(e, &p)?, gf.psi_lambda(e, &p)?);
                let a = cg + rho * left[k];
                let b = cl + rho * pair.scale * right[k];
                let mut s = EdgeState {
                    value: (l.value * a + g.value * b) / rho,
                    derivative: (l.derivative * a + g.derivative * b) / rho,
                    flux: (l.flux * a + g.flux * b) / rho,
                };
                if let Some(coef) = &self.homogeneous {
                    let k = combine_state(gf.basis(), coef, e, x)?;
                    s.value += k.value;
                    s.derivative += k.derivative;
                    s.flux += k.flux;
                }
                Ok(s)
            })
            .collect()
    }

    pub fn state(&self, p: &GraphPoint) -> Result<EdgeState> {
        Ok(self.sample_edge(p.edge, &[p.x])?[0])
    }

    pub fn value(&self, p: &GraphPoint) -> Result<f64> {
        Ok(self.state(p)?.value)
    }

    /// `k` equispaced points per edge, both ends included.
    pub fn sample_grid(&self, k: usize) -> Result<Vec<(EdgeId, f64, EdgeState)>> {
        let k = k.max(2);
        let mut out = Vec::new();
        for e in self.gf.tree().edge_ids() {
            let len = self.gf.tree().edge(e).length;
            let xs: Vec<f64> = (0..k).map(|i| len * i as f64 / (k - 1) as f64).collect();
            for (x, s) in xs.iter().zip(self.sample_edge(e, &xs)?) {
                out.push((e, *x, s));
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Trace> {
        let ends: Vec<[EdgeState; 2]> = self
            .gf
            .tree()
            .edge_ids()
            .map(|e| {
                let s = self.sample_edge(e, &[0.0, self.gf.tree().edge(e).length])?;
                Ok([s[0], s[1]])
            })
            .collect::<Result<_>>()?;
        Trace::from_states(self.gf.tree(), self.gf.coefficients(), |e, x| {
            let s = if x == 0.0 { ends[e.0][0] } else { ends[e.0][1] };
            Ok([s.value, s.flux])
        })
    }

    /// `ℓ_i[f]` for every functional.
    pub fn functional_values(&self) -> Result<Vec<f64>> {
        self.gf.functionals().apply_all(&self.trace()?, self.gf.coefficients())
    }
}
