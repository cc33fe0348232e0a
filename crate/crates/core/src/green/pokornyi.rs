//! Cross-check kernel built from per-edge interval Green's functions:
//!
//! ```text
//! G_P(x, y) = H(x, y) - Σ_i ℓ_i[H(·, y)] η_i(x)
//! ```
//!
//! where `H` is block-diagonal in the edges and `η_i = Σ_j (Δ^{-1})_{ji} φ_j`.
//! `G_P` is the kernel against `dy`, so `G_P(x, y) = ρ(y) G(x, y)`.

use nalgebra::DVector;

use super::{combine_state, GreensFunction};
use crate::conditions::{EndpointTrace, Trace};
use crate::edgeode::EdgeState;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, GraphPoint};

/// Interval degeneracy threshold, relative to the size of the basis values.
const INTERVAL_DEGENERACY: f64 = 1e-10;

/// Condition imposed at `x = l` by the interval kernel; `x = 0` is always
/// Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarEnd {
    Dirichlet,
    Neumann,
}

/// `H(x, y) = -u1(min) u2(max) / (p W[u1, u2])` on one edge, with
/// `u1 = φ_{2i+1}` and `u2 = c0 φ_{2i} + c1 φ_{2i+1}` vanishing (or with
/// vanishing flux) at `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalKernel {
    pub edge: EdgeId,
    pub far_end: FarEnd,
    c: [f64; 2],
    pw: f64,
}

impl IntervalKernel {
    fn u1(&self, gf: &GreensFunction, x: f64) -> Result<EdgeState> {
        gf.basis().pair(self.edge)[1].eval(x)
    }

    fn u2(&self, gf: &GreensFunction, x: f64) -> Result<EdgeState> {
        let [a, b] = gf.basis().pair(self.edge);
        let (sa, sb) = (a.eval(x)?, b.eval(x)?);
        let [c0, c1] = self.c;
        Ok(EdgeState {
            value: c0 * sa.value + c1 * sb.value,
            derivative: c0 * sa.derivative + c1 * sb.derivative,
            flux: c0 * sa.flux + c1 * sb.flux,
        })
    }

    pub fn eval(&self, gf: &GreensFunction, x: f64, y: f64) -> Result<f64> {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        Ok(-self.u1(gf, lo)?.value * self.u2(gf, hi)?.value / self.pw)
    }

    /// Endpoint data of `H(·, y)`.
    fn trace_at(&self, gf: &GreensFunction, y: f64) -> Result<[EndpointTrace; 2]> {
        let e = self.edge;
        let len = gf.tree().edge(e).length;
        let c = gf.coefficients();
        let (u1_0, u2_y) = (self.u1(gf, 0.0)?, self.u2(gf, y)?);
        let (u1_y, u2_l) = (self.u1(gf, y)?, self.u2(gf, len)?);
        let tail = EndpointTrace::from_state(
            End::Tail,
            -u1_0.value * u2_y.value / self.pw,
            -u1_0.flux * u2_y.value / self.pw,
            c.p_at(e, End::Tail)?,
        );
        let head = EndpointTrace::from_state(
            End::Head,
            -u1_y.value * u2_l.value / self.pw,
            -u1_y.value * u2_l.flux / self.pw,
            c.p_at(e, End::Head)?,
        );
        Ok([tail, head])
    }
}

impl GreensFunction {
    /// Interval kernel of edge `e`: Dirichlet at both ends, or Dirichlet
    /// and Neumann when the former is degenerate.
    pub fn interval_kernel(&self, e: EdgeId) -> Result<IntervalKernel> {
        let len = self.tree().edge(e).length;
        let p0 = self.coefficients().p(e, 0.0)?;
        let [even, odd] = self.basis().pair(e);
        let (se, so) = (even.state(len)?, odd.state(len)?);
        for (far_end, c) in [(FarEnd::Dirichlet, [so[0], -se[0]]), (FarEnd::Neumann, [so[1], -se[1]])] {
            if c[0].abs() > INTERVAL_DEGENERACY * (c[0].abs() + len * c[1].abs()) {
                // p W[u1, u2] evaluated at x = 0, where u1 = 0 and p u1' = p0
                return Ok(IntervalKernel { edge: e, far_end, c, pw: -p0 * c[0] });
            }
        }
        Err(Error::IntervalDegenerate(self.tree().edge_name(e).into()))
    }

    /// `G_P(x, y)`, the kernel of `L` against `dy`.
    pub fn pokornyi_green(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        self.tree().check_point(x)?;
        self.tree().check_point(y)?;
        let kernel = self.interval_kernel(y.edge)?;
        let mut tr = Trace::zeros(self.tree());
        let [tail, head] = kernel.trace_at(self, y.x)?;
        tr.set(y.edge, End::Tail, tail);
        tr.set(y.edge, End::Head, head);
        let ell = DVector::from_vec(self.functionals().apply_all(&tr, self.coefficients())?);
        let a = self.delta().inverse()? * ell;
        let h = if x.edge == y.edge { kernel.eval(self, x.x, y.x)? } else { 0.0 };
        Ok(h - combine_state(self.basis(), &a, x.edge, x.x)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Coefficients, EdgeCoefficients};
    use crate::conditions::BoundarySpec;
    use crate::graph::fixtures::*;
    use crate::graph::TreeGraph;
    use crate::green::GreenOptions;

    fn build(tree: TreeGraph, p: f64, q: f64, rho: &[f64]) -> GreensFunction {
        let edges = rho.iter().map(|&r| EdgeCoefficients::new(p, q, r)).collect();
        let c = Coefficients::new(&tree, edges).unwrap();
        GreensFunction::new(tree, c, BoundarySpec::dirichlet(), GreenOptions::default()).unwrap()
    }

    #[test]
    fn interval_matches_tree_formula() {
        let gf = build(interval(1.0), 1.0, 0.0, &[1.0]);
        let g = gf.pokornyi_green(&GraphPoint::new(EdgeId(0), 0.5), &GraphPoint::new(EdgeId(0), 0.25)).unwrap();
        assert!((g - 0.125).abs() < 1e-12);
        assert_eq!(gf.interval_kernel(EdgeId(0)).unwrap().far_end, FarEnd::Dirichlet);
    }

    #[test]
    fn y_tree_weighted_relation() {
        let gf = build(y_tree(), 1.0, 0.0, &[1.0, 2.0, 3.0]);
        for (ex, x, ey, y) in [(0, 0.5, 1, 0.5), (1, 0.2, 1, 0.7), (2, 0.9, 0, 0.1), (0, 0.3, 0, 0.6)] {
            let (x, y) = (GraphPoint::new(EdgeId(ex), x), GraphPoint::new(EdgeId(ey), y));
            let gp = gf.pokornyi_green(&x, &y).unwrap();
            let g = gf.green_eval(&x, &y).unwrap();
            assert!((gp - gf.coefficients().rho(y.edge) * g).abs() < 1e-9, "{gp} vs {g}");
        }
    }

    #[test]
    fn neumann_fallback_on_dirichlet_eigenvalue() {
        // -f'' - π² f has the Dirichlet eigenfunction sin(πx) on [0, 1]
        let pi2 = std::f64::consts::PI.powi(2);
        let tree = y_tree();
        let c = Coefficients::new(
            &tree,
            vec![
                EdgeCoefficients::new(1.0, -pi2, 1.0),
                EdgeCoefficients::new(1.0, 0.0, 1.0),
                EdgeCoefficients::new(1.0, 0.0, 1.0),
            ],
        )
        .unwrap();
        let gf = GreensFunction::new(tree, c, BoundarySpec::dirichlet(), GreenOptions::default()).unwrap();
        assert_eq!(gf.interval_kernel(EdgeId(0)).unwrap().far_end, FarEnd::Neumann);
        let (x, y) = (GraphPoint::new(EdgeId(0), 0.3), GraphPoint::new(EdgeId(0), 0.6));
        let gp = gf.pokornyi_green(&x, &y).unwrap();
        assert!((gp - gf.green_eval(&x, &y).unwrap()).abs() < 1e-7);
    }
}
