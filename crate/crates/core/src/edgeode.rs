//! Edge-local initial-value problems for `-(p f')' + q f = h`.
//!
//! The equation is integrated as the first-order system
//!
//! ```text
//! f' = g / p,    g' = q f - h,    g := p f'
//! ```
//!
//! from `x = 0` to `x = length` with the Dormand–Prince 5(4) pair, PI step
//! control and the pair's fourth-order continuous extension for dense output.

use crate::coeffs::{Coefficients, EdgeFunction};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TreeGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest accepted step; defaults to an eighth of the edge length.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_step: None, max_steps: 200_000 }
    }
}

impl IntegratorOptions {
    pub fn with_rtol(rtol: f64) -> Self {
        Self { rtol, atol: rtol * 1e-2, ..Self::default() }
    }
}

/// `(f, f', p f')` at a point of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeState {
    pub value: f64,
    pub derivative: f64,
    pub flux: f64,
}

#[derive(Debug, Clone)]
struct DenseStep {
    x0: f64,
    h: f64,
    /// Continuous-extension coefficients, one pair per state component.
    rcont: [[f64; 2]; 5],
}

impl DenseStep {
    fn eval(&self, x: f64) -> [f64; 2] {
        let s = (x - self.x0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i]))))
    }
}

/// Dense solution of one edge-local initial-value problem.
#[derive(Debug, Clone)]
pub struct EdgeSolution {
    edge: EdgeId,
    length: f64,
    p: EdgeFunction,
    steps: Vec<DenseStep>,
    initial: [f64; 2],
    terminal: [f64; 2],
    rtol: f64,
}

impl EdgeSolution {
    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn tolerance(&self) -> f64 {
        self.rtol
    }

    /// Mesh of accepted steps, including both ends.
    pub fn mesh(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.steps.iter().map(|s| s.x0).collect();
        xs.push(self.length);
        xs
    }

    /// `(f, p f')` at `x`.
    pub fn state(&self, x: f64) -> Result<[f64; 2]> {
        let slack = 1e-12 * self.length;
        if !(x >= -slack && x <= self.length + slack) {
            return Err(Error::OutOfDomain { edge: format!("#{}", self.edge.0), x, length: self.length });
        }
        if x <= 0.0 {
            return Ok(self.initial);
        }
        if x >= self.length {
            return Ok(self.terminal);
        }
        let k = self.steps.partition_point(|s| s.x0 <= x).saturating_sub(1);
        Ok(self.steps[k].eval(x))
    }

    pub fn eval(&self, x: f64) -> Result<EdgeState> {
        let [value, flux] = self.state(x)?;
        let p = self.p.eval(x.clamp(0.0, self.length)).map_err(|source| Error::CoefficientEvaluation {
            edge: format!("#{}", self.edge.0),
            source,
        })?;
        Ok(EdgeState { value, derivative: flux / p, flux })
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct System<'a> {
    p: &'a EdgeFunction,
    q: &'a EdgeFunction,
    source: Option<&'a EdgeFunction>,
    name: &'a str,
}

impl System<'_> {
    fn rhs(&self, x: f64, y: [f64; 2]) -> Result<[f64; 2]> {
        let wrap = |source| Error::CoefficientEvaluation { edge: self.name.to_string(), source };
        let p = self.p.eval(x).map_err(wrap)?;
        let q = self.q.eval(x).map_err(wrap)?;
        let h = match self.source {
            Some(h) => h.eval(x).map_err(wrap)?,
            None => 0.0,
        };
        Ok([y[1] / p, q * y[0] - h])
    }
}

fn axpy(y: [f64; 2], terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = y;
    for (c, k) in terms {
        out[0] += c * k[0];
        out[1] += c * k[1];
    }
    out
}

fn weighted_rms(v: [f64; 2], y0: [f64; 2], y1: [f64; 2], opts: &IntegratorOptions) -> f64 {
    let mut sum = 0.0;
    for i in 0..2 {
        let scale = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        sum += (v[i] / scale).powi(2);
    }
    (sum / 2.0).sqrt()
}

/// Integrates the homogeneous edge equation from `(f, p f')(0) = init`.
pub fn integrate_edge(
    tree: &TreeGraph,
    e: EdgeId,
    c: &Coefficients,
    init: [f64; 2],
    opts: &IntegratorOptions,
) -> Result<EdgeSolution> {
    integrate_edge_with_source(tree, e, c, init, None, opts)
}

/// Integrates `-(p f')' + q f = source` on edge `e`.
pub fn integrate_edge_with_source(
    tree: &TreeGraph,
    e: EdgeId,
    c: &Coefficients,
    init: [f64; 2],
    source: Option<&EdgeFunction>,
    opts: &IntegratorOptions,
) -> Result<EdgeSolution> {
    let length = tree.edge(e).length;
    let name = tree.edge_name(e);
    let coeffs = c.edge(e);
    let sys = System { p: &coeffs.p, q: &coeffs.q, source, name };
    let max_step = opts.max_step.unwrap_or(length / 8.0).min(length);

    let mut x = 0.0;
    let mut y = init;
    let mut k1 = sys.rhs(x, y)?;
    let mut h = initial_step(&sys, y, k1, max_step, opts)?;
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;
    let mut steps = Vec::new();

    const SAFETY: f64 = 0.9;
    const ALPHA: f64 = 0.17;
    const BETA: f64 = 0.04;

    while x < length {
        if steps.len() >= opts.max_steps {
            return Err(Error::TooManySteps { edge: name.into(), steps: opts.max_steps });
        }
        let last = x + h >= length * (1.0 - 1e-14);
        if last {
            h = length - x;
        }
        if h <= 1e-14 * length.max(1.0) {
            return Err(Error::StepSizeUnderflow { edge: name.into(), x });
        }
        let k2 = sys.rhs(x + C2 * h, axpy(y, &[(h * A21, k1)]))?;
        let k3 = sys.rhs(x + C3 * h, axpy(y, &[(h * A31, k1), (h * A32, k2)]))?;
        let k4 = sys.rhs(x + C4 * h, axpy(y, &[(h * A41, k1), (h * A42, k2), (h * A43, k3)]))?;
        let k5 = sys.rhs(x + C5 * h, axpy(y, &[(h * A51, k1), (h * A52, k2), (h * A53, k3), (h * A54, k4)]))?;
        let k6 = sys.rhs(
            x + h,
            axpy(y, &[(h * A61, k1), (h * A62, k2), (h * A63, k3), (h * A64, k4), (h * A65, k5)]),
        )?;
        let y_new = axpy(y, &[(h * A71, k1), (h * A73, k3), (h * A74, k4), (h * A75, k5), (h * A76, k6)]);
        let x_new = if last { length } else { x + h };
        let k7 = sys.rhs(x_new, y_new)?;
        let err_vec = axpy([0.0; 2], &[(h * E1, k1), (h * E3, k3), (h * E4, k4), (h * E5, k5), (h * E6, k6), (h * E7, k7)]);
        let err = weighted_rms(err_vec, y, y_new, opts);
        if !err.is_finite() {
            h *= 0.2;
            rejected = true;
            continue;
        }

        if err <= 1.0 {
            let dense = axpy([0.0; 2], &[(h * D1, k1), (h * D3, k3), (h * D4, k4), (h * D5, k5), (h * D6, k6), (h * D7, k7)]);
            let mut rcont = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k7[i] - bspl;
                rcont[4][i] = dense[i];
            }
            steps.push(DenseStep { x0: x, h, rcont });
            let mut scale = if err == 0.0 { 10.0 } else { SAFETY * err.powf(-ALPHA) * err_old.powf(BETA) };
            scale = scale.clamp(0.2, 10.0);
            if rejected {
                scale = scale.min(1.0);
            }
            err_old = err.max(1e-4);
            rejected = false;
            x = x_new;
            y = y_new;
            k1 = k7;
            h = (h * scale).min(max_step);
        } else {
            h *= (SAFETY * err.powf(-ALPHA)).max(0.2);
            rejected = true;
        }
    }

    Ok(EdgeSolution {
        edge: e,
        length,
        p: coeffs.p.clone(),
        steps,
        initial: init,
        terminal: y,
        rtol: opts.rtol,
    })
}

fn initial_step(sys: &System, y0: [f64; 2], f0: [f64; 2], max_step: f64, opts: &IntegratorOptions) -> Result<f64> {
    let d0 = weighted_rms(y0, y0, y0, opts);
    let d1 = weighted_rms(f0, y0, y0, opts);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * max_step.max(1.0) } else { 0.01 * d0 / d1 };
    let h0 = h0.min(max_step);
    let f1 = sys.rhs(h0, axpy(y0, &[(h0, f0)]))?;
    let d2 = weighted_rms([f1[0] - f0[0], f1[1] - f0[1]], y0, y0, opts) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    Ok((100.0 * h0).min(h1).min(max_step))
}

/// The `2m` edge-supported kernel solutions. For edge `i` (0-based) the
/// pair is `φ_{2i}` with `(f, f')(0) = (1, 0)` and `φ_{2i+1}` with
/// `(f, f')(0) = (0, 1)`; both vanish off edge `i`.
#[derive(Debug, Clone)]
pub struct FundamentalBasis {
    pairs: Vec<[EdgeSolution; 2]>,
}

impl FundamentalBasis {
    pub fn build(tree: &TreeGraph, c: &Coefficients, opts: &IntegratorOptions) -> Result<Self> {
        let pairs = tree
            .edge_ids()
            .map(|e| {
                let p0 = c.p(e, 0.0)?;
                Ok([
                    integrate_edge(tree, e, c, [1.0, 0.0], opts)?,
                    integrate_edge(tree, e, c, [0.0, p0], opts)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pairs })
    }

    /// Number of basis functions, `2m`.
    pub fn len(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn edge_of(&self, j: usize) -> EdgeId {
        EdgeId(j / 2)
    }

    pub fn function(&self, j: usize) -> &EdgeSolution {
        &self.pairs[j / 2][j % 2]
    }

    pub fn pair(&self, e: EdgeId) -> &[EdgeSolution; 2] {
        &self.pairs[e.0]
    }

    /// `(f, p f')` of `a_{2e} φ_{2e} + a_{2e+1} φ_{2e+1}` at `x` on edge `e`.
    pub fn combine(&self, e: EdgeId, weights: [f64; 2], x: f64) -> Result<[f64; 2]> {
        let [u, v] = &self.pairs[e.0];
        let (su, sv) = (u.state(x)?, v.state(x)?);
        Ok([weights[0] * su[0] + weights[1] * sv[0], weights[0] * su[1] + weights[1] * sv[1]])
    }
}
