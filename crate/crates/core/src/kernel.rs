//! Named strategies for evaluating a Green's kernel, so the formula path
//! and its cross-checks can be selected and compared uniformly.

use crate::error::{Error, Result};
use crate::graph::{GraphPoint, TreeGraph};
use crate::green::GreensFunction;
use crate::oracle::{discretize, oracle_green, DiscreteSystem};

/// Measure the kernel integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `f = ∫ G h dρ`
    Rho,
    /// `f = ∫ G h dy`
    Length,
}

pub trait GreenKernel {
    fn name(&self) -> &str;

    fn measure(&self) -> Measure;

    fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64>;

    /// `G(x, y)` for every `x` in `xs`.
    fn column(&self, y: &GraphPoint, xs: &[GraphPoint]) -> Result<Vec<f64>> {
        xs.iter().map(|x| self.eval(x, y)).collect()
    }
}

/// The tree formula; `x` at an edge end is the one-sided limit.
pub struct TreeFormula<'a> {
    gf: &'a GreensFunction,
}

impl GreenKernel for TreeFormula<'_> {
    fn name(&self) -> &str {
        "tree"
    }

    fn measure(&self) -> Measure {
        Measure::Rho
    }

    fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        self.gf.green_eval_limit(x, y)
    }
}

pub struct Pokornyi<'a> {
    gf: &'a GreensFunction,
}

impl GreenKernel for Pokornyi<'_> {
    fn name(&self) -> &str {
        "pokornyi"
    }

    fn measure(&self) -> Measure {
        Measure::Length
    }

    fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        self.gf.pokornyi_green(x, y)
    }
}

/// Finite-difference kernel columns, interpolated linearly in `x`.
pub struct FdOracle {
    sys: DiscreteSystem,
}

impl FdOracle {
    pub fn system(&self) -> &DiscreteSystem {
        &self.sys
    }
}

impl GreenKernel for FdOracle {
    fn name(&self) -> &str {
        "fd-oracle"
    }

    fn measure(&self) -> Measure {
        Measure::Rho
    }

    fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        Ok(oracle_green(&self.sys, y)?.eval(x))
    }

    fn column(&self, y: &GraphPoint, xs: &[GraphPoint]) -> Result<Vec<f64>> {
        let g = oracle_green(&self.sys, y)?;
        Ok(xs.iter().map(|x| g.eval(x)).collect())
    }
}

pub struct KernelContext<'a> {
    pub gf: &'a GreensFunction,
    /// Intervals per edge for the finite-difference oracle.
    pub oracle_resolution: usize,
}

pub type KernelFactory = for<'a> fn(&KernelContext<'a>) -> Result<Box<dyn GreenKernel + 'a>>;

pub struct KernelRegistry {
    entries: Vec<(&'static str, KernelFactory)>,
}

impl KernelRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// `tree`, `pokornyi` and `fd-oracle`.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register("tree", |ctx| Ok(Box::new(TreeFormula { gf: ctx.gf })));
        r.register("pokornyi", |ctx| Ok(Box::new(Pokornyi { gf: ctx.gf })));
        r.register("fd-oracle", |ctx| {
            let gf = ctx.gf;
            let sys = discretize(gf.tree(), gf.coefficients(), gf.boundary_spec(), ctx.oracle_resolution)?;
            Ok(Box::new(FdOracle { sys }))
        });
        r
    }

    /// Adds or replaces a strategy.
    pub fn register(&mut self, name: &'static str, factory: KernelFactory) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(entry) => entry.1 = factory,
            None => self.entries.push((name, factory)),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(n, _)| *n)
    }

    pub fn create<'a>(&self, name: &str, ctx: &KernelContext<'a>) -> Result<Box<dyn GreenKernel + 'a>> {
        let (_, factory) =
            self.entries.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownKernel(name.into()))?;
        factory(ctx)
    }
}

impl Default for KernelRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

/// `k` interior points per edge at `l i / (k + 1)`.
pub fn interior_grid(tree: &TreeGraph, k: usize) -> Vec<GraphPoint> {
    tree.edge_ids()
        .flat_map(|e| {
            let len = tree.edge(e).length;
            (1..=k).map(move |i| GraphPoint::new(e, len * i as f64 / (k + 1) as f64))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    /// Largest magnitude of the reference values.
    pub max_reference: f64,
    pub pairs: usize,
}

impl Deviation {
    /// `max |a - b| / max |a|`.
    pub fn relative(&self) -> f64 {
        if self.max_reference > 0.0 {
            self.max_abs / self.max_reference
        } else {
            self.max_abs
        }
    }
}

/// Compares two kernels on every pair of `points`, both expressed against
/// `dy` (kernels against `dρ` are multiplied by `ρ(y)`).
pub fn compare_kernels(
    gf: &GreensFunction,
    reference: &dyn GreenKernel,
    candidate: &dyn GreenKernel,
    points: &[GraphPoint],
) -> Result<Deviation> {
    let to_length = |k: &dyn GreenKernel, y: &GraphPoint, v: Vec<f64>| -> Vec<f64> {
        match k.measure() {
            Measure::Length => v,
            Measure::Rho => {
                let rho = gf.coefficients().rho(y.edge);
                v.into_iter().map(|g| rho * g).collect()
            }
        }
    };
    let mut dev = Deviation { max_abs: 0.0, max_reference: 0.0, pairs: 0 };
    for y in points {
        let a = to_length(reference, y, reference.column(y, points)?);
        let b = to_length(candidate, y, candidate.column(y, points)?);
        for (ra, cb) in a.iter().zip(&b) {
            dev.max_abs = dev.max_abs.max((ra - cb).abs());
            dev.max_reference = dev.max_reference.max(ra.abs());
            dev.pairs += 1;
        }
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Coefficients, EdgeCoefficients};
    use crate::conditions::BoundarySpec;
    use crate::graph::fixtures::*;
    use crate::green::GreenOptions;

    fn y_gf() -> GreensFunction {
        let t = y_tree();
        let c = Coefficients::new(&t, [1.0, 2.0, 3.0].iter().map(|&r| EdgeCoefficients::new(1.0, 0.0, r)).collect())
            .unwrap();
        GreensFunction::new(t, c, BoundarySpec::dirichlet(), GreenOptions::default()).unwrap()
    }

    #[test]
    fn registry_lists_and_rejects() {
        let r = KernelRegistry::standard();
        assert_eq!(r.names().collect::<Vec<_>>(), ["tree", "pokornyi", "fd-oracle"]);
        let gf = y_gf();
        let ctx = KernelContext { gf: &gf, oracle_resolution: 64 };
        assert_eq!(r.create("nope", &ctx).err().unwrap(), Error::UnknownKernel("nope".into()));
        assert_eq!(r.create("pokornyi", &ctx).unwrap().name(), "pokornyi");
    }

    #[test]
    fn tree_vs_pokornyi() {
        let gf = y_gf();
        let r = KernelRegistry::standard();
        let ctx = KernelContext { gf: &gf, oracle_resolution: 64 };
        let (a, b) = (r.create("tree", &ctx).unwrap(), r.create("pokornyi", &ctx).unwrap());
        let pts = interior_grid(gf.tree(), 3);
        let d = compare_kernels(&gf, a.as_ref(), b.as_ref(), &pts).unwrap();
        assert_eq!(d.pairs, 81);
        assert!(d.max_abs < 1e-9, "{d:?}");
    }

    #[test]
    fn tree_vs_oracle_coarse() {
        let gf = y_gf();
        let r = KernelRegistry::standard();
        let ctx = KernelContext { gf: &gf, oracle_resolution: 400 };
        let (a, b) = (r.create("tree", &ctx).unwrap(), r.create("fd-oracle", &ctx).unwrap());
        let d = compare_kernels(&gf, a.as_ref(), b.as_ref(), &interior_grid(gf.tree(), 3)).unwrap();
        assert!(d.relative() < 1e-3, "{d:?}");
    }
}
