use std::fmt::Write;

use treegreen_core::coeffs;
use treegreen_core::conditions::{delta_matrix, standard_functionals};
use treegreen_core::edgeode::FundamentalBasis;
use treegreen_core::kernel::{compare_kernels, interior_grid, KernelContext, KernelRegistry};
use treegreen_core::oracle::{discretize, oracle_solve};
use treegreen_core::{Error, GraphPoint, GreensFunction, TreeGraph};

use crate::config::{ConfigError, Problem};
use crate::format::number;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failure,
    Degenerate,
    InvalidConfig,
    ComparisonFailed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Failure => 1,
            Outcome::Degenerate => 2,
            Outcome::InvalidConfig => 3,
            Outcome::ComparisonFailed => 4,
        }
    }
}

#[derive(Debug)]
pub struct CommandError {
    pub outcome: Outcome,
    pub message: String,
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError { outcome: classify(&e), message: e.to_string() }
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        let outcome = match &e {
            ConfigError::Problem(inner) => match classify(inner) {
                Outcome::Degenerate => Outcome::Degenerate,
                _ => Outcome::InvalidConfig,
            },
            _ => Outcome::InvalidConfig,
        };
        CommandError { outcome, message: e.to_string() }
    }
}

pub fn classify(e: &Error) -> Outcome {
    match e {
        Error::DegenerateProblem { .. } | Error::SingularSystem | Error::IntervalDegenerate(_) => Outcome::Degenerate,
        Error::StepSizeUnderflow { .. }
        | Error::TooManySteps { .. }
        | Error::QuadratureFailure { .. }
        | Error::NonConstantWronskian { .. }
        | Error::IncompleteTrace(_) => Outcome::Failure,
        _ => Outcome::InvalidConfig,
    }
}

type CmdResult = Result<(String, Outcome), CommandError>;

/// Parses `EDGE:POS`.
pub fn parse_point(tree: &TreeGraph, text: &str) -> Result<GraphPoint, CommandError> {
    let bad = |msg: String| CommandError { outcome: Outcome::InvalidConfig, message: msg };
    let (edge, pos) = text.rsplit_once(':').ok_or_else(|| bad(format!("expected EDGE:POS, got `{text}`")))?;
    let x: f64 = pos.trim().parse().map_err(|_| bad(format!("invalid position `{pos}`")))?;
    let e = tree.edge_id(edge.trim())?;
    Ok(tree.point(e, x)?)
}

fn green_function(p: &Problem) -> Result<GreensFunction, CommandError> {
    Ok(GreensFunction::new(p.tree.clone(), p.coefficients.clone(), p.boundary.clone(), p.options)?)
}

pub fn validate(p: &Problem) -> CmdResult {
    let report = coeffs::validate(&p.coefficients, &p.tree, 33)?;
    let fs = standard_functionals(&p.tree, &p.boundary)?;
    let basis = FundamentalBasis::build(&p.tree, &p.coefficients, &p.options.ode)?;
    let delta = delta_matrix(&p.tree, &basis, &fs, &p.coefficients)?;
    let r = delta.report();
    let mut out = String::from("quantity,value\n");
    let _ = writeln!(out, "edges,{}", p.tree.edge_count());
    let _ = writeln!(out, "boundary_nodes,{}", p.tree.boundary_nodes().len());
    let _ = writeln!(out, "det,{}", number(r.det));
    let _ = writeln!(out, "rcond,{}", number(r.rcond));
    let _ = writeln!(out, "nondegenerate,{}", r.nondegenerate);
    let _ = writeln!(out, "min_p,{}", number(report.min_p));
    let _ = writeln!(out, "max_p_jump,{}", number(report.max_p_jump));
    Ok((out, if r.nondegenerate { Outcome::Ok } else { Outcome::Degenerate }))
}

/// Sample points for `y`: either one given point, or `grid` interior
/// points per edge.
pub enum Targets {
    Point(String),
    Grid(usize),
}

pub fn green(p: &Problem, at: &str, targets: &Targets) -> CmdResult {
    let gf = green_function(p)?;
    let x = parse_point(gf.tree(), at)?;
    let ys = match targets {
        Targets::Point(s) => vec![parse_point(gf.tree(), s)?],
        Targets::Grid(n) => interior_grid(gf.tree(), *n),
    };
    let mut out = String::from("edge,pos,value\n");
    for y in &ys {
        let g = gf.green_eval_limit(&x, y)?;
        let _ = writeln!(out, "{},{},{}", gf.tree().edge_name(y.edge), number(y.x), number(g));
    }
    let _ = writeln!(out, "# solve-count={}", gf.solve_count());
    Ok((out, Outcome::Ok))
}

pub fn solve(p: &Problem, grid: usize) -> CmdResult {
    if grid < 2 {
        return Err(CommandError { outcome: Outcome::InvalidConfig, message: "--grid must be at least 2".into() });
    }
    let gf = green_function(p)?;
    let c = p.c.clone().unwrap_or_else(|| vec![0.0; 2 * gf.tree().edge_count()]);
    let f = gf.solve_general(&p.rhs, &c)?;
    let mut out = String::from("edge,pos,value\n");
    for (e, x, s) in f.sample_grid(grid)? {
        let _ = writeln!(out, "{},{},{}", gf.tree().edge_name(e), number(x), number(s.value));
    }
    Ok((out, Outcome::Ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Oracle,
    Pokornyi,
}

pub struct CompareOptions {
    pub mode: CompareMode,
    /// Intervals per edge for the oracle.
    pub resolution: usize,
    /// Interior sample points per edge.
    pub samples: usize,
    /// Overrides the mode's default tolerance.
    pub tolerance: Option<f64>,
}

impl CompareMode {
    /// Default tolerance and whether it applies to the relative deviation.
    pub fn tolerance(self) -> (f64, bool) {
        match self {
            CompareMode::Oracle => (5e-4, true),
            CompareMode::Pokornyi => (1e-6, false),
        }
    }

    pub fn kernel_name(self) -> &'static str {
        match self {
            CompareMode::Oracle => "fd-oracle",
            CompareMode::Pokornyi => "pokornyi",
        }
    }
}

pub fn compare(p: &Problem, opts: &CompareOptions) -> CmdResult {
    let gf = green_function(p)?;
    let registry = KernelRegistry::standard();
    let ctx = KernelContext { gf: &gf, oracle_resolution: opts.resolution };
    let reference = registry.create("tree", &ctx)?;
    let candidate = registry.create(opts.mode.kernel_name(), &ctx)?;
    let points = interior_grid(gf.tree(), opts.samples);
    let (default_tol, relative) = opts.mode.tolerance();
    let tol = opts.tolerance.unwrap_or(default_tol);

    let mut out = String::from("check,pairs,max_abs,max_rel,tolerance,status\n");
    let mut ok = true;
    let mut row = |name: &str, pairs: usize, abs: f64, rel: f64| {
        let pass = if relative { rel <= tol } else { abs <= tol };
        ok &= pass;
        let _ = writeln!(
            out,
            "{name},{pairs},{},{},{},{}",
            number(abs),
            number(rel),
            number(tol),
            if pass { "pass" } else { "fail" }
        );
    };

    let d = compare_kernels(&gf, reference.as_ref(), candidate.as_ref(), &points)?;
    row("kernel", d.pairs, d.max_abs, d.relative());

    if opts.mode == CompareMode::Oracle && p.rhs.iter().any(|h| !h.is_zero()) {
        let sys = discretize(gf.tree(), gf.coefficients(), gf.boundary_spec(), opts.resolution)?;
        let discrete = oracle_solve(&sys, gf.tree(), &p.rhs)?;
        let f = gf.green_apply(&p.rhs)?;
        let (mut max_abs, mut max_ref, mut n) = (0.0f64, 0.0f64, 0);
        for e in gf.tree().edge_ids() {
            let xs: Vec<f64> = points.iter().filter(|q| q.edge == e).map(|q| q.x).collect();
            for (x, s) in xs.iter().zip(f.sample_edge(e, &xs)?) {
                let o = discrete.eval(&GraphPoint::new(e, *x));
                max_abs = max_abs.max((s.value - o).abs());
                max_ref = max_ref.max(s.value.abs());
                n += 1;
            }
        }
        let rel = if max_ref > 0.0 { max_abs / max_ref } else { max_abs };
        row("solution", n, max_abs, rel);
    }
    Ok((out, if ok { Outcome::Ok } else { Outcome::ComparisonFailed }))
}
