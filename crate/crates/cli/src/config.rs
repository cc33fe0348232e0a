//! Problem configuration files (TOML).
//!
//! ```toml
//! nodes = ["a", "b"]
//! root = "a"
//!
//! [[edges]]
//! id = "e"
//! tail = "a"
//! head = "b"
//! length = 1.0
//!
//! [coefficients]
//! mode = "per_edge"
//! per_edge.e = { p = "1", q = "0", rho = 1.0 }
//!
//! [boundary]
//! a = "dirichlet"
//! b = { robin = { alpha = 1.0, beta = 2.0 } }
//!
//! [rhs]
//! e = "1"
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use treegreen_core::coeffs::RiverData;
use treegreen_core::{
    river_coefficients, BoundaryCondition, BoundarySpec, Coefficients, EdgeCoefficients, EdgeFunction, EdgeSpec,
    GreenOptions, IntegratorOptions, MonotoneCubic, QuadOptions, TreeGraph, TreeSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    pub coefficients: CoefficientsConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub boundary: BTreeMap<String, BoundaryEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rhs: BTreeMap<String, CoefficientValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<TolConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMode {
    PerEdge,
    River,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsConfig {
    pub mode: CoefficientMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_edge: Option<BTreeMap<String, PerEdgeConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub river: Option<RiverConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerEdgeConfig {
    pub p: CoefficientValue,
    #[serde(default = "zero")]
    pub q: CoefficientValue,
    #[serde(default = "one")]
    pub rho: f64,
}

fn zero() -> CoefficientValue {
    CoefficientValue::Number(0.0)
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiverConfig {
    #[serde(rename = "D")]
    pub d: BTreeMap<String, f64>,
    pub v: BTreeMap<String, f64>,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<BTreeMap<String, f64>>,
    /// Overrides the top-level root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

/// A number, an expression in `x`, or a monotone table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientValue {
    Number(f64),
    Expression(String),
    Table { x: Vec<f64>, y: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundaryEntry {
    Kind(BoundaryKind),
    Robin { robin: RobinConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobinConfig {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<f64>,
}

#[derive(Debug)]
pub enum ConfigError {
    Parse(String),
    Field { field: String, message: String },
    Problem(treegreen_core::Error),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(msg) => write!(f, "{msg}"),
            ConfigError::Field { field, message } => write!(f, "{field}: {message}"),
            ConfigError::Problem(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<treegreen_core::Error> for ConfigError {
    fn from(e: treegreen_core::Error) -> Self {
        ConfigError::Problem(e)
    }
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

/// Everything needed to run a command.
#[derive(Debug, Clone)]
pub struct Problem {
    pub tree: TreeGraph,
    pub coefficients: Coefficients,
    pub boundary: BoundarySpec,
    pub rhs: Vec<EdgeFunction>,
    pub c: Option<Vec<f64>>,
    pub options: GreenOptions,
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn build(&self) -> Result<Problem, ConfigError> {
        let root = match &self.coefficients.river {
            Some(RiverConfig { root: Some(r), .. }) => Some(r.clone()),
            _ => self.root.clone(),
        };
        let tree = TreeGraph::build(&TreeSpec {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec { id: e.id.clone(), tail: e.tail.clone(), head: e.head.clone(), length: e.length })
                .collect(),
            root,
        })?;
        let coefficients = self.build_coefficients(&tree)?;

        let mut boundary = BoundarySpec::dirichlet();
        for (name, entry) in &self.boundary {
            let node = tree.node_id(name).map_err(|e| field(format!("boundary.{name}"), e.to_string()))?;
            let bc = match *entry {
                BoundaryEntry::Kind(BoundaryKind::Dirichlet) => BoundaryCondition::Dirichlet,
                BoundaryEntry::Kind(BoundaryKind::Neumann) => BoundaryCondition::Neumann,
                BoundaryEntry::Robin { robin } => BoundaryCondition::Robin { alpha: robin.alpha, beta: robin.beta },
            };
            boundary.set(node, bc);
        }
        treegreen_core::conditions::standard_functionals(&tree, &boundary)
            .map_err(|e| field("boundary", e.to_string()))?;

        check_keys("rhs", self.rhs.keys(), &tree)?;
        let rhs = tree
            .edges()
            .iter()
            .map(|e| match self.rhs.get(&e.name) {
                Some(v) => edge_function(v, &format!("rhs.{}", e.name)),
                None => Ok(EdgeFunction::Constant(0.0)),
            })
            .collect::<Result<Vec<_>, _>>()?;

        let c = if self.c.is_empty() {
            None
        } else if self.c.len() != 2 * tree.edge_count() {
            return Err(field("c", format!("expected {} entries, got {}", 2 * tree.edge_count(), self.c.len())));
        } else {
            Some(self.c.clone())
        };

        let mut options = GreenOptions::default();
        if let Some(tol) = &self.tol {
            if let Some(ode) = tol.ode {
                if !(ode > 0.0 && ode < 1.0) {
                    return Err(field("tol.ode", format!("must lie in (0, 1), got {ode}")));
                }
                options.ode = IntegratorOptions::with_rtol(ode);
            }
            if let Some(quad) = tol.quad {
                if !(quad > 0.0 && quad < 1.0) {
                    return Err(field("tol.quad", format!("must lie in (0, 1), got {quad}")));
                }
                options.quad = QuadOptions::with_rel_tol(quad);
            }
        }
        Ok(Problem { tree, coefficients, boundary, rhs, c, options })
    }

    fn build_coefficients(&self, tree: &TreeGraph) -> Result<Coefficients, ConfigError> {
        let cfg = &self.coefficients;
        match cfg.mode {
            CoefficientMode::PerEdge => {
                let table = cfg.per_edge.as_ref().ok_or_else(|| field("coefficients.per_edge", "missing"))?;
                check_keys("coefficients.per_edge", table.keys(), tree)?;
                let edges = tree
                    .edges()
                    .iter()
                    .map(|e| {
                        let path = format!("coefficients.per_edge.{}", e.name);
                        let entry = table.get(&e.name).ok_or_else(|| field(&path, "missing"))?;
                        Ok(EdgeCoefficients {
                            p: edge_function(&entry.p, &format!("{path}.p"))?,
                            q: edge_function(&entry.q, &format!("{path}.q"))?,
                            rho: entry.rho,
                        })
                    })
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                Ok(Coefficients::new(tree, edges)?)
            }
            CoefficientMode::River => {
                let river = cfg.river.as_ref().ok_or_else(|| field("coefficients.river", "missing"))?;
                let per_edge = |name: &str, map: &BTreeMap<String, f64>| -> Result<Vec<f64>, ConfigError> {
                    check_keys(&format!("coefficients.river.{name}"), map.keys(), tree)?;
                    tree.edges()
                        .iter()
                        .map(|e| {
                            map.get(&e.name)
                                .copied()
                                .ok_or_else(|| field(format!("coefficients.river.{name}.{}", e.name), "missing"))
                        })
                        .collect()
                };
                let data = RiverData {
                    diffusivity: per_edge("D", &river.d)?,
                    velocity: per_edge("v", &river.v)?,
                    sigma: river.sigma,
                    rho: river.rho.as_ref().map(|r| per_edge("rho", r)).transpose()?,
                };
                Ok(river_coefficients(tree, &data)?)
            }
        }
    }
}

fn check_keys<'a>(path: &str, keys: impl Iterator<Item = &'a String>, tree: &TreeGraph) -> Result<(), ConfigError> {
    for k in keys {
        if tree.edge_id(k).is_err() {
            return Err(field(format!("{path}.{k}"), "no such edge"));
        }
    }
    Ok(())
}

fn edge_function(v: &CoefficientValue, path: &str) -> Result<EdgeFunction, ConfigError> {
    match v {
        CoefficientValue::Number(x) => Ok(EdgeFunction::Constant(*x)),
        CoefficientValue::Expression(s) => EdgeFunction::parse(s).map_err(|e| field(path, e.to_string())),
        CoefficientValue::Table { x, y } => MonotoneCubic::new(x.clone(), y.clone())
            .map(EdgeFunction::Table)
            .map_err(|e| field(path, e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTERVAL: &str = r#"
nodes = ["a", "b"]
root = "a"

[[edges]]
id = "e"
tail = "a"
head = "b"
length = 1

[coefficients]
mode = "per_edge"
per_edge.e = { p = "1 + x", q = 0, rho = 2.0 }

[boundary]
a = "dirichlet"
b = { robin = { alpha = 1.0, beta = 2.0 } }

[rhs]
e = "sin(x)"

[tol]
ode = 1e-9
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = ProblemConfig::parse(INTERVAL).unwrap();
        assert_eq!(cfg.edges[0].length, 1.0);
        assert_eq!(cfg.coefficients.per_edge.as_ref().unwrap()["e"].q, CoefficientValue::Number(0.0));
        assert_eq!(cfg.boundary["b"], BoundaryEntry::Robin { robin: RobinConfig { alpha: 1.0, beta: 2.0 } });
        let p = cfg.build().unwrap();
        assert_eq!(p.tree.edge_count(), 1);
        assert_eq!(p.coefficients.rho(treegreen_core::EdgeId(0)), 2.0);
        assert_eq!(p.options.ode.rtol, 1e-9);
        assert!(p.c.is_none());
    }

    #[test]
    fn round_trip() {
        let cfg = ProblemConfig::parse(INTERVAL).unwrap();
        let again = ProblemConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn missing_length_reports_location() {
        let text = INTERVAL.replace("length = 1\n", "");
        let err = ProblemConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("length"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn field_errors() {
        let text = INTERVAL.replace("per_edge.e =", "per_edge.f =");
        let err = ProblemConfig::parse(&text).unwrap().build().unwrap_err().to_string();
        assert_eq!(err, "coefficients.per_edge.f: no such edge");
        let text = INTERVAL.replace("\"1 + x\"", "\"1 +\"");
        let err = ProblemConfig::parse(&text).unwrap().build().unwrap_err().to_string();
        assert!(err.starts_with("coefficients.per_edge.e.p:"), "{err}");
        let text = INTERVAL.replace("root = \"a\"", "root = \"a\"\nc = [1.0]");
        let err = ProblemConfig::parse(&text).unwrap().build().unwrap_err().to_string();
        assert_eq!(err, "c: expected 2 entries, got 1");
    }

    #[test]
    fn river_mode() {
        let text = r#"
nodes = ["r", "a"]
root = "r"
edges = [{ id = "e", tail = "r", head = "a", length = 1.0 }]
[coefficients]
mode = "river"
river = { D = { e = 2.0 }, v = { e = 1.0 }, sigma = 1.0 }
"#;
        let p = ProblemConfig::parse(text).unwrap().build().unwrap();
        let v = p.coefficients.p(treegreen_core::EdgeId(0), 1.0).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-14);
    }
}
