//! Sturm-Liouville problems `-(p f')' + q f = h` on finite metric trees,
//! solved through an explicitly constructed Green's function.
//!
//! ```
//! use treegreen_core::{
//!     BoundarySpec, Coefficients, EdgeCoefficients, EdgeSpec, GraphPoint, GreenOptions, GreensFunction,
//!     TreeGraph, TreeSpec,
//! };
//!
//! let spec = TreeSpec {
//!     nodes: vec!["a".into(), "b".into()],
//!     edges: vec![EdgeSpec { id: "e".into(), tail: "a".into(), head: "b".into(), length: 1.0 }],
//!     root: None,
//! };
//! let tree = TreeGraph::build(&spec).unwrap();
//! let c = Coefficients::uniform(&tree, EdgeCoefficients::new(1.0, 0.0, 1.0)).unwrap();
//! let gf = GreensFunction::new(tree, c, BoundarySpec::dirichlet(), GreenOptions::default()).unwrap();
//! let e = gf.tree().edge_id("e").unwrap();
//! let g = gf.green_eval(&GraphPoint::new(e, 0.5), &GraphPoint::new(e, 0.25)).unwrap();
//! assert!((g - 0.125).abs() < 1e-12);
//! ```

pub mod coeffs;
pub mod conditions;
pub mod edgeode;
pub mod error;
pub mod graph;
pub mod green;
pub mod kernel;
pub mod oracle;
pub mod quadrature;

pub use coeffs::{river_coefficients, Coefficients, EdgeCoefficients, EdgeFunction, MonotoneCubic, RiverData};
pub use conditions::{BoundaryCondition, BoundarySpec};
pub use edgeode::IntegratorOptions;
pub use error::{Error, Result};
pub use graph::{EdgeId, EdgeSpec, GraphPoint, NodeId, TreeGraph, TreeSpec};
pub use green::{GreenOptions, GreenSolution, GreensFunction};
pub use quadrature::QuadOptions;
