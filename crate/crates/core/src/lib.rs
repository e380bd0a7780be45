//! Invariant Basis Number for Cohn, relative Cohn and Leavitt path algebras
//! of finite graphs.
//!
//! The algebras reduce to a commutative monoid presentation. IBN is certified
//! by an exact rational weight vector that is invariant under every rewrite
//! rule, and refuted by an explicit confluence witness `m*rho ~ m'*rho`.
//!
//! ```
//! use cohn_ibn::cli::fixtures;
//! use cohn_ibn::decision::{decide_ibn, AlgebraSpec};
//! use cohn_ibn::monoid::SearchBounds;
//!
//! let spec = AlgebraSpec::cohn(fixtures::r2());
//! let verdict = decide_ibn(&spec, &SearchBounds::default(), 6).unwrap();
//! assert!(verdict.is_certified());
//! ```

pub mod certificate;
pub mod cli;
pub mod constructions;
pub mod decision;
pub mod graph;
pub mod monoid;

pub use certificate::{Rational, WeightCertificate};
pub use decision::{decide_ibn, AlgebraKind, AlgebraSpec, IbnStatus, ImnStatus, Verdict};
pub use graph::{Edge, Graph, GraphError, IncidenceMatrix};
