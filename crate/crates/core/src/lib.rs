//! Fault-tolerant detection systems on finite graphs and on the infinite
//! king's grid.
//!
//! The crate covers open-locating-dominating (OLD) sets and identifying codes
//! (ICs) together with their `k`-redundant variants. It is organised in layers:
//!
//! * [`graph`] and [`vertex_set`]: finite simple graphs with bitset adjacency,
//!   including king's-grid tori.
//! * [`detection`]: locating codes, domination counts, distinguishing tests,
//!   redundancy verification and exact share arithmetic.
//! * [`periodic`]: periodic detector patterns on the infinite king's grid,
//!   exact infinite-grid verification, torus lifting and pattern search.
//! * [`share_bound`]: the closed-form partial-share bound and the exhaustive
//!   5×5 local-configuration enumerator that certifies per-detector share
//!   maxima.
//! * [`solver`]: exact minimum detection systems on small graphs.
//!
//! All shares and densities are exact [`Rational`]s.

pub mod detection;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod periodic;
pub mod rational;
pub mod share_bound;
pub mod solver;
pub mod vertex_set;

pub use detection::{DetectorSet, LocatingCode, Verdict, Violation};
pub use error::{Error, Result};
pub use graph::{DetectionKind, Graph, TorusShape};
pub use geometry::{Cell, Dihedral};
pub use periodic::PeriodicPattern;
pub use rational::Rational;
pub use share_bound::{LemmaBoundQuery, Patch};
pub use solver::{Mode, SolveRequest, SolveResult};
pub use vertex_set::VertexSet;
