//! Verification workbench for left-invariant metrics on low-dimensional Lie
//! groups.
//!
//! * [`scalar_expr`]: exact scalar functions (polynomial × trig × exp atoms)
//!   with a canonical normal form and exact zero test.
//! * [`frame_geometry`]: connection and curvature from structure constants and
//!   a constant frame metric, in exact rationals.
//! * [`group_model`]: coordinate realizations of frames; soliton, gradient and
//!   Killing verification; an independent coordinate Christoffel oracle.
//! * [`ricci_flow`]: the diagonal Ricci-flow systems on the Heisenberg group,
//!   RK4 integration, conserved quantities and closed-form solutions.
//! * [`catalog`]: the shipped example metrics and their claims.
//! * [`report`]: claim evaluation and report rendering.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod frame_geometry;
pub mod group_model;
pub mod linalg;
pub mod report;
pub mod ricci_flow;
pub mod scalar_expr;

pub use linalg::{QMatrix, Rational};
pub use scalar_expr::{Chart, CoordDecl, CoordKind, Expr};
