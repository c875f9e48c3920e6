//! Inexact primal-dual potential reduction interior point methods for linear
//! programming in standard form
//!
//! ```text
//! min cᵀx  s.t.  A x = b, x ≥ 0        max bᵀy  s.t.  Aᵀy + z = c, z ≥ 0
//! ```
//!
//! Newton directions come from conjugate gradients on the normal equations
//! `A D² Aᵀ dy = g`. Each CG iterate is turned into a candidate direction
//! whose only residual sits in the complementarity row, confined to a set of
//! basic columns; the candidate is accepted once that residual satisfies the
//! descent, relative-size and (for infeasible starts) gap-control conditions.
//!
//! * [`ipm::run_feasible`] starts from a strictly feasible point and
//!   decreases the Tanabe–Todd–Ye potential by a fixed `δ` per iteration.
//! * [`ipm::run_infeasible`] starts from `ρ(e, 0, e)` and either reaches
//!   `xᵀz ≤ ε` or proves that no optimal pair with `‖(x*, z*)‖∞ ≤ ρ` exists.
//!
//! [`validate`] compares the inexact machinery against a dense exact oracle,
//! and [`experiment`] runs seeded parameter sweeps.

pub mod error;
pub mod experiment;
pub mod ipm;
pub mod linalg;
pub mod lp;
pub mod newton;
pub mod potential;
pub mod validate;

pub use error::{Error, Result};
