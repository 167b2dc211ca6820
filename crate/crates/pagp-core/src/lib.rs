//! Physics-assisted Gaussian process (PAGP) regression for forward and
//! inverse problems of partial differential equations.
//!
//! The crate couples a zero-mean Gaussian process surrogate with a PDE
//! residual penalty evaluated on collocation points. Training minimizes one
//! of four composite losses (leave-one-out validation density, leave-one-out
//! squared error, negative log marginal likelihood, or their relative-error
//! variants) with BFGS. Three solution regimes are provided: a continuous
//! model over joint space-time inputs, a discrete model marching per-layer
//! GPs with a time-stepping scheme, and a two-step hybrid of the two.
//! A max-variance active learning loop augments training sets point by
//! point.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature enables wall-clock timings in solve reports.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod active;
pub mod deriv;
pub mod error;
pub mod gp;
pub mod kernel;
pub mod linalg;
pub mod loss;
pub mod metrics;
pub mod mixed;
pub mod optim;
pub mod pde;
pub mod rng;
pub mod scheme;
pub mod solver;
pub mod train;

pub use error::{Error, Result};
pub use gp::{build_gram, GramFactorization, TrainedGp};
pub use kernel::{HyperParams, KernelFamily, KernelParams, KernelSpec, ParamLayout};
pub use pde::{builtin_problem, BuiltinProblem, PdeProblem, PointRole, PointSet};
pub use scheme::{SchemeKind, SchemeSpec};
