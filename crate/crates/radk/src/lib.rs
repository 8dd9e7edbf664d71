//! Rearrangements, rearrangement-invariant norms, Peetre K-functionals, and
//! exact distributions of Rademacher sums `Σ a_k r_k`.
//!
//! The crate has three layers:
//!
//! * canonical representations: [`Sequence`], [`StepFunction`], [`Distribution`],
//!   [`ConcaveFn`], together with rearrangements, head integrals, and the dyadic /
//!   unit averaging operators;
//! * engines: exact laws of Rademacher sums ([`rademacher`]), K-functional
//!   evaluators for the couples `(l1,l2)`, `(L∞,G)`, `(L1,L∞)`, `(L1,L2)`,
//!   `(L∞,Lq)` and Marcinkiewicz pairs ([`kfunc`]), norm evaluators ([`norms`]),
//!   and real K-method machinery ([`interp`]);
//! * the experiment registry ([`experiment`]) and report emission ([`report`]),
//!   which drive the two-sided equivalence certifications from the CLI.
//!
//! Everything is a pure function of immutable inputs. With the default
//! `parallel` feature the hot loops (Monte Carlo blocks, sample × t grids)
//! run on rayon; without it the same code paths run sequentially.

mod error;
mod par;
mod search;
mod sum;

mod concave;
mod dist;
mod seq;
mod step;

pub mod experiment;
pub mod interp;
pub mod kfunc;
pub mod norms;
pub mod rademacher;
pub mod report;

pub use concave::{ConcaveFn, FnDomain};
pub use dist::Distribution;
pub use error::{Error, Result};
pub use seq::Sequence;
pub use step::{Domain, StepFunction};
