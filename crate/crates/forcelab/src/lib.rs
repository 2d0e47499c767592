//! A laboratory for forcing over finite quasi-orders.
//!
//! Everything here is exhaustively finite: forcing notions are finite
//! quasi-orders, names are ramified P-names over those orders, and the
//! candidate values are hereditarily finite sets. Because generic filters
//! over a finite order form a small, fully enumerable family, the usual
//! forcing-theoretic notions (density, genericity, the forcing relation)
//! can be evaluated outright and cross-checked against brute force.
//!
//! The centerpiece is a greatest-fixpoint construction over
//! "superconditions" — pairs of a forcing condition and a partial
//! assignment from the hereditary sub-names of `t` into a transitive set
//! `X` — that decides whether `X` is the value `t[G]` of some generic
//! filter `G`, and when it is, builds a witnessing filter step by step.
//!
//! Module map:
//! - [`hf`]: hereditarily finite sets in canonical form
//! - [`order`]: finite quasi-orders, filters, density, generic filters
//! - [`names`]: ramified P-names and their interpretation
//! - [`forcing`]: the forcing relation, semantic and syntactic
//! - [`sigma`]: the fixpoint construction, filter synthesis, the uniform
//!   bound, and classification surveys
//! - [`oracle`]: independent brute-force recomputations used as checks
//! - [`verify`]: a per-instance battery tying engine and oracle together
//! - [`spec_file`]: a small text format describing problem instances
//! - [`cli`]: the command-line front end (also driven by the `forcelab`
//!   binary)

pub mod cli;
pub mod forcing;
pub mod hf;
pub mod names;
pub mod oracle;
pub mod order;
pub mod sigma;
pub mod spec_file;
pub mod verify;

pub use forcing::ForcingContext;
pub use hf::{HfError, HfParseError, HfSet};
pub use names::{NameError, PName};
pub use order::{Filter, OrderError, Quasiorder};
pub use sigma::{Caps, SigmaError, SigmaInstance, StepVariant, Supercondition, Verdict};
pub use spec_file::{parse_spec, ForcingSpec, SpecError};
