//! Algebras of finite partial functions.
//!
//! The crate has two halves that mirror each other:
//!
//! * a concrete half ([`pfun`]) where elements are honest partial functions
//!   between finite carriers and every operation (domain restriction, minus,
//!   override, update, intersection, difference, composition, domain,
//!   generalised comparison) is computed pointwise, and
//! * an abstract half ([`algebra`], [`syntax`]) where elements are rows of
//!   finite operation tables and laws — equations and Horn quasiequations —
//!   are checked by exhaustive evaluation.
//!
//! On top of those sit [`filters`] (quasiorders, filters and the congruences
//! they induce), [`repr`] (building an embedding of an abstract algebra into
//! concrete partial functions from a separating set of filters and verifying
//! it symbol by symbol), [`search`] (a deterministic backtracking model
//! finder for small counter-models and irredundance certificates) and
//! [`catalog`] (the bundled axiom sets, identity suites and worked examples,
//! each gated against the concrete model before use).
//!
//! The crate is `no_std` (it allocates but never touches the OS); all values
//! are immutable after construction and every operation is a pure function,
//! so everything here may be shared freely across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod catalog;
pub mod filters;
pub mod pfun;
pub mod repr;
pub mod search;
pub mod syntax;

pub use algebra::{CongruencePartition, FinAlgebra};
pub use pfun::{FinSet, PFun};
pub use syntax::{Law, Signature, Sym, Term};
