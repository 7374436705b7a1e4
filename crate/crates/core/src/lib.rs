//! Refutation engine for the Fermat equation `x^p + y^p = z^p`.
//!
//! * [`arith`]: exact integer primitives.
//! * [`identities`]: the factorization and discriminant identities, each
//!   evaluated exactly.
//! * [`filters`]: cheap necessary-condition filters that emit
//!   independently re-checkable certificates.
//! * [`search`]: exhaustive sweeps with an exact oracle behind the filters.
//! * [`selftest`] and [`bench`]: the workflows behind the CLI's `selftest`
//!   and `bench` commands.

pub mod arith;
pub mod bench;
pub mod cli;
pub mod filters;
pub mod identities;
pub mod search;
pub mod selftest;
