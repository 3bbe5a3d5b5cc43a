//! Exact bounds, explicit constructions, and independent verification for
//! Sperner partition systems.
//!
//! A Sperner partition system on an `n`-set is a collection of partitions,
//! each into `k` nonempty classes, such that no class of any partition is a
//! subset of a class of any other partition. `SP(n, k)` denotes the maximum
//! number of partitions such a system can have.
//!
//! The crate is organised as:
//!
//! * [`exactmath`] — big integers/rationals, generalized binomials, and the
//!   certified Lovász shadow lower bound `LL_c`;
//! * [`bounds`] — all closed-form bounds, the implicit upper bound decided by
//!   binary search, and a best-known aggregator with provenance;
//! * [`construct`] — explicit system builders (halved ground set, three-part
//!   family, products) and a brute-force oracle for tiny instances;
//! * [`verify`] — independent checkers: system validity, almost uniformity,
//!   shadows, and the detecting-array view;
//! * [`cli`] — the command-line surface and its file formats.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod exactmath;
pub mod verify;
