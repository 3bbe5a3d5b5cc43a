//! Explicit builders for Sperner partition systems.
//!
//! The halved-ground-set builders work in two stages. A [`ColourPlan`] fixes,
//! for every partition (colour), the multiset of edge types it uses, grouped
//! into the compatible pairs and triples that make the per-part degree sums
//! come out right. [`realize`] then turns the plan into concrete classes by
//! an exact per-part redistribution, and the result is gated by the verifier
//! before it is returned.

mod brute;
mod family;
mod plan;
mod product;
mod realize;
pub mod triples;

pub use brute::{brute_force_sp, probe, BRUTE_DEFAULT_CAP};
pub use family::build_3k6;
pub use plan::{plan_alt, plan_main, ColourPlan, PlanCase, SlotGroup};
pub use product::product_build;
pub use realize::realize;
pub use triples::comp_triples;

use crate::exactmath::binom;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConstructError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("balanced triples: {0}")]
    Triples(#[from] triples::TriplesError),
    #[error("supply exhausted for type {ty:?} (needed {needed}, available {available})")]
    SupplyExhausted {
        ty: Vec<usize>,
        needed: u128,
        available: u128,
    },
    #[error("realization failed: {0}")]
    Realization(String),
    #[error("built system failed verification: {0}")]
    VerificationFailed(String),
    #[error("brute-force cap exceeded: n = {n} > {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("k mismatch: {0} vs {1}")]
    KMismatch(usize, usize),
}

/// A collection of partitions of `{0, .., n-1}`, each into `k` nonempty
/// classes. Classes are sorted element lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSystem {
    pub n: usize,
    pub k: usize,
    pub partitions: Vec<Vec<Vec<u32>>>,
}

impl PartitionSystem {
    /// The one-partition system on `n` elements: `k - 1` singletons and one
    /// class with everything else.
    pub fn trivial(n: usize, k: usize) -> Self {
        assert!(k >= 1 && n >= k);
        let mut classes: Vec<Vec<u32>> = (0..k as u32 - 1).map(|e| vec![e]).collect();
        classes.push((k as u32 - 1..n as u32).collect());
        PartitionSystem {
            n,
            k,
            partitions: vec![classes],
        }
    }
}

/// Halved ground set: `X1 = {0, .., n/2 - 1}`, `X2 = {n/2, .., n - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSplit {
    pub n: usize,
}

impl GroundSplit {
    pub fn new(n: usize) -> Result<Self, ConstructError> {
        if n % 2 != 0 {
            return Err(ConstructError::NotApplicable(format!(
                "ground split needs even n, got {n}"
            )));
        }
        Ok(GroundSplit { n })
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }
}

/// Number of concrete edges of a part-size type, as an exact count clamped
/// into `u128`.
pub(crate) fn type_supply(part_sizes: &[usize], ty: &[usize]) -> u128 {
    let mut acc = num_bigint::BigUint::from(1u32);
    for (m, s) in part_sizes.iter().zip(ty) {
        acc *= binom(*m as u64, *s as i64);
    }
    acc.to_u128().unwrap_or(u128::MAX)
}
