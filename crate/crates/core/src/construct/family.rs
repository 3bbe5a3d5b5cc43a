//! The `n = 3k - 6` family: systems meeting the implicit upper bound.
//!
//! The ground set is split into three parts of size `k - 2`. Each partition
//! uses six cross pairs (2-sets meeting two different parts) and `k - 6`
//! 3-sets inside single parts; the mix of cross-pair families depends on
//! `k mod 6` so the per-part degree sums land on `k - 2` everywhere.

use super::realize::{assemble, realize_problem, RealizeProblem};
use super::{type_supply, ConstructError, PartitionSystem};
use crate::bounds::Params;
use crate::exactmath::binom;
use crate::verify::{verify_almost_uniform, verify_system};
use num_traits::ToPrimitive;

/// Builds a verified system on `3k - 6` points with `floor((k-2)^2 / 2)`
/// partitions. Needs `k >= 11` and `k != 4 (mod 6)`.
pub fn build_3k6(k: u64, seed: u64) -> Result<PartitionSystem, ConstructError> {
    if k < 11 || k % 6 == 4 {
        return Err(ConstructError::NotApplicable(format!(
            "three-part family needs k >= 11 and k != 4 mod 6, got k = {k}"
        )));
    }
    let n = 3 * k - 6;
    let m = (k - 2) as usize;
    let p = ((k - 2) * (k - 2) / 2) as usize;
    let k = k as usize;

    // Edge types over the three parts: cross pairs avoiding part i, and
    // 3-sets inside part i.
    let cross = |i: usize| -> Vec<usize> {
        let mut t = vec![1usize, 1, 1];
        t[i] = 0;
        t
    };
    let inner = |i: usize| -> Vec<usize> {
        let mut t = vec![0usize, 0, 0];
        t[i] = 3;
        t
    };

    // Colour-class sizes: the colour set splits in three when the cross
    // profile is asymmetric.
    let thirds: [usize; 3] = if k % 6 == 5 {
        [(p + 2) / 3, (p - 1) / 3, (p - 1) / 3]
    } else {
        [p / 3, p / 3, p - 2 * (p / 3)]
    };
    let colour_family = |ci: usize| -> usize {
        if ci < thirds[0] {
            0
        } else if ci < thirds[0] + thirds[1] {
            1
        } else {
            2
        }
    };

    let profile = |fam: usize| -> ([u64; 3], [u64; 3]) {
        let k = k as u64;
        match k % 3 {
            0 => ([2, 2, 2], [(k - 6) / 3; 3]),
            1 => {
                let mut a = [1u64; 3];
                a[fam] = 4;
                let mut b = [(k - 7) / 3; 3];
                b[fam] = (k - 4) / 3;
                (a, b)
            }
            _ => {
                let mut a = [3u64; 3];
                a[fam] = 0;
                let mut b = [(k - 5) / 3; 3];
                b[fam] = (k - 8) / 3;
                (a, b)
            }
        }
    };

    let mut colours: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p);
    let mut cross_usage = [0u128; 3];
    let mut inner_usage = [0u128; 3];
    for ci in 0..p {
        let (a, b) = profile(colour_family(ci));
        let mut slots: Vec<Vec<usize>> = Vec::with_capacity(k);
        for i in 0..3 {
            for _ in 0..a[i] {
                slots.push(cross(i));
            }
            cross_usage[i] += a[i] as u128;
            for _ in 0..b[i] {
                slots.push(inner(i));
            }
            inner_usage[i] += b[i] as u128;
        }
        debug_assert_eq!(slots.len(), k);
        for part in 0..3 {
            let sum: usize = slots.iter().map(|t| t[part]).sum();
            debug_assert_eq!(sum, m);
        }
        colours.push(slots);
    }
    let part_sizes = vec![m, m, m];
    for i in 0..3 {
        let cs = type_supply(&part_sizes, &cross(i));
        let is = type_supply(&part_sizes, &inner(i));
        if cross_usage[i] > cs {
            return Err(ConstructError::SupplyExhausted {
                ty: cross(i),
                needed: cross_usage[i],
                available: cs,
            });
        }
        if inner_usage[i] > is {
            return Err(ConstructError::SupplyExhausted {
                ty: inner(i),
                needed: inner_usage[i],
                available: is,
            });
        }
    }
    debug_assert_eq!(
        binom((k as u64) - 2, 3).to_u128().unwrap(),
        type_supply(&part_sizes, &inner(0))
    );

    let problem = RealizeProblem {
        part_sizes,
        colours,
    };
    let slots = realize_problem(&problem, seed)?;
    let sys = assemble(&problem, &slots, n as usize, k);
    let report = verify_system(&sys);
    if !report.pass {
        return Err(ConstructError::VerificationFailed(format!(
            "{:?}",
            report.failure
        )));
    }
    let params = Params::new(n, k as u64).expect("n >= k here");
    match verify_almost_uniform(&sys, params) {
        Ok(true) => Ok(sys),
        Ok(false) => Err(ConstructError::VerificationFailed(
            "family system is not almost uniform".into(),
        )),
        Err(e) => Err(ConstructError::VerificationFailed(e.to_string())),
    }
}
