//! Colour plans: which edge types each partition uses, grouped so every
//! colour's per-part size sums come out equal.
//!
//! A plan fixes types only; concrete classes are chosen later by the
//! realizer. Supply accounting against the number of edges of each type is
//! asserted here, mirroring the counting arguments that make the
//! constructions feasible.

use super::triples::comp_triples;
use super::{type_supply, ConstructError};
use crate::bounds::{alt_construction_p, main_construction_p, Params};
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

/// Sizes per part of the halved (or multi-part) ground set.
pub type EdgeType = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotGroup {
    Single(EdgeType),
    Pair(EdgeType, EdgeType),
    Triple(EdgeType, EdgeType, EdgeType),
}

impl SlotGroup {
    pub fn types(&self) -> Vec<&EdgeType> {
        match self {
            SlotGroup::Single(a) => vec![a],
            SlotGroup::Pair(a, b) => vec![a, b],
            SlotGroup::Triple(a, b, c) => vec![a, b, c],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanCase {
    /// k even: mirror pairs only.
    EvenK,
    /// k odd, r != k-1: one balanced triple of c-sets per colour.
    OddKTriples,
    /// k odd, r = k-1: one central c-set per colour.
    OddKCentral,
    /// ck odd, r != 1: one balanced triple of (c+1)-sets per colour.
    AltTriples,
    /// ck odd, r = 1: one central (c+1)-set per colour.
    AltCentral,
}

/// Per-colour slot groups plus the global type consumption ledger.
#[derive(Debug, Clone)]
pub struct ColourPlan {
    pub params: Params,
    pub u: u64,
    pub case: PlanCase,
    pub part_sizes: Vec<usize>,
    pub colours: Vec<Vec<SlotGroup>>,
    pub usage: BTreeMap<EdgeType, u128>,
}

impl ColourPlan {
    pub fn partitions(&self) -> usize {
        self.colours.len()
    }

    /// Flat slot types per colour, in deterministic order.
    pub fn slot_types(&self) -> Vec<Vec<EdgeType>> {
        self.colours
            .iter()
            .map(|groups| {
                groups
                    .iter()
                    .flat_map(|g| g.types().into_iter().cloned())
                    .collect()
            })
            .collect()
    }
}

/// Refuse to materialize absurdly large systems.
const MAX_COLOURS: u128 = 1 << 20;

fn to_colour_count(p: &crate::exactmath::BigNat) -> Result<usize, ConstructError> {
    let v = p.to_u128().unwrap_or(u128::MAX);
    if v > MAX_COLOURS {
        return Err(ConstructError::NotApplicable(format!(
            "system with {v} partitions is too large to materialize (cap {MAX_COLOURS})"
        )));
    }
    Ok(v as usize)
}

/// One mirror or central pair kind with its pair supply.
#[derive(Debug, Clone)]
struct PairKind {
    group: SlotGroup,
    usage: Vec<(EdgeType, u128)>,
    available: u128,
}

fn mirror_pair(i: usize, total: usize, avail: u128) -> PairKind {
    let a: EdgeType = vec![i, total - i];
    let b: EdgeType = vec![total - i, i];
    PairKind {
        group: SlotGroup::Pair(a.clone(), b.clone()),
        usage: vec![(a, 1), (b, 1)],
        available: avail,
    }
}

fn central_pair(half: usize, avail_edges: u128) -> PairKind {
    let t: EdgeType = vec![half, half];
    PairKind {
        group: SlotGroup::Pair(t.clone(), t.clone()),
        usage: vec![(t, 2)],
        // One edge stays unused when the family has odd size.
        available: avail_edges / 2,
    }
}

/// Fills `demand` pairs from the kinds, largest remaining supply first, and
/// hands them out to colours round-robin so each colour gets `per_colour`.
fn allocate_pairs(
    kinds: &mut Vec<PairKind>,
    demand: u128,
    per_colour: usize,
    colours: &mut [Vec<SlotGroup>],
    usage: &mut BTreeMap<EdgeType, u128>,
    what: &str,
) -> Result<(), ConstructError> {
    let available: u128 = kinds.iter().map(|k| k.available).sum();
    if available < demand {
        return Err(ConstructError::Realization(format!(
            "{what}: need {demand} pairs, only {available} available"
        )));
    }
    kinds.sort_by(|a, b| b.available.cmp(&a.available));
    let mut flat: Vec<usize> = Vec::with_capacity(demand as usize);
    let mut left = demand;
    for (ki, kind) in kinds.iter().enumerate() {
        let take = kind.available.min(left);
        for _ in 0..take {
            flat.push(ki);
        }
        left -= take;
        if left == 0 {
            break;
        }
    }
    debug_assert_eq!(left, 0);
    let mut cursor = 0usize;
    for colour in colours.iter_mut() {
        for _ in 0..per_colour {
            let kind = &kinds[flat[cursor]];
            colour.push(kind.group.clone());
            for (ty, cnt) in &kind.usage {
                *usage.entry(ty.clone()).or_insert(0) += cnt;
            }
            cursor += 1;
        }
    }
    debug_assert_eq!(cursor, flat.len());
    Ok(())
}

fn add_usage(usage: &mut BTreeMap<EdgeType, u128>, ty: &EdgeType, cnt: u128) {
    *usage.entry(ty.clone()).or_insert(0) += cnt;
}

/// Converts signed triple types over the `t`-centred layer into edge types.
fn signed_to_edge(t: usize, x: i64) -> EdgeType {
    vec![(t as i64 + x) as usize, (t as i64 - x) as usize]
}

fn check_plan(plan: &ColourPlan) -> Result<(), ConstructError> {
    let p = plan.params;
    let m = plan.part_sizes[0];
    for (ci, colour) in plan.colours.iter().enumerate() {
        let mut sums = vec![0usize; plan.part_sizes.len()];
        let mut small = 0u64;
        let mut large = 0u64;
        let mut slots = 0u64;
        for group in colour {
            for ty in group.types() {
                slots += 1;
                let total: usize = ty.iter().sum();
                if total as u64 == p.c {
                    small += 1;
                } else if total as u64 == p.c + 1 {
                    large += 1;
                }
                for (s, t) in sums.iter_mut().zip(ty) {
                    *s += t;
                }
            }
        }
        if slots != p.k || small != p.k - p.r || large != p.r || sums.iter().any(|&s| s != m) {
            return Err(ConstructError::Realization(format!(
                "colour {ci} is malformed: {slots} slots, {small} of size c, {large} of size c+1, part sums {sums:?}"
            )));
        }
    }
    for (ty, used) in &plan.usage {
        let supply = type_supply(&plan.part_sizes, ty);
        if *used > supply {
            return Err(ConstructError::SupplyExhausted {
                ty: ty.clone(),
                needed: *used,
                available: supply,
            });
        }
    }
    Ok(())
}

/// Colour plan for the even-`ck` construction at split `u`.
pub fn plan_main(params: Params, u: u64) -> Result<ColourPlan, ConstructError> {
    let p_value = main_construction_p(params, u)
        .map_err(|e| ConstructError::NotApplicable(e.to_string()))?;
    let p = to_colour_count(&p_value)?;
    let m = params.half() as usize;
    let c = params.c as usize;
    let u = u as usize;
    let (k, r) = (params.k as usize, params.r as usize);
    let part_sizes = vec![m, m];
    let mut colours: Vec<Vec<SlotGroup>> = vec![Vec::new(); p];
    let mut usage: BTreeMap<EdgeType, u128> = BTreeMap::new();

    let supply2 = |i: usize, j: usize| type_supply(&part_sizes, &[i, j]);

    let case = if k % 2 == 0 {
        PlanCase::EvenK
    } else if r != k - 1 {
        PlanCase::OddKTriples
    } else {
        PlanCase::OddKCentral
    };

    // Classes of size c.
    match case {
        PlanCase::EvenK => {
            let mut kinds: Vec<PairKind> = Vec::new();
            for i in u..(c + 1) / 2 {
                kinds.push(mirror_pair(i, c, supply2(i, c - i)));
            }
            if c % 2 == 0 {
                kinds.push(central_pair(c / 2, supply2(c / 2, c / 2)));
            }
            let demand = ((k - r) / 2) as u128 * p as u128;
            allocate_pairs(&mut kinds, demand, (k - r) / 2, &mut colours, &mut usage, "c-set pairs")?;
        }
        PlanCase::OddKTriples => {
            // One balanced triple of c-sets per colour, then mirror pairs
            // from what is left.
            let t = c / 2;
            let mut counts = vec![0u128; t + 1];
            for (i, slot) in counts.iter_mut().enumerate() {
                if i <= t - u {
                    *slot = supply2(t - i, t + i);
                }
            }
            let triples = comp_triples(t, &counts, p as u128)?;
            let mut used_signed = vec![0u128; t + 1];
            for (colour, triple) in colours.iter_mut().zip(&triples) {
                let types: Vec<EdgeType> =
                    triple.iter().map(|&x| signed_to_edge(t, x)).collect();
                for ty in &types {
                    add_usage(&mut usage, ty, 1);
                }
                for &x in triple {
                    used_signed[x.unsigned_abs() as usize] += 1;
                }
                colour.push(SlotGroup::Triple(
                    types[0].clone(),
                    types[1].clone(),
                    types[2].clone(),
                ));
            }
            // Signed usage is symmetric, so the leftover per mirror kind is
            // well defined. Zero-type usage counts both sides at once.
            let mut kinds: Vec<PairKind> = Vec::new();
            for i in 1..=t - u {
                let left = counts[i] - used_signed[i] / 2;
                kinds.push(mirror_pair(t - i, c, left));
            }
            let left0 = counts[0] - used_signed[0];
            kinds.push(central_pair(t, left0));
            let demand = ((k - r - 3) / 2) as u128 * p as u128;
            allocate_pairs(&mut kinds, demand, (k - r - 3) / 2, &mut colours, &mut usage, "c-set pairs")?;
        }
        PlanCase::OddKCentral => {
            let t: EdgeType = vec![c / 2, c / 2];
            let avail = supply2(c / 2, c / 2);
            if (p as u128) > avail {
                return Err(ConstructError::SupplyExhausted {
                    ty: t,
                    needed: p as u128,
                    available: avail,
                });
            }
            for colour in colours.iter_mut() {
                colour.push(SlotGroup::Single(t.clone()));
            }
            add_usage(&mut usage, &t, p as u128);
        }
        _ => unreachable!(),
    }

    // Classes of size c + 1: mirror pairs with the small side below u.
    let mut kinds: Vec<PairKind> = Vec::new();
    for i in 0..u {
        kinds.push(mirror_pair(i, c + 1, supply2(i, c + 1 - i)));
    }
    let demand = (r / 2) as u128 * p as u128;
    allocate_pairs(&mut kinds, demand, r / 2, &mut colours, &mut usage, "(c+1)-set pairs")?;

    let plan = ColourPlan {
        params,
        u: u as u64,
        case,
        part_sizes,
        colours,
        usage,
    };
    check_plan(&plan)?;
    Ok(plan)
}

/// Colour plan for the odd-`ck` construction at split `u`.
pub fn plan_alt(params: Params, u: u64) -> Result<ColourPlan, ConstructError> {
    let p_value = alt_construction_p(params, u)
        .map_err(|e| ConstructError::NotApplicable(e.to_string()))?;
    let p = to_colour_count(&p_value)?;
    let m = params.half() as usize;
    let c = params.c as usize;
    let u = u as usize;
    let (k, r) = (params.k as usize, params.r as usize);
    let part_sizes = vec![m, m];
    let mut colours: Vec<Vec<SlotGroup>> = vec![Vec::new(); p];
    let mut usage: BTreeMap<EdgeType, u128> = BTreeMap::new();

    let supply2 = |i: usize, j: usize| type_supply(&part_sizes, &[i, j]);
    let case = if r == 1 {
        PlanCase::AltCentral
    } else {
        PlanCase::AltTriples
    };

    // Classes of size c: mirror pairs with the large side above u.
    let mut kinds: Vec<PairKind> = Vec::new();
    for i in (u + 1)..=c {
        kinds.push(mirror_pair(i, c, supply2(i, c - i)));
    }
    let demand = ((k - r) / 2) as u128 * p as u128;
    allocate_pairs(&mut kinds, demand, (k - r) / 2, &mut colours, &mut usage, "c-set pairs")?;

    // Classes of size c + 1.
    match case {
        PlanCase::AltCentral => {
            let t: EdgeType = vec![(c + 1) / 2, (c + 1) / 2];
            let avail = supply2((c + 1) / 2, (c + 1) / 2);
            if (p as u128) > avail {
                return Err(ConstructError::SupplyExhausted {
                    ty: t,
                    needed: p as u128,
                    available: avail,
                });
            }
            for colour in colours.iter_mut() {
                colour.push(SlotGroup::Single(t.clone()));
            }
            add_usage(&mut usage, &t, p as u128);
        }
        PlanCase::AltTriples => {
            let t = (c + 1) / 2;
            let mut counts = vec![0u128; t + 1];
            for (i, slot) in counts.iter_mut().enumerate() {
                if i <= u - t {
                    *slot = supply2(t - i, t + i);
                }
            }
            let triples = comp_triples(t, &counts, p as u128)?;
            let mut used_signed = vec![0u128; t + 1];
            for (colour, triple) in colours.iter_mut().zip(&triples) {
                let types: Vec<EdgeType> =
                    triple.iter().map(|&x| signed_to_edge(t, x)).collect();
                for ty in &types {
                    add_usage(&mut usage, ty, 1);
                }
                for &x in triple {
                    used_signed[x.unsigned_abs() as usize] += 1;
                }
                colour.push(SlotGroup::Triple(
                    types[0].clone(),
                    types[1].clone(),
                    types[2].clone(),
                ));
            }
            let mut kinds: Vec<PairKind> = Vec::new();
            for i in 1..=u - t {
                let left = counts[i] - used_signed[i] / 2;
                kinds.push(mirror_pair(t - i, c + 1, left));
            }
            let left0 = counts[0] - used_signed[0];
            kinds.push(central_pair(t, left0));
            let demand = ((r - 3) / 2) as u128 * p as u128;
            allocate_pairs(&mut kinds, demand, (r - 3) / 2, &mut colours, &mut usage, "(c+1)-set pairs")?;
        }
        _ => unreachable!(),
    }

    let plan = ColourPlan {
        params,
        u: u as u64,
        case,
        part_sizes,
        colours,
        usage,
    };
    check_plan(&plan)?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, k: u64) -> Params {
        Params::new(n, k).unwrap()
    }

    #[test]
    fn plan_main_small_even() {
        let plan = plan_main(params(10, 4), 1).unwrap();
        assert_eq!(plan.partitions(), 10);
        assert_eq!(plan.case, PlanCase::EvenK);
        // Each colour: one (1,1)+(1,1) pair and one (0,3)/(3,0) pair.
        for colour in &plan.colours {
            assert_eq!(colour.len(), 2);
        }
        assert_eq!(plan.usage[&vec![1usize, 1]], 20);
        assert_eq!(plan.usage[&vec![0usize, 3]], 10);
        assert_eq!(plan.usage[&vec![3usize, 0]], 10);
    }

    #[test]
    fn plan_main_tight_supply() {
        let plan = plan_main(params(18, 4), 2).unwrap();
        assert_eq!(plan.partitions(), 648);
        // The central c-sets are consumed exactly.
        assert_eq!(plan.usage[&vec![2usize, 2]], 1296);
        assert_eq!(type_supply(&plan.part_sizes, &[2, 2]), 1296);
        let b_total: u128 = plan
            .usage
            .iter()
            .filter(|(ty, _)| ty.iter().sum::<usize>() == 5)
            .map(|(_, v)| v)
            .sum();
        assert_eq!(b_total, 1296);
    }

    #[test]
    fn plan_main_triples_case() {
        let plan = plan_main(params(16, 7), 1).unwrap();
        assert_eq!(plan.case, PlanCase::OddKTriples);
        assert_eq!(plan.partitions(), 12);
        for colour in &plan.colours {
            assert!(matches!(colour[0], SlotGroup::Triple(..)));
        }
    }

    #[test]
    fn plan_main_central_case() {
        let plan = plan_main(params(14, 5), 1).unwrap();
        assert_eq!(plan.case, PlanCase::OddKCentral);
        assert_eq!(plan.partitions(), 17);
    }

    #[test]
    fn plan_alt_cases() {
        let plan = plan_alt(params(26, 7), 2).unwrap();
        assert_eq!(plan.case, PlanCase::AltTriples);
        assert_eq!(plan.partitions(), 286);
        let plan = plan_alt(params(16, 3), 3).unwrap();
        assert_eq!(plan.case, PlanCase::AltCentral);
        assert_eq!(plan.partitions(), 616);
        assert!(plan_alt(params(20, 7), 2).is_err()); // ck even
    }

    #[test]
    fn per_colour_sums_check_rejects_corruption() {
        let mut plan = plan_main(params(10, 4), 1).unwrap();
        if let SlotGroup::Pair(a, _) = &mut plan.colours[0][0] {
            a[0] += 1;
        }
        assert!(check_plan(&plan).is_err());
    }
}
