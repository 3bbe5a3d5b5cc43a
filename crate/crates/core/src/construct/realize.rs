//! Turning a colour plan into concrete classes.
//!
//! Stage one hands every slot a distinct concrete edge of its type,
//! disregarding disjointness. Stage two fixes one part of the ground set at
//! a time: the part's elements are reassigned so that every colour's slots
//! partition the part, while each slot keeps its footprint on all other
//! parts. Distinctness is preserved throughout because slots sharing the
//! same frozen footprint and size are forced into pairwise distinct subsets
//! by per-bucket capacities.
//!
//! Elements are placed one by one. A bucket is a set of interchangeable
//! slots (same frozen footprint, same partial subset, same remaining need
//! `r`); with `rem` elements left a bucket of `q` slots admits at most
//! `C(rem, r)` distinct completions, and the per-round bounds
//! `q - C(rem-1, r) <= take <= C(rem-1, r-1)` keep that invariant. A
//! proportional fractional assignment meets those bounds, so an integral one
//! exists; a cheap greedy pass finds it in almost every round and a small
//! exact flow covers the rest.

use super::{ColourPlan, ConstructError, GroundSplit, PartitionSystem};
use crate::verify::{verify_almost_uniform, verify_system};
use std::collections::HashMap;

/// Part-structured realization input: per colour, per slot, sizes per part.
pub struct RealizeProblem {
    pub part_sizes: Vec<usize>,
    pub colours: Vec<Vec<Vec<usize>>>,
}

/// Pascal triangle in u128, clamped; `m <= 63` keeps everything exact.
struct Binoms {
    rows: Vec<Vec<u128>>,
}

impl Binoms {
    fn new(m: usize) -> Self {
        let mut rows = vec![vec![1u128]];
        for i in 1..=m {
            let prev = &rows[i - 1];
            let mut row = vec![1u128; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1].saturating_add(prev[j]);
            }
            rows.push(row);
        }
        Binoms { rows }
    }

    fn get(&self, m: usize, k: usize) -> u128 {
        if k > m {
            0
        } else {
            self.rows[m][k]
        }
    }
}

/// Lexicographic unranking of a `k`-subset of `{0..m-1}` into a bitmask.
fn unrank_subset(bin: &Binoms, m: usize, k: usize, mut rank: u128) -> u64 {
    let mut mask = 0u64;
    let mut need = k;
    for e in 0..m {
        if need == 0 {
            break;
        }
        let with_e = bin.get(m - e - 1, need - 1);
        if rank < with_e {
            mask |= 1u64 << e;
            need -= 1;
        } else {
            rank -= with_e;
        }
    }
    debug_assert_eq!(need, 0);
    mask
}

pub(crate) struct Slot {
    pub(crate) colour: u32,
    pub(crate) masks: Vec<u64>,
}

/// Stage one: distinct concrete edges per type via product unranking.
fn initial_edges(
    problem: &RealizeProblem,
    seed: u64,
) -> Result<Vec<Slot>, ConstructError> {
    let max_m = *problem.part_sizes.iter().max().unwrap();
    if max_m > 63 {
        return Err(ConstructError::NotApplicable(format!(
            "parts of size {max_m} exceed the realizer's 63-element limit"
        )));
    }
    let bin = Binoms::new(max_m);
    let mut slots: Vec<Slot> = Vec::new();
    let mut by_type: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (ci, colour) in problem.colours.iter().enumerate() {
        for ty in colour {
            let id = slots.len();
            slots.push(Slot {
                colour: ci as u32,
                masks: vec![0; problem.part_sizes.len()],
            });
            by_type.entry(ty.clone()).or_default().push(id);
        }
    }
    let mut types: Vec<&Vec<usize>> = by_type.keys().collect();
    types.sort();
    for ty in types {
        let ids = &by_type[ty];
        let radices: Vec<u128> = problem
            .part_sizes
            .iter()
            .zip(ty)
            .map(|(&m, &s)| bin.get(m, s))
            .collect();
        let supply: u128 = radices.iter().product();
        if (ids.len() as u128) > supply {
            return Err(ConstructError::SupplyExhausted {
                ty: ty.clone(),
                needed: ids.len() as u128,
                available: supply,
            });
        }
        let offset = (seed as u128) % supply;
        for (w, &id) in ids.iter().enumerate() {
            let mut rank = (offset + w as u128) % supply;
            for (pi, radix) in radices.iter().enumerate().rev() {
                let digit = rank % radix;
                rank /= radix;
                slots[id].masks[pi] =
                    unrank_subset(&bin, problem.part_sizes[pi], ty[pi], digit);
            }
        }
    }
    Ok(slots)
}

/// Integral flow with lower bounds for one stubborn round.
mod flow {
    pub struct Dinic {
        pub head: Vec<Vec<usize>>,
        pub to: Vec<u32>,
        pub cap: Vec<i64>,
        n: usize,
    }

    impl Dinic {
        pub fn new(n: usize) -> Self {
            Dinic {
                head: vec![Vec::new(); n],
                to: Vec::new(),
                cap: Vec::new(),
                n,
            }
        }

        pub fn add(&mut self, u: usize, v: usize, c: i64) -> usize {
            let id = self.to.len();
            self.head[u].push(id);
            self.to.push(v as u32);
            self.cap.push(c);
            self.head[v].push(id + 1);
            self.to.push(u as u32);
            self.cap.push(0);
            id
        }

        pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
            let mut total = 0i64;
            loop {
                let mut level = vec![-1i32; self.n];
                let mut queue = std::collections::VecDeque::new();
                level[s] = 0;
                queue.push_back(s);
                while let Some(u) = queue.pop_front() {
                    for &e in &self.head[u] {
                        let v = self.to[e] as usize;
                        if self.cap[e] > 0 && level[v] < 0 {
                            level[v] = level[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                if level[t] < 0 {
                    return total;
                }
                let mut iter = vec![0usize; self.n];
                loop {
                    let f = self.dfs(s, t, i64::MAX, &level, &mut iter);
                    if f == 0 {
                        break;
                    }
                    total += f;
                }
            }
        }

        fn dfs(&mut self, u: usize, t: usize, limit: i64, level: &[i32], iter: &mut [usize]) -> i64 {
            if u == t {
                return limit;
            }
            while iter[u] < self.head[u].len() {
                let e = self.head[u][iter[u]];
                let v = self.to[e] as usize;
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    let d = self.dfs(v, t, limit.min(self.cap[e]), level, iter);
                    if d > 0 {
                        self.cap[e] -= d;
                        self.cap[e ^ 1] += d;
                        return d;
                    }
                }
                iter[u] += 1;
            }
            0
        }
    }
}

struct Bucket {
    r: usize,
    slots_total: u32,
    take_cap: u128,
    take_low: u128,
    taken: u32,
}

/// Reassigns part `part` of every slot; other parts stay frozen.
fn redistribute_part(
    slots: &mut [Slot],
    colours: usize,
    part: usize,
    part_size: usize,
    target: &[usize],
    bin: &Binoms,
) -> Result<(), ConstructError> {
    let m = part_size;
    let mut partial: Vec<u64> = vec![0; slots.len()];
    let mut need: Vec<usize> = target.to_vec();

    // Frozen-footprint group of each slot (exact, interned).
    let mut group_ids: HashMap<Vec<u64>, u32> = HashMap::new();
    let mut group: Vec<u32> = Vec::with_capacity(slots.len());
    for (si, slot) in slots.iter().enumerate() {
        let mut key: Vec<u64> = Vec::with_capacity(slot.masks.len());
        for (pi, &mask) in slot.masks.iter().enumerate() {
            if pi != part {
                key.push(mask);
            }
        }
        key.push(target[si] as u64);
        let next = group_ids.len() as u32;
        group.push(*group_ids.entry(key).or_insert(next));
    }

    // Slot ids per colour, in id order.
    let mut colour_slots: Vec<Vec<u32>> = vec![Vec::new(); colours];
    for (si, slot) in slots.iter().enumerate() {
        colour_slots[slot.colour as usize].push(si as u32);
    }

    for x in 0..m {
        let rem = (m - x) as u128;
        // Buckets for this round, keyed by (group, partial), created in
        // slot-id order so everything is deterministic.
        let mut bucket_ids: HashMap<(u32, u64), u32> = HashMap::new();
        let mut buckets: Vec<Bucket> = Vec::new();
        let mut slot_bucket: Vec<u32> = vec![u32::MAX; slots.len()];
        let mut bucket_colours: Vec<Vec<u32>> = Vec::new();
        for si in 0..slots.len() {
            if need[si] == 0 {
                continue;
            }
            let key = (group[si], partial[si]);
            let bid = *bucket_ids.entry(key).or_insert_with(|| {
                let id = buckets.len() as u32;
                let r = need[si];
                buckets.push(Bucket {
                    r,
                    slots_total: 0,
                    take_cap: bin.get((rem - 1) as usize, r - 1),
                    take_low: 0,
                    taken: 0,
                });
                bucket_colours.push(Vec::new());
                id
            });
            let b = &mut buckets[bid as usize];
            debug_assert_eq!(b.r, need[si]);
            b.slots_total += 1;
            slot_bucket[si] = bid;
            bucket_colours[bid as usize].push(slots[si].colour);
        }
        for b in buckets.iter_mut() {
            let stay_cap = bin.get((rem - 1) as usize, b.r);
            b.take_low = (b.slots_total as u128).saturating_sub(stay_cap);
            debug_assert!(
                b.slots_total as u128 <= bin.get(rem as usize, b.r),
                "bucket invariant broken"
            );
        }

        // Greedy: serve forced buckets first, then everyone by largest need.
        let mut assigned: Vec<Option<u32>> = vec![None; colours];
        let mut ok = true;
        for (bid, bucket) in buckets.iter_mut().enumerate() {
            if bucket.take_low == 0 {
                continue;
            }
            for &cid in &bucket_colours[bid] {
                if (bucket.taken as u128) >= bucket.take_low {
                    break;
                }
                if assigned[cid as usize].is_none() {
                    assigned[cid as usize] = Some(bid as u32);
                    bucket.taken += 1;
                }
            }
            if (bucket.taken as u128) < bucket.take_low {
                ok = false;
                break;
            }
        }
        if ok {
            for cid in 0..colours {
                if assigned[cid].is_some() {
                    continue;
                }
                let mut best: Option<(usize, u32)> = None;
                for &si in &colour_slots[cid] {
                    let bid = slot_bucket[si as usize];
                    if bid == u32::MAX {
                        continue;
                    }
                    let b = &buckets[bid as usize];
                    if (b.taken as u128) < b.take_cap {
                        let cand = (b.r, bid);
                        if best.map_or(true, |(r, _)| cand.0 > r) {
                            best = Some(cand);
                        }
                    }
                }
                match best {
                    Some((_, bid)) => {
                        assigned[cid] = Some(bid);
                        buckets[bid as usize].taken += 1;
                    }
                    None => {
                        if !colour_slots[cid].iter().any(|&si| need[si as usize] > 0) {
                            continue; // colour already complete
                        }
                        ok = false;
                        break;
                    }
                }
            }
        }

        if !ok {
            assigned = flow_round(colours, &colour_slots, &slot_bucket, &need, &buckets)?;
        }

        // Apply: per colour, the lowest eligible slot in the chosen bucket.
        for (cid, choice) in assigned.iter().enumerate() {
            let Some(bid) = choice else { continue };
            let si = colour_slots[cid]
                .iter()
                .copied()
                .find(|&si| slot_bucket[si as usize] == *bid && need[si as usize] > 0)
                .expect("assigned bucket has an eligible slot");
            partial[si as usize] |= 1u64 << x;
            need[si as usize] -= 1;
        }
    }

    debug_assert!(need.iter().all(|&r| r == 0));
    for (si, slot) in slots.iter_mut().enumerate() {
        slot.masks[part] = partial[si];
    }
    Ok(())
}

/// Exact round assignment via max-flow with lower bounds.
fn flow_round(
    colours: usize,
    colour_slots: &[Vec<u32>],
    slot_bucket: &[u32],
    need: &[usize],
    buckets: &[Bucket],
) -> Result<Vec<Option<u32>>, ConstructError> {
    use flow::Dinic;
    // Nodes: 0 = S, 1 = T, 2 = SS, 3 = TT, then colours, then buckets.
    let colour_node = |c: usize| 4 + c;
    let bucket_node = |b: usize| 4 + colours + b;
    let n = 4 + colours + buckets.len();
    let mut net = Dinic::new(n);
    let mut excess = vec![0i64; n];

    let mut active = vec![false; colours];
    let mut colour_arcs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); colours];
    for cid in 0..colours {
        let mut seen: Vec<u32> = Vec::new();
        for &si in &colour_slots[cid] {
            if need[si as usize] == 0 {
                continue;
            }
            active[cid] = true;
            let bid = slot_bucket[si as usize];
            if !seen.contains(&bid) {
                seen.push(bid);
            }
        }
        if active[cid] {
            // S -> colour with lower = upper = 1.
            excess[colour_node(cid)] += 1;
            excess[0] -= 1;
            for bid in seen {
                let arc = net.add(colour_node(cid), bucket_node(bid as usize), 1);
                colour_arcs[cid].push((arc, bid));
            }
        }
    }
    for (bid, b) in buckets.iter().enumerate() {
        let low = b.take_low.min(u32::MAX as u128) as i64;
        let up = b.take_cap.min(b.slots_total as u128).min(u32::MAX as u128) as i64;
        if up < low {
            return Err(ConstructError::Realization(
                "bucket bounds crossed; capacity invariant broken".into(),
            ));
        }
        net.add(bucket_node(bid), 1, up - low);
        excess[1] += low;
        excess[bucket_node(bid)] -= low;
    }
    net.add(1, 0, i64::MAX / 2); // circulation arc T -> S
    let mut required = 0i64;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            net.add(2, v, e);
            required += e;
        } else if e < 0 {
            net.add(v, 3, -e);
        }
    }
    let got = net.max_flow(2, 3);
    if got != required {
        return Err(ConstructError::Realization(
            "round assignment infeasible; capacity invariant broken".into(),
        ));
    }
    let mut assigned = vec![None; colours];
    for cid in 0..colours {
        for &(arc, bid) in &colour_arcs[cid] {
            if net.cap[arc] == 0 {
                // saturated unit arc
                assigned[cid] = Some(bid);
                break;
            }
        }
        if active[cid] && assigned[cid].is_none() {
            return Err(ConstructError::Realization(
                "flow left a colour unassigned".into(),
            ));
        }
    }
    Ok(assigned)
}

/// Solves the part-structured realization problem.
pub(crate) fn realize_problem(
    problem: &RealizeProblem,
    seed: u64,
) -> Result<Vec<Slot>, ConstructError> {
    let mut slots = initial_edges(problem, seed)?;
    let max_m = *problem.part_sizes.iter().max().unwrap();
    let bin = Binoms::new(max_m + 1);
    let mut targets: Vec<Vec<usize>> = vec![Vec::with_capacity(slots.len()); problem.part_sizes.len()];
    for colour in &problem.colours {
        for ty in colour {
            for (pi, &s) in ty.iter().enumerate() {
                targets[pi].push(s);
            }
        }
    }
    for (part, &part_size) in problem.part_sizes.iter().enumerate() {
        redistribute_part(
            &mut slots,
            problem.colours.len(),
            part,
            part_size,
            &targets[part],
            &bin,
        )?;
    }
    Ok(slots)
}

/// Assembles a partition system from realized slots.
pub(crate) fn assemble(
    problem: &RealizeProblem,
    slots: &[Slot],
    n: usize,
    k: usize,
) -> PartitionSystem {
    let mut offsets = vec![0usize; problem.part_sizes.len()];
    for pi in 1..problem.part_sizes.len() {
        offsets[pi] = offsets[pi - 1] + problem.part_sizes[pi - 1];
    }
    let mut partitions: Vec<Vec<Vec<u32>>> = vec![Vec::new(); problem.colours.len()];
    for slot in slots {
        let mut class: Vec<u32> = Vec::new();
        for (pi, &mask) in slot.masks.iter().enumerate() {
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros();
                class.push(offsets[pi] as u32 + b);
                bits &= bits - 1;
            }
        }
        partitions[slot.colour as usize].push(class);
    }
    PartitionSystem { n, k, partitions }
}

/// Realizes a colour plan on the split ground set and verifies the result.
///
/// Deterministic for a fixed seed; the seed only rotates the initial edge
/// enumeration.
pub fn realize(
    plan: &ColourPlan,
    split: GroundSplit,
    seed: u64,
) -> Result<PartitionSystem, ConstructError> {
    assert_eq!(split.n as u64, plan.params.n, "split and plan disagree on n");
    let problem = RealizeProblem {
        part_sizes: plan.part_sizes.clone(),
        colours: plan.slot_types(),
    };
    let slots = realize_problem(&problem, seed)?;
    let sys = assemble(&problem, &slots, split.n, plan.params.k as usize);
    let report = verify_system(&sys);
    if !report.pass {
        return Err(ConstructError::VerificationFailed(format!(
            "{:?}",
            report.failure
        )));
    }
    match verify_almost_uniform(&sys, plan.params) {
        Ok(true) => Ok(sys),
        Ok(false) => Err(ConstructError::VerificationFailed(
            "system is not almost uniform".into(),
        )),
        Err(e) => Err(ConstructError::VerificationFailed(e.to_string())),
    }
}
