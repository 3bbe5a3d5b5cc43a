//! Independent checkers: partition-system validity, almost uniformity,
//! shadows with the Lovász bound, and the detecting-array view.
//!
//! Builders never trust themselves; everything they emit runs through
//! [`verify_system`] before it is returned or written to disk.

use crate::bounds::Params;
use crate::construct::PartitionSystem;
use crate::exactmath::{binom, BigNat};
use std::collections::{HashMap, HashSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("dimension mismatch: system is ({n}, {k}), parameters are ({pn}, {pk})")]
    DimensionMismatch { n: usize, k: usize, pn: u64, pk: u64 },
    #[error("shadow direction inconsistent: {0}")]
    ShadowDirection(String),
    #[error("malformed detecting array: {0}")]
    MalformedArray(String),
    #[error("clutter precondition failed: {0}")]
    ClutterPrecondition(String),
}

/// Fixed-width bitset over the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_elements(n: usize, els: &[u32]) -> Self {
        let mut m = Mask::empty(n);
        for &e in els {
            m.words[(e / 64) as usize] |= 1u64 << (e % 64);
        }
        m
    }

    pub fn insert(&mut self, e: u32) {
        self.words[(e / 64) as usize] |= 1u64 << (e % 64);
    }

    pub fn contains(&self, e: u32) -> bool {
        self.words[(e / 64) as usize] >> (e % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Mask) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &Mask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.count());
        for (wi, w) in self.words.iter().enumerate() {
            let mut bits = *w;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push(wi as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Witness for a failed Sperner check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetWitness {
    /// Partition and class index of the contained class.
    pub inner: (usize, usize),
    /// Partition and class index of the containing class.
    pub outer: (usize, usize),
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Partition `idx` is not a valid partition of the ground set.
    BadPartition { idx: usize, reason: String },
    Subset(SubsetWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub pass: bool,
    pub failure: Option<Failure>,
    pub partitions: usize,
}

/// Hypergraph with no edge contained in another.
#[derive(Debug, Clone)]
pub struct Clutter {
    pub vertices: usize,
    pub edges: Vec<Vec<u32>>,
}

impl Clutter {
    /// Checks the defining property and returns the clutter.
    pub fn new(vertices: usize, edges: Vec<Vec<u32>>) -> Result<Self, VerifyError> {
        let masks: Vec<Mask> = edges
            .iter()
            .map(|e| Mask::from_elements(vertices, e))
            .collect();
        if let Some((a, b)) = find_subset_pair(&masks) {
            return Err(VerifyError::ClutterPrecondition(format!(
                "edge {a} is contained in edge {b}"
            )));
        }
        Ok(Clutter { vertices, edges })
    }
}

/// Index pair `(a, b)` with `mask[a] ⊆ mask[b]`, `a != b`, if one exists.
///
/// Grouped by cardinality; between two size groups the cheaper of
/// subset-enumeration and the pairwise scan is used, so near-uniform
/// families with many members stay fast.
fn find_subset_pair(masks: &[Mask]) -> Option<(usize, usize)> {
    let mut by_size: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, m) in masks.iter().enumerate() {
        by_size.entry(m.count()).or_default().push(i);
    }
    // Duplicates within a size class.
    let mut seen: HashMap<&Mask, usize> = HashMap::new();
    for (i, m) in masks.iter().enumerate() {
        if let Some(&j) = seen.get(m) {
            return Some((i, j));
        }
        seen.insert(m, i);
    }
    let mut sizes: Vec<usize> = by_size.keys().copied().collect();
    sizes.sort_unstable();
    for (si, &s) in sizes.iter().enumerate() {
        for &sb in &sizes[si + 1..] {
            let small = &by_size[&s];
            let big = &by_size[&sb];
            let drop = sb - s;
            let combos = binom(sb as u64, drop as i64);
            let enum_cheap = combos < BigNat::from(small.len() as u64)
                && combos < BigNat::from(4096u32);
            if enum_cheap {
                let small_set: HashMap<&Mask, usize> =
                    small.iter().map(|&i| (&masks[i], i)).collect();
                for &b in big {
                    let els = masks[b].elements();
                    let mut found = None;
                    for_each_subset(&els, s, &mut |sub| {
                        if found.is_none() {
                            let m = Mask::from_elements(masks[b].words.len() * 64, sub);
                            if let Some(&a) = small_set.get(&m) {
                                found = Some(a);
                            }
                        }
                    });
                    if let Some(a) = found {
                        return Some((a, b));
                    }
                }
            } else {
                for &a in small {
                    for &b in big {
                        if masks[a].is_subset(&masks[b]) {
                            return Some((a, b));
                        }
                    }
                }
            }
        }
    }
    None
}

fn for_each_subset(els: &[u32], size: usize, f: &mut dyn FnMut(&[u32])) {
    let mut cur = Vec::with_capacity(size);
    fn rec(els: &[u32], size: usize, start: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=els.len().saturating_sub(need) {
            cur.push(els[i]);
            rec(els, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(els, size, 0, &mut cur, f);
}

/// Full validity check: every partition covers the ground set with `k`
/// nonempty disjoint classes, and no class of any partition is a subset of a
/// class of any other.
///
/// On failure the witness is the first offence in deterministic scan order
/// (partition pairs lexicographic, classes in stored order).
pub fn verify_system(sys: &PartitionSystem) -> Report {
    let n = sys.n;
    for (idx, partition) in sys.partitions.iter().enumerate() {
        if partition.len() != sys.k {
            return bad(idx, format!("has {} classes, expected {}", partition.len(), sys.k), sys);
        }
        let mut cover = Mask::empty(n);
        let mut total = 0usize;
        for (ci, class) in partition.iter().enumerate() {
            if class.is_empty() {
                return bad(idx, format!("class {ci} is empty"), sys);
            }
            let m = Mask::from_elements(n, class);
            if m.count() != class.len() {
                return bad(idx, format!("class {ci} repeats an element"), sys);
            }
            if class.iter().any(|&e| e as usize >= n) {
                return bad(idx, format!("class {ci} mentions an element >= n"), sys);
            }
            if m.intersects(&cover) {
                return bad(idx, format!("class {ci} overlaps an earlier class"), sys);
            }
            cover.union_with(&m);
            total += class.len();
        }
        if total != n {
            return bad(idx, format!("classes cover {total} of {n} elements"), sys);
        }
    }

    // Sperner condition. Classes inside one partition are disjoint and
    // nonempty, so any containment witness necessarily crosses partitions.
    let mut masks = Vec::with_capacity(sys.partitions.len() * sys.k);
    let mut owner = Vec::with_capacity(masks.capacity());
    for (pi, partition) in sys.partitions.iter().enumerate() {
        for (ci, class) in partition.iter().enumerate() {
            masks.push(Mask::from_elements(n, class));
            owner.push((pi, ci));
        }
    }
    if find_subset_pair(&masks).is_some() {
        // Rescan quadratically for the first witness in scan order.
        for i in 0..sys.partitions.len() {
            for j in (i + 1)..sys.partitions.len() {
                for (ci, a) in sys.partitions[i].iter().enumerate() {
                    let ma = Mask::from_elements(n, a);
                    for (cj, b) in sys.partitions[j].iter().enumerate() {
                        let mb = Mask::from_elements(n, b);
                        if ma.is_subset(&mb) {
                            return Report {
                                pass: false,
                                failure: Some(Failure::Subset(SubsetWitness {
                                    inner: (i, ci),
                                    outer: (j, cj),
                                    equal: a.len() == b.len(),
                                })),
                                partitions: sys.partitions.len(),
                            };
                        }
                        if mb.is_subset(&ma) {
                            return Report {
                                pass: false,
                                failure: Some(Failure::Subset(SubsetWitness {
                                    inner: (j, cj),
                                    outer: (i, ci),
                                    equal: a.len() == b.len(),
                                })),
                                partitions: sys.partitions.len(),
                            };
                        }
                    }
                }
            }
        }
        unreachable!("existence check fired without a witness");
    }
    Report {
        pass: true,
        failure: None,
        partitions: sys.partitions.len(),
    }
}

fn bad(idx: usize, reason: String, sys: &PartitionSystem) -> Report {
    Report {
        pass: false,
        failure: Some(Failure::BadPartition { idx, reason }),
        partitions: sys.partitions.len(),
    }
}

/// True iff every partition has `k - r` classes of size `c` and `r` of size
/// `c + 1`.
pub fn verify_almost_uniform(sys: &PartitionSystem, p: Params) -> Result<bool, VerifyError> {
    if sys.n as u64 != p.n || sys.k as u64 != p.k {
        return Err(VerifyError::DimensionMismatch {
            n: sys.n,
            k: sys.k,
            pn: p.n,
            pk: p.k,
        });
    }
    for partition in &sys.partitions {
        let small = partition.iter().filter(|c| c.len() as u64 == p.c).count() as u64;
        let large = partition
            .iter()
            .filter(|c| c.len() as u64 == p.c + 1)
            .count() as u64;
        if small != p.k - p.r || large != p.r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowDirection {
    Down,
    Up,
}

/// Exact shadow: all `target`-sets of `[m]` below (or above) some member.
pub fn shadow(
    m: usize,
    family: &[Vec<u32>],
    direction: ShadowDirection,
    target: usize,
) -> Result<Vec<Vec<u32>>, VerifyError> {
    let mut out: HashSet<Vec<u32>> = HashSet::new();
    match direction {
        ShadowDirection::Down => {
            for s in family {
                if s.len() < target {
                    return Err(VerifyError::ShadowDirection(format!(
                        "down-shadow to {target} of a set of size {}",
                        s.len()
                    )));
                }
            }
            for s in family {
                let mut sorted = s.clone();
                sorted.sort_unstable();
                for_each_subset(&sorted, target, &mut |sub| {
                    out.insert(sub.to_vec());
                });
            }
        }
        ShadowDirection::Up => {
            for s in family {
                if s.len() > target {
                    return Err(VerifyError::ShadowDirection(format!(
                        "up-shadow to {target} of a set of size {}",
                        s.len()
                    )));
                }
            }
            for s in family {
                let members: HashSet<u32> = s.iter().copied().collect();
                let rest: Vec<u32> = (0..m as u32).filter(|e| !members.contains(e)).collect();
                let mut sorted = s.clone();
                sorted.sort_unstable();
                for_each_subset(&rest, target - s.len(), &mut |extra| {
                    let mut t = sorted.clone();
                    t.extend_from_slice(extra);
                    t.sort_unstable();
                    out.insert(t);
                });
            }
        }
    }
    let mut v: Vec<Vec<u32>> = out.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// `|shadow_c(E)| >= min(|E|, C(2c+1, c) + 1)` for clutters with all edges of
/// size at least `c`.
pub fn min_shadow_floor(clutter: &Clutter, c: usize) -> Result<bool, VerifyError> {
    if clutter.edges.iter().any(|e| e.len() < c) {
        return Err(VerifyError::ClutterPrecondition(format!(
            "an edge has fewer than {c} vertices"
        )));
    }
    let sh = shadow(clutter.vertices, &clutter.edges, ShadowDirection::Down, c)?;
    let threshold = binom(2 * c as u64 + 1, c as i64) + BigNat::from(1u32);
    let bound = threshold.min(BigNat::from(clutter.edges.len() as u64));
    Ok(BigNat::from(sh.len() as u64) >= bound)
}

/// `n x p` array over symbols `1..=k`; column `j` encodes partition `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectingArray {
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
    /// Row-major entries, `entries[i * cols + j]` in `1..=symbols`.
    pub entries: Vec<u16>,
}

/// Column `j`, symbol `l` at row `i` iff element `i` lies in class `l` of
/// partition `j` (classes in stored order, 1-based symbols).
pub fn to_detecting_array(sys: &PartitionSystem) -> DetectingArray {
    let (rows, cols) = (sys.n, sys.partitions.len());
    let mut entries = vec![0u16; rows * cols];
    for (j, partition) in sys.partitions.iter().enumerate() {
        for (l, class) in partition.iter().enumerate() {
            for &e in class {
                entries[e as usize * cols + j] = (l + 1) as u16;
            }
        }
    }
    DetectingArray {
        rows,
        cols,
        symbols: sys.k,
        entries,
    }
}

/// Witness: the row set of `(col1, sym1)` is contained in that of
/// `(col2, sym2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayWitness {
    pub inner: (usize, u16),
    pub outer: (usize, u16),
}

/// Checks the detecting condition: for any two (column, symbol) pairs, the
/// row set of one never contains the row set of the other.
pub fn verify_detecting(arr: &DetectingArray) -> Result<(bool, Option<ArrayWitness>), VerifyError> {
    if arr.entries.len() != arr.rows * arr.cols {
        return Err(VerifyError::MalformedArray(
            "entry count does not match dimensions".into(),
        ));
    }
    if arr.entries.iter().any(|&e| e == 0 || e as usize > arr.symbols) {
        return Err(VerifyError::MalformedArray(format!(
            "entries must lie in 1..={}",
            arr.symbols
        )));
    }
    let mut rowsets: Vec<Mask> = Vec::with_capacity(arr.cols * arr.symbols);
    for j in 0..arr.cols {
        for l in 1..=arr.symbols as u16 {
            let mut m = Mask::empty(arr.rows);
            for i in 0..arr.rows {
                if arr.entries[i * arr.cols + j] == l {
                    m.insert(i as u32);
                }
            }
            rowsets.push(m);
        }
    }
    // Empty row sets (symbols that never occur in a column) make the array
    // degenerate: an empty set is a subset of everything.
    if let Some(pos) = rowsets.iter().position(|m| m.count() == 0) {
        let (j, l) = (pos / arr.symbols, (pos % arr.symbols) as u16 + 1);
        return Ok((
            false,
            Some(ArrayWitness {
                inner: (j, l),
                outer: (j, l),
            }),
        ));
    }
    if find_subset_pair(&rowsets).is_some() {
        for a in 0..rowsets.len() {
            for b in 0..rowsets.len() {
                if a != b && rowsets[a].is_subset(&rowsets[b]) {
                    let w = ArrayWitness {
                        inner: (a / arr.symbols, (a % arr.symbols) as u16 + 1),
                        outer: (b / arr.symbols, (b % arr.symbols) as u16 + 1),
                    };
                    return Ok((false, Some(w)));
                }
            }
        }
        unreachable!("existence check fired without a witness");
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ll_leq;

    fn sys(n: usize, k: usize, parts: &[&[&[u32]]]) -> PartitionSystem {
        PartitionSystem {
            n,
            k,
            partitions: parts
                .iter()
                .map(|p| p.iter().map(|c| c.to_vec()).collect())
                .collect(),
        }
    }

    #[test]
    fn crossing_pair_passes() {
        let s = sys(4, 2, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
        assert!(verify_system(&s).pass);
    }

    #[test]
    fn duplicate_partition_fails_reflexively() {
        let s = sys(4, 2, &[&[&[0, 1], &[2, 3]], &[&[0, 1], &[2, 3]]]);
        let r = verify_system(&s);
        assert!(!r.pass);
        match r.failure.unwrap() {
            Failure::Subset(w) => {
                assert_eq!(w.inner, (0, 0));
                assert_eq!(w.outer, (1, 0));
                assert!(w.equal);
            }
            other => panic!("unexpected failure {other:?}"),
        }
    }

    #[test]
    fn structural_failures_detected() {
        let r = verify_system(&sys(4, 2, &[&[&[0, 1], &[1, 2, 3]]]));
        assert!(!r.pass); // overlap
        let r = verify_system(&sys(4, 2, &[&[&[0, 1], &[2]]]));
        assert!(!r.pass); // does not cover
        let r = verify_system(&sys(4, 2, &[&[&[0, 1, 2, 3], &[]]]));
        assert!(!r.pass); // empty class
    }

    #[test]
    fn strict_subset_across_partitions_fails() {
        let s = sys(4, 2, &[&[&[0, 1], &[2, 3]], &[&[0], &[1, 2, 3]]]);
        let r = verify_system(&s);
        assert!(!r.pass);
        match r.failure.unwrap() {
            Failure::Subset(w) => {
                assert_eq!(w.inner, (1, 0));
                assert_eq!(w.outer, (0, 0));
                assert!(!w.equal);
            }
            other => panic!("unexpected failure {other:?}"),
        }
    }

    #[test]
    fn almost_uniform_checks_profile() {
        let p = Params::new(5, 2).unwrap();
        let good = sys(5, 2, &[&[&[0, 1], &[2, 3, 4]]]);
        assert!(verify_almost_uniform(&good, p).unwrap());
        let lopsided = sys(5, 2, &[&[&[0], &[1, 2, 3, 4]]]);
        assert!(!verify_almost_uniform(&lopsided, p).unwrap());
        assert!(verify_almost_uniform(&good, Params::new(6, 2).unwrap()).is_err());
    }

    #[test]
    fn shadow_complete_family() {
        let m = 5;
        let family: Vec<Vec<u32>> = {
            let mut f = Vec::new();
            for_each_subset(&[0, 1, 2, 3, 4], 3, &mut |s| f.push(s.to_vec()));
            f
        };
        let down = shadow(m, &family, ShadowDirection::Down, 2).unwrap();
        assert_eq!(down.len(), 10); // all of C([5], 2)
        let single = shadow(m, &[vec![1, 2, 4]], ShadowDirection::Down, 2).unwrap();
        assert_eq!(single, vec![vec![1, 2], vec![1, 4], vec![2, 4]]);
        let up = shadow(m, &[vec![1, 2]], ShadowDirection::Up, 3).unwrap();
        assert_eq!(up.len(), 3);
        assert!(shadow(m, &[vec![1]], ShadowDirection::Down, 2).is_err());
    }

    #[test]
    fn shadow_monotone_in_family() {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut all4: Vec<Vec<u32>> = Vec::new();
        for_each_subset(&[0, 1, 2, 3, 4, 5, 6, 7], 4, &mut |s| all4.push(s.to_vec()));
        for _ in 0..50 {
            let mut pool = all4.clone();
            pool.shuffle(&mut rng);
            let small: Vec<_> = pool[..6].to_vec();
            let large: Vec<_> = pool[..12].to_vec();
            let sh_small = shadow(8, &small, ShadowDirection::Down, 3).unwrap();
            let sh_large = shadow(8, &large, ShadowDirection::Down, 3).unwrap();
            let large_set: HashSet<_> = sh_large.into_iter().collect();
            assert!(sh_small.iter().all(|s| large_set.contains(s)));
        }
    }

    #[test]
    fn lovasz_bound_on_random_families() {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let m = rng.gen_range(5..=10usize);
            let i = rng.gen_range(2..=m.min(5));
            let universe: Vec<u32> = (0..m as u32).collect();
            let mut all: Vec<Vec<u32>> = Vec::new();
            for_each_subset(&universe, i, &mut |s| all.push(s.to_vec()));
            all.shuffle(&mut rng);
            let take = rng.gen_range(1..=all.len());
            let family = &all[..take];
            let sh = shadow(m, family, ShadowDirection::Down, i - 1).unwrap();
            assert!(ll_leq(
                i as u64,
                &BigNat::from(take as u64),
                &BigNat::from(sh.len() as u64)
            ));
        }
    }

    #[test]
    fn min_shadow_floor_cases() {
        // Uniform c-clutter: shadow is the family itself.
        let edges: Vec<Vec<u32>> = vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3, 4]];
        let cl = Clutter::new(6, edges).unwrap();
        assert!(min_shadow_floor(&cl, 3).unwrap());
        // Single larger edge.
        let cl = Clutter::new(6, vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(min_shadow_floor(&cl, 3).unwrap());
        // Clutter constructor rejects nested edges.
        assert!(Clutter::new(6, vec![vec![0, 1], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn min_shadow_floor_random_mixed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let m = 10usize;
        let mut built = 0;
        while built < 60 {
            let mut edges: Vec<Vec<u32>> = Vec::new();
            for _ in 0..rng.gen_range(1..=12) {
                let size = rng.gen_range(3..=6usize);
                let mut pool: Vec<u32> = (0..m as u32).collect();
                for j in 0..size {
                    let pick = rng.gen_range(j..pool.len());
                    pool.swap(j, pick);
                }
                let mut e = pool[..size].to_vec();
                e.sort_unstable();
                edges.push(e);
            }
            edges.sort_unstable();
            edges.dedup();
            if let Ok(cl) = Clutter::new(m, edges) {
                assert!(min_shadow_floor(&cl, 3).unwrap());
                built += 1;
            }
        }
    }

    #[test]
    fn detecting_array_round_trip() {
        let s = sys(4, 2, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
        let arr = to_detecting_array(&s);
        assert_eq!(arr.rows, 4);
        assert_eq!(arr.cols, 2);
        assert!(verify_detecting(&arr).unwrap().0);

        let bad = sys(4, 2, &[&[&[0, 1], &[2, 3]], &[&[0], &[1, 2, 3]]]);
        let arr = to_detecting_array(&bad);
        let (ok, witness) = verify_detecting(&arr).unwrap();
        assert!(!ok);
        assert!(witness.is_some());
    }

    #[test]
    fn one_column_array_always_detects() {
        let s = sys(5, 3, &[&[&[0, 4], &[1, 2], &[3]]]);
        let arr = to_detecting_array(&s);
        assert!(verify_detecting(&arr).unwrap().0);
    }
}
