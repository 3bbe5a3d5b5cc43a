//! Exact `SP(n, k)` for tiny `n` by maximum clique over the compatibility
//! graph of all `k`-partitions of the ground set.
//!
//! Two partitions are compatible when no class of one is a subset (or equal)
//! of a class of the other. A maximum pairwise-compatible family is exactly
//! a maximum Sperner partition system, so a branch-and-bound clique search
//! is an oracle that is independent of every formula in this crate.

use super::{ConstructError, PartitionSystem};
use crate::exactmath::BigNat;

pub const BRUTE_DEFAULT_CAP: u64 = 9;

/// All partitions of `{0..n-1}` into exactly `k` nonempty classes, via
/// restricted-growth strings; classes carry their minimum element in order.
fn enumerate_partitions(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    fn rec(
        n: usize,
        k: usize,
        pos: usize,
        classes_used: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if n - pos < k - classes_used {
            return; // cannot open enough classes any more
        }
        if pos == n {
            if classes_used == k {
                let mut masks = vec![0u64; k];
                for (e, &c) in assignment.iter().enumerate() {
                    masks[c] |= 1 << e;
                }
                out.push(masks);
            }
            return;
        }
        for c in 0..classes_used.min(k) {
            assignment[pos] = c;
            rec(n, k, pos + 1, classes_used, assignment, out);
        }
        if classes_used < k {
            assignment[pos] = classes_used;
            rec(n, k, pos + 1, classes_used + 1, assignment, out);
        }
    }
    rec(n, k, 0, 0, &mut assignment, &mut out);
    out
}

/// Compatible iff no class of one contains a class of the other.
fn compatible(a: &[u64], b: &[u64]) -> bool {
    for &x in a {
        for &y in b {
            if x & y == x || x & y == y {
                return false;
            }
        }
    }
    true
}

struct BitGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn first_set_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(wi, &w)| wi * 64 + w.trailing_zeros() as usize)
}

fn set_iter(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut bits = w;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Branch and bound with greedy colouring bounds and recolouring.
struct CliqueSearch<'g> {
    g: &'g BitGraph,
    /// Size to beat, independent of whether a clique of that size is held.
    bound: usize,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl<'g> CliqueSearch<'g> {
    /// Multi-start greedy warm start: a good initial clique makes the
    /// colouring bound bite immediately.
    fn greedy_seed(g: &BitGraph) -> Vec<usize> {
        let mut order: Vec<usize> = (0..g.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        let mut best: Vec<usize> = Vec::new();
        for &seed in order.iter().take(48.min(g.n)) {
            let mut clique = vec![seed];
            let mut cand: Vec<u64> = g.row(seed).to_vec();
            loop {
                // Candidate with the most neighbours inside the set.
                let mut pick = None;
                let mut pick_deg = 0usize;
                for v in set_iter(&cand) {
                    let d = g
                        .row(v)
                        .iter()
                        .zip(&cand)
                        .map(|(a, b)| (a & b).count_ones() as usize)
                        .sum();
                    if pick.is_none() || d > pick_deg {
                        pick = Some(v);
                        pick_deg = d;
                    }
                }
                let Some(v) = pick else { break };
                clique.push(v);
                for (w, r) in cand.iter_mut().zip(g.row(v)) {
                    *w &= r;
                }
            }
            if clique.len() > best.len() {
                best = clique;
            }
        }
        best
    }

    fn floor(&self) -> usize {
        self.bound.max(self.best.len())
    }

    /// Greedy colouring of `cand` into independent classes, class-major: a
    /// clique can take at most one vertex per class, so the class index
    /// bounds any clique through the later vertices of the returned order.
    fn colour_sort(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut uncoloured = cand.to_vec();
        let mut colour = 0usize;
        let mut avail = vec![0u64; uncoloured.len()];
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            avail.copy_from_slice(&uncoloured);
            while let Some(v) = first_set_bit(&avail) {
                order.push((v, colour));
                uncoloured[v / 64] &= !(1 << (v % 64));
                avail[v / 64] &= !(1 << (v % 64));
                for (w, r) in avail.iter_mut().zip(self.g.row(v)) {
                    *w &= !r;
                }
            }
        }
        order
    }

    fn expand(&mut self, cand: &[u64]) {
        let mut count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if count == 0 {
            if self.current.len() > self.floor() {
                self.best = self.current.clone();
            }
            return;
        }
        if self.current.len() + count <= self.floor() {
            return;
        }
        // Degree filtering: to be part of a clique that beats the floor, a
        // candidate needs enough neighbours among the candidates. Iterate to
        // a fixed point; this collapses dense-but-shallow candidate sets.
        let mut live = cand.to_vec();
        let need = self.floor() + 1 - self.current.len();
        let idxs: Vec<usize> = set_iter(cand).collect();
        loop {
            let mut removed = false;
            for &v in &idxs {
                if live[v / 64] >> (v % 64) & 1 == 0 {
                    continue;
                }
                let deg: usize = self
                    .g
                    .row(v)
                    .iter()
                    .zip(&live)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                if deg + 2 <= need {
                    live[v / 64] &= !(1 << (v % 64));
                    count -= 1;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
            if self.current.len() + count <= self.floor() {
                return;
            }
        }
        if count == 0 {
            if self.current.len() > self.floor() {
                self.best = self.current.clone();
            }
            return;
        }
        let order = self.colour_sort(&live);
        for &(v, colour) in order.iter().rev() {
            if self.current.len() + colour <= self.floor() {
                return;
            }
            self.current.push(v);
            let mut next: Vec<u64> = live
                .iter()
                .zip(self.g.row(v))
                .map(|(a, b)| a & b)
                .collect();
            next[v / 64] &= !(1 << (v % 64));
            self.expand(&next);
            self.current.pop();
            live[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Restricts to the `t`-core (vertices that could extend a clique beyond
/// `t`) and reindexes. Returns the kept original vertex ids.
fn core_reduce(g: &BitGraph, t: usize) -> Vec<usize> {
    let mut alive = vec![true; g.n];
    let mut deg: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
    let mut queue: Vec<usize> = (0..g.n).filter(|&v| deg[v] < t).collect();
    for &v in &queue {
        alive[v] = false;
    }
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        for u in set_iter(g.row(v)) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] < t {
                    alive[u] = false;
                    queue.push(u);
                }
            }
        }
    }
    (0..g.n).filter(|&v| alive[v]).collect()
}

/// Diagnostics used while tuning the search; prints seed and core sizes.
pub fn probe(n: u64, k: u64) {
    let parts = enumerate_partitions(n as usize, k as usize);
    let mut g = BitGraph::new(parts.len());
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            if compatible(&parts[i], &parts[j]) {
                g.add_edge(i, j);
            }
        }
    }
    let seed = CliqueSearch::greedy_seed(&g);
    let kept = core_reduce(&g, seed.len());
    let mut sub = BitGraph::new(kept.len());
    for (a, &va) in kept.iter().enumerate() {
        for (b, &vb) in kept.iter().enumerate().skip(a + 1) {
            if g.row(va)[vb / 64] >> (vb % 64) & 1 == 1 {
                sub.add_edge(a, b);
            }
        }
    }
    let search = CliqueSearch {
        g: &sub,
        bound: 0,
        best: Vec::new(),
        current: Vec::new(),
    };
    let full: Vec<u64> = {
        let mut f = vec![u64::MAX; sub.words];
        if sub.n % 64 != 0 && sub.words > 0 {
            f[sub.words - 1] = (1u64 << (sub.n % 64)) - 1;
        }
        f
    };
    let order = search.colour_sort(&full);
    let colours = order.iter().map(|&(_, c)| c).max().unwrap_or(0);
    let beyond = order.iter().filter(|&&(_, c)| c > seed.len()).count();
    let edges: usize = (0..sub.n).map(|v| sub.degree(v)).sum::<usize>() / 2;
    println!(
        "n={n} k={k}: vertices={} seed={} core={} core_edges={} root_colours={} branch_roots={}",
        parts.len(),
        seed.len(),
        kept.len(),
        edges,
        colours,
        beyond
    );
}

/// Exact `SP(n, k)` with a witness system. `n` is capped (default 9).
pub fn brute_force_sp(
    n: u64,
    k: u64,
    cap: u64,
) -> Result<(BigNat, PartitionSystem), ConstructError> {
    if n > cap {
        return Err(ConstructError::CapExceeded { n, cap });
    }
    if k > n || k == 0 {
        return Err(ConstructError::NotApplicable(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let parts = enumerate_partitions(n as usize, k as usize);
    let mut g = BitGraph::new(parts.len());
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            if compatible(&parts[i], &parts[j]) {
                g.add_edge(i, j);
            }
        }
    }
    // Warm start, then restrict the branch and bound to vertices that could
    // sit in a strictly larger clique, relabelled into degeneracy order so
    // the colouring bound stays sharp.
    let seed = CliqueSearch::greedy_seed(&g);
    let mut kept = core_reduce(&g, seed.len());
    let adjacent = |a: usize, b: usize| g.row(a)[b / 64] >> (b % 64) & 1 == 1;
    {
        let mut alive: std::collections::HashSet<usize> = kept.iter().copied().collect();
        let mut deg: std::collections::HashMap<usize, usize> = kept
            .iter()
            .map(|&v| {
                let d = kept.iter().filter(|&&u| u != v && adjacent(v, u)).count();
                (v, d)
            })
            .collect();
        let mut removal = Vec::with_capacity(kept.len());
        while !alive.is_empty() {
            let &v = alive.iter().min_by_key(|&&v| (deg[&v], v)).unwrap();
            alive.remove(&v);
            removal.push(v);
            for &u in &kept {
                if alive.contains(&u) && adjacent(v, u) {
                    *deg.get_mut(&u).unwrap() -= 1;
                }
            }
        }
        kept = removal;
    }
    let mut sub = BitGraph::new(kept.len());
    for (a, &va) in kept.iter().enumerate() {
        for (b, &vb) in kept.iter().enumerate().skip(a + 1) {
            if adjacent(va, vb) {
                sub.add_edge(a, b);
            }
        }
    }
    let mut search = CliqueSearch {
        g: &sub,
        bound: seed.len(),
        best: Vec::new(),
        current: Vec::new(),
    };
    let full: Vec<u64> = {
        let mut f = vec![u64::MAX; sub.words];
        if sub.n % 64 != 0 && sub.words > 0 {
            f[sub.words - 1] = (1u64 << (sub.n % 64)) - 1;
        }
        f
    };
    search.expand(&full);
    let clique: Vec<usize> = if search.best.len() > seed.len() {
        search.best.iter().map(|&v| kept[v]).collect()
    } else {
        seed
    };
    let mut chosen: Vec<usize> = clique;
    chosen.sort_unstable();
    let partitions: Vec<Vec<Vec<u32>>> = chosen
        .iter()
        .map(|&v| {
            parts[v]
                .iter()
                .map(|&mask| {
                    let mut class = Vec::new();
                    let mut bits = mask;
                    while bits != 0 {
                        class.push(bits.trailing_zeros());
                        bits &= bits - 1;
                    }
                    class
                })
                .collect()
        })
        .collect();
    let witness = PartitionSystem {
        n: n as usize,
        k: k as usize,
        partitions,
    };
    Ok((BigNat::from(witness.partitions.len() as u64), witness))
}
