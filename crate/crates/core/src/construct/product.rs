//! Product construction: an `(m + n, k)` system with `k p q` partitions from
//! an `(m, k)` system with `p` partitions and an `(n, k)` system with `q`.

use super::{ConstructError, PartitionSystem};

/// Combines two systems with the same `k` on disjoint ground sets.
///
/// The second system's elements are shifted by `first.n`; partition
/// `(i, j, y)` joins class `z` of the first with class `z + y (mod k)` of
/// the second.
pub fn product_build(
    first: &PartitionSystem,
    second: &PartitionSystem,
) -> Result<PartitionSystem, ConstructError> {
    if first.k != second.k {
        return Err(ConstructError::KMismatch(first.k, second.k));
    }
    let k = first.k;
    let offset = first.n as u32;
    let mut partitions =
        Vec::with_capacity(first.partitions.len() * second.partitions.len() * k);
    for pi in &first.partitions {
        for rho in &second.partitions {
            for y in 0..k {
                let mut partition = Vec::with_capacity(k);
                for z in 0..k {
                    let mut class = pi[z].clone();
                    class.extend(rho[(z + y) % k].iter().map(|&e| e + offset));
                    partition.push(class);
                }
                partitions.push(partition);
            }
        }
    }
    Ok(PartitionSystem {
        n: first.n + second.n,
        k,
        partitions,
    })
}
