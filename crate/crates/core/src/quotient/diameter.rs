use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet};

/// Largest finite group the dense BFS will index.
const DENSE_LIMIT: u64 = 1 << 32;

/// Diameter of a finite group under a generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    pub order: u64,
    pub diameter: u32,
    /// First element of maximal length in BFS order.
    pub witness: Element,
    pub sphere_sizes: Vec<u64>,
}

/// BFS over a finite group using dense element indices instead of hashing.
pub(crate) struct DenseBfs {
    pub distance: Vec<u32>,
    /// Element indices in visit order.
    pub visited: Vec<u64>,
}

pub(crate) fn dense_bfs(gens: &GeneratingSet) -> Result<DenseBfs> {
    let group = gens.group();
    let order = group
        .order()
        .ok_or_else(|| Error::InvalidGroup(format!("{group} is not finite")))?;
    if order > DENSE_LIMIT {
        return Err(Error::InvalidGroup(format!("{group} is too large to enumerate")));
    }
    let steps: Vec<u64> = gens
        .symmetric()
        .iter()
        .map(|(step, _)| group.index_of(step).expect("generators lie in the group"))
        .collect();
    let mut distance = vec![u32::MAX; order as usize];
    let start = group.index_of(&group.identity()).expect("identity is indexed");
    distance[start as usize] = 0;
    let mut visited = vec![start];
    let mut head = 0;
    while head < visited.len() {
        let i = visited[head];
        head += 1;
        let next_distance = distance[i as usize] + 1;
        for &step in &steps {
            let j = group.index_product(i, step).expect("indices in range");
            if distance[j as usize] == u32::MAX {
                distance[j as usize] = next_distance;
                visited.push(j);
            }
        }
    }
    Ok(DenseBfs { distance, visited })
}

/// Size of the subgroup generated by `gens`.
pub(crate) fn closure_size(gens: &GeneratingSet) -> Result<u64> {
    Ok(dense_bfs(gens)?.visited.len() as u64)
}

/// Exact diameter of a finite group by full BFS.
pub fn diameter(gens: &GeneratingSet) -> Result<DiameterReport> {
    let group = gens.group();
    let bfs = dense_bfs(gens)?;
    let order = bfs.distance.len() as u64;
    if bfs.visited.len() as u64 != order {
        return Err(Error::NotGenerating {
            reached: bfs.visited.len() as u64,
            order,
        });
    }
    let last = *bfs.visited.last().expect("identity is visited");
    let diameter = bfs.distance[last as usize];
    let first_max = bfs
        .visited
        .iter()
        .copied()
        .find(|&i| bfs.distance[i as usize] == diameter)
        .expect("the last element has maximal distance");
    let mut sphere_sizes = vec![0u64; diameter as usize + 1];
    for &i in &bfs.visited {
        sphere_sizes[bfs.distance[i as usize] as usize] += 1;
    }
    Ok(DiameterReport {
        order,
        diameter,
        witness: group.element_at(first_max).expect("index in range"),
        sphere_sizes,
    })
}

/// Whether `(2a + 1)^n >= m`: the number of words of length at most `n`
/// over `a` generators, their inverses and the identity must cover the
/// group. Always true for a correct report.
pub fn counting_bound_check(report: &DiameterReport, a: usize) -> bool {
    let base = 2 * a as u128 + 1;
    match base.checked_pow(report.diameter) {
        Some(words) => words >= report.order as u128,
        None => true,
    }
}
