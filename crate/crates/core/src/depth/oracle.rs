//! Brute-force depth computations that share no code with [`super::depth`]
//! or with the ball builder.

use std::collections::HashMap;

use super::{DepthEntry, DepthProfile, DepthValue};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet};

pub const ORACLE_ORDER_LIMIT: u64 = 10_000;

/// Ground-truth depths in a finite group from all-pairs Cayley distances.
///
/// Distances from every element are computed by a full BFS; the depth of
/// `g` is the least distance from `g` to an element of larger norm, or
/// `Infinite` when there is none.
pub fn depth_oracle(gens: &GeneratingSet) -> Result<DepthProfile> {
    let group = gens.group();
    let order = group
        .order()
        .ok_or_else(|| Error::InvalidGroup(format!("{group} is not finite")))?;
    if order > ORACLE_ORDER_LIMIT {
        return Err(Error::OracleTooLarge {
            order,
            bound: ORACLE_ORDER_LIMIT,
        });
    }
    let n = order as usize;
    let elements: Vec<Element> = (0..order).map(|i| group.element_at(i).expect("in range")).collect();
    // neighbours[i] lists the indices of i * s for every s in S and S^-1
    let mut neighbours: Vec<Vec<usize>> = Vec::with_capacity(n);
    for x in &elements {
        let mut adj = Vec::with_capacity(2 * gens.len());
        for s in gens.elements() {
            for y in [group.multiply(x, s)?, group.multiply(x, &group.invert(s)?)?] {
                adj.push(group.index_of(&y).expect("in range") as usize);
            }
        }
        neighbours.push(adj);
    }
    let bfs = |source: usize| -> Vec<u32> {
        let mut dist = vec![u32::MAX; n];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(i) = queue.pop_front() {
            for &j in &neighbours[i] {
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    };
    let identity = group.index_of(&group.identity()).expect("in range") as usize;
    let norm = bfs(identity);
    if norm.contains(&u32::MAX) {
        return Err(Error::NotGenerating {
            reached: norm.iter().filter(|&&d| d != u32::MAX).count() as u64,
            order,
        });
    }
    let mut entries = Vec::with_capacity(n);
    for (g, element) in elements.iter().enumerate() {
        let dist = bfs(g);
        let depth = (0..n)
            .filter(|&x| norm[x] > norm[g])
            .map(|x| dist[x])
            .min()
            .map_or(DepthValue::Infinite, DepthValue::Finite);
        entries.push(DepthEntry {
            element: element.clone(),
            norm: norm[g],
            depth,
        });
    }
    Ok(DepthProfile {
        radius: norm.iter().copied().max().unwrap_or(0),
        entries,
    })
}

/// Ground-truth depths of every element of norm at most `radius`, for any
/// group, using `d(g, x) = |g^-1 x|`.
///
/// Some element of norm `|g| + 1` lies within `2|g| + 1` of `g` whenever one
/// exists, so scanning the words `w` of the ball of radius `2 * radius + 1`
/// in order of length and stopping at the first `g w` of larger norm gives
/// the depth exactly; if no such `w` exists the complement is empty.
pub fn depth_oracle_translated(gens: &GeneratingSet, radius: u32) -> Result<DepthProfile> {
    let group = gens.group();
    let outer = 2 * radius + 1;
    // plain layered BFS, kept separate from the ball builder
    let mut norms: HashMap<Element, u32> = HashMap::from([(group.identity(), 0)]);
    let mut by_length: Vec<(Element, u32)> = vec![(group.identity(), 0)];
    let mut layer = vec![group.identity()];
    for d in 1..=outer {
        let mut next = Vec::new();
        for x in &layer {
            for s in gens.elements() {
                for y in [group.multiply(x, s)?, group.multiply(x, &group.invert(s)?)?] {
                    if !norms.contains_key(&y) {
                        norms.insert(y.clone(), d);
                        by_length.push((y.clone(), d));
                        next.push(y);
                    }
                }
            }
        }
        layer = next;
    }
    let mut entries = Vec::new();
    for (g, g_norm) in by_length.iter().filter(|(_, d)| *d <= radius) {
        let mut depth = DepthValue::Infinite;
        for (w, w_len) in &by_length {
            let x = group.multiply(g, w)?;
            // norms beyond `outer` are unknown but certainly larger than |g|
            if norms.get(&x).map_or(true, |&d| d > *g_norm) {
                depth = DepthValue::Finite(*w_len);
                break;
            }
        }
        entries.push(DepthEntry {
            element: g.clone(),
            norm: *g_norm,
            depth,
        });
    }
    Ok(DepthProfile { radius, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, TableGroup};

    #[test]
    fn cyclic_two() {
        let g = Group::cyclic(2).unwrap();
        let p = depth_oracle(&GeneratingSet::parse(&g, "1").unwrap()).unwrap();
        assert_eq!(p.get(&Element::Residue(1)), Some(DepthValue::Infinite));
        assert_eq!(p.get(&Element::Residue(0)), Some(DepthValue::Finite(1)));
    }

    #[test]
    fn cyclic_ten_by_hand() {
        let g = Group::cyclic(10).unwrap();
        let p = depth_oracle(&GeneratingSet::parse(&g, "1").unwrap()).unwrap();
        for e in &p.entries {
            let expected = if e.norm == 5 {
                DepthValue::Infinite
            } else {
                DepthValue::Finite(1)
            };
            assert_eq!(e.depth, expected, "{}", e.element);
        }
    }

    #[test]
    fn both_oracles_agree_on_finite_groups() {
        let (s4, ids) = TableGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        let s4 = Group::table(s4);
        let cases = vec![
            GeneratingSet::parse(&Group::cyclic(12).unwrap(), "1,5").unwrap(),
            GeneratingSet::standard(&Group::dihedral(9).unwrap()).unwrap(),
            GeneratingSet::new(&s4, ids.iter().map(|&i| Element::Table(i)).collect()).unwrap(),
        ];
        for gens in cases {
            let all_pairs = depth_oracle(&gens).unwrap();
            let translated = depth_oracle_translated(&gens, all_pairs.radius).unwrap();
            assert!(all_pairs.mismatches(&translated).is_empty());
        }
    }

    #[test]
    fn oracle_bounds() {
        let big = GeneratingSet::parse(&Group::cyclic(10_001).unwrap(), "1").unwrap();
        assert!(matches!(depth_oracle(&big), Err(Error::OracleTooLarge { .. })));
        let z = GeneratingSet::parse(&Group::integers(), "1").unwrap();
        assert!(depth_oracle(&z).is_err());
        let half = GeneratingSet::parse(&Group::cyclic(10).unwrap(), "2").unwrap();
        assert!(matches!(depth_oracle(&half), Err(Error::NotGenerating { .. })));
    }

    #[test]
    fn translated_oracle_on_integers() {
        let z = GeneratingSet::parse(&Group::integers(), "1").unwrap();
        let p = depth_oracle_translated(&z, 20).unwrap();
        assert_eq!(p.entries.len(), 41);
        assert!(p.entries.iter().all(|e| e.depth == DepthValue::Finite(1)));
    }
}
