use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Associativity is checked on every triple up to this order and on a random
/// sample above it.
pub const EXHAUSTIVE_AXIOM_LIMIT: u32 = 512;
const SAMPLED_TRIPLES: usize = 200_000;

/// A finite group given by its full multiplication table over ids `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    order: u32,
    identity: u32,
    /// Row-major: `table[a * order + b] = a * b`.
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl TableGroup {
    /// Validates the group axioms and builds the inverse table.
    pub fn new(rows: Vec<Vec<u32>>, identity: u32) -> Result<TableGroup> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if order > u32::MAX as usize {
            return Err(Error::InvalidGroup("table too large".into()));
        }
        let m = order as u32;
        if identity >= m {
            return Err(Error::InvalidGroup(format!("identity id {identity} out of range")));
        }
        let mut table = Vec::with_capacity(order * order);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&v| v >= m) {
                return Err(Error::InvalidGroup(format!("entry {bad} in row {a} out of range")));
            }
            table.extend_from_slice(row);
        }
        let mut group = TableGroup {
            order: m,
            identity,
            table,
            inverses: Vec::new(),
        };
        group.check_axioms()?;
        Ok(group)
    }

    fn check_axioms(&mut self) -> Result<()> {
        let m = self.order;
        for a in 0..m {
            if self.product(self.identity, a) != a || self.product(a, self.identity) != a {
                return Err(Error::InvalidGroup(format!("identity law fails at {a}")));
            }
        }
        // Latin square rows and columns give cancellation; with the identity
        // law that yields two-sided inverses once associativity holds.
        let mut inverses = vec![u32::MAX; m as usize];
        for a in 0..m {
            let mut seen_row = vec![false; m as usize];
            let mut seen_col = vec![false; m as usize];
            for b in 0..m {
                let r = self.product(a, b) as usize;
                let c = self.product(b, a) as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(Error::InvalidGroup(format!("cancellation fails for {a}")));
                }
                seen_row[r] = true;
                seen_col[c] = true;
                if r as u32 == self.identity {
                    inverses[a as usize] = b;
                }
            }
        }
        for (a, &inv) in inverses.iter().enumerate() {
            if self.product(inv, a as u32) != self.identity {
                return Err(Error::InvalidGroup(format!("{a} has no two-sided inverse")));
            }
        }
        let assoc = |a: u32, b: u32, c: u32| {
            self.product(self.product(a, b), c) == self.product(a, self.product(b, c))
        };
        if m <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x7ab1e);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        self.inverses = inverses;
        Ok(())
    }

    /// Closes a set of permutations (as image lists on `0..degree`) under
    /// composition. Returns the table group and the ids of the inputs.
    /// Composition reads left to right: `(p * q)[i] = q[p[i]]`.
    pub fn from_permutations(perms: &[Vec<u32>]) -> Result<(TableGroup, Vec<u32>)> {
        let degree = perms.first().map_or(0, Vec::len);
        for p in perms {
            let mut seen = vec![false; degree];
            if p.len() != degree
                || p.iter().any(|&v| {
                    let v = v as usize;
                    v >= degree || std::mem::replace(&mut seen[v], true)
                })
            {
                return Err(Error::InvalidGroup(format!("{p:?} is not a permutation of 0..{degree}")));
            }
        }
        let compose = |p: &[u32], q: &[u32]| p.iter().map(|&i| q[i as usize]).collect::<Vec<u32>>();
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity, 0)]);
        let mut head = 0;
        while head < elements.len() {
            let current = elements[head].clone();
            head += 1;
            for p in perms {
                let next = compose(&current, p);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len() as u32);
                    elements.push(next);
                }
            }
        }
        let rows = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let ids = perms.iter().map(|p| index[p]).collect();
        Ok((TableGroup::new(rows, 0)?, ids))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn product(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.table.chunks(self.order as usize)
    }
}
