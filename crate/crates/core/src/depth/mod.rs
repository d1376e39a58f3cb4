//! Dead-end depth.
//!
//! The depth of `g` is its distance to the complement of the closed ball of
//! radius `|g|` about the identity. A search from `g` only needs to decide
//! membership in that closed ball: a path leaving it meets the complement at
//! its first exit, so an element absent from a ball of radius `>= |g|` is
//! already outside.

mod oracle;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;

use serde::{Serialize, Serializer};

pub use oracle::{depth_oracle, depth_oracle_translated, ORACLE_ORDER_LIMIT};

use crate::cayley::Ball;
use crate::error::{Error, Result};
use crate::group::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DepthValue {
    Finite(u32),
    /// The search cap was reached without leaving the ball; the depth is at
    /// least this value.
    AtLeast(u32),
    /// The complement is empty (only in finite groups).
    Infinite,
}

impl DepthValue {
    /// A certified lower bound, `None` meaning unbounded.
    pub fn lower_bound(self) -> Option<u32> {
        match self {
            DepthValue::Finite(k) | DepthValue::AtLeast(k) => Some(k),
            DepthValue::Infinite => None,
        }
    }

    pub fn is_at_least(self, k: u32) -> bool {
        self.lower_bound().map_or(true, |b| b >= k)
    }

    fn rank(self) -> (u64, u8) {
        match self {
            DepthValue::Finite(k) => (k as u64, 0),
            DepthValue::AtLeast(k) => (k as u64, 1),
            DepthValue::Infinite => (u64::MAX, 2),
        }
    }

    /// The larger of two values: `Infinite` dominates, and `AtLeast(k)`
    /// beats `Finite(k)`.
    pub fn max(self, other: DepthValue) -> DepthValue {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for DepthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthValue::Finite(k) => write!(f, "{k}"),
            DepthValue::AtLeast(k) => write!(f, ">={k}"),
            DepthValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for DepthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Depth of `g`, searching at most `cap` steps away from it.
///
/// Returns `Finite(k)` when the nearest element of norm greater than `|g|`
/// is `k <= cap` steps away, `Infinite` when the search exhausts the group
/// first, and `AtLeast(cap)` otherwise.
pub fn depth(ball: &Ball, g: &Element, cap: u32) -> Result<DepthValue> {
    let norm = ball.norm(g).ok_or_else(|| Error::NotInBall(g.clone()))?;
    let group = ball.group();
    let gens = ball.gens();
    let outside = |x: &Element| ball.norm(x).map_or(true, |d| d > norm);
    let mut seen: HashSet<Element> = HashSet::from([g.clone()]);
    let mut layer = vec![g.clone()];
    for distance in 1..=cap {
        let mut next = Vec::new();
        for x in &layer {
            for (step, _) in gens.symmetric() {
                let y = group.multiply(x, step)?;
                if outside(&y) {
                    return Ok(DepthValue::Finite(distance));
                }
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Ok(DepthValue::Infinite);
        }
        layer = next;
    }
    Ok(DepthValue::AtLeast(cap))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthEntry {
    pub element: Element,
    pub norm: u32,
    pub depth: DepthValue,
}

/// Depths of every element of a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthProfile {
    pub radius: u32,
    pub entries: Vec<DepthEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub radius: u32,
    pub elements: usize,
    pub max_depth_per_norm: Vec<DepthValue>,
    pub max_depth: DepthValue,
    pub max_finite_depth: Option<u32>,
    /// Elements of depth greater than one.
    pub dead_ends: usize,
}

/// Depth of every element of `ball`, each searched up to `cap` steps.
pub fn depth_profile(ball: &Ball, cap: u32) -> Result<DepthProfile> {
    let entries = ball
        .iter()
        .map(|(e, norm)| {
            Ok(DepthEntry {
                element: e.clone(),
                norm,
                depth: depth(ball, e, cap)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DepthProfile {
        radius: ball.radius(),
        entries,
    })
}

impl DepthProfile {
    pub fn get(&self, e: &Element) -> Option<DepthValue> {
        self.entries.iter().find(|x| x.element == *e).map(|x| x.depth)
    }

    pub fn max_per_norm(&self) -> Vec<DepthValue> {
        let mut out: Vec<Option<DepthValue>> = Vec::new();
        for entry in &self.entries {
            let n = entry.norm as usize;
            if out.len() <= n {
                out.resize(n + 1, None);
            }
            out[n] = Some(out[n].map_or(entry.depth, |d| d.max(entry.depth)));
        }
        out.into_iter().flatten().collect()
    }

    pub fn overall_max(&self) -> Option<DepthValue> {
        self.entries.iter().map(|e| e.depth).reduce(DepthValue::max)
    }

    pub fn max_finite(&self) -> Option<u32> {
        self.entries
            .iter()
            .filter_map(|e| match e.depth {
                DepthValue::Finite(k) => Some(k),
                _ => None,
            })
            .max()
    }

    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            radius: self.radius,
            elements: self.entries.len(),
            max_depth_per_norm: self.max_per_norm(),
            max_depth: self.overall_max().unwrap_or(DepthValue::Infinite),
            max_finite_depth: self.max_finite(),
            dead_ends: self
                .entries
                .iter()
                .filter(|e| e.depth.is_at_least(2))
                .count(),
        }
    }

    /// Elements on which the two profiles disagree (in norm or depth), plus
    /// elements present in only one of them.
    pub fn mismatches(&self, other: &DepthProfile) -> Vec<Element> {
        let theirs: HashMap<&Element, &DepthEntry> =
            other.entries.iter().map(|e| (&e.element, e)).collect();
        let mut out: Vec<Element> = self
            .entries
            .iter()
            .filter(|e| theirs.get(&e.element).map_or(true, |o| o.norm != e.norm || o.depth != e.depth))
            .map(|e| e.element.clone())
            .collect();
        let ours: HashSet<&Element> = self.entries.iter().map(|e| &e.element).collect();
        out.extend(
            other
                .entries
                .iter()
                .filter(|e| !ours.contains(&e.element))
                .map(|e| e.element.clone()),
        );
        out
    }

    /// Writes `(element, norm, depth)` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["element", "norm", "depth"])?;
        for e in &self.entries {
            writer.write_record([e.element.to_string(), e.norm.to_string(), e.depth.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::Budget;
    use crate::group::{GeneratingSet, Group};

    fn ball_for(group: Group, gens: &str, r: u32) -> Ball {
        Ball::build(&GeneratingSet::parse(&group, gens).unwrap(), r, &Budget::default()).unwrap()
    }

    #[test]
    fn integers_have_depth_one() {
        let b = ball_for(Group::integers(), "1", 201);
        assert_eq!(depth(&b, &Element::Int(5), 10).unwrap(), DepthValue::Finite(1));
        for v in -200..=200 {
            assert_eq!(depth(&b, &Element::Int(v), 5).unwrap(), DepthValue::Finite(1));
        }
        let p = depth_profile(&ball_for(Group::integers(), "1", 50), 5).unwrap();
        assert!(p.entries.iter().all(|e| e.depth == DepthValue::Finite(1)));
    }

    #[test]
    fn cyclic_extremal_element_is_infinite() {
        let b = ball_for(Group::cyclic(10).unwrap(), "1", 5);
        assert_eq!(depth(&b, &Element::Residue(5), 100).unwrap(), DepthValue::Infinite);
        assert_eq!(depth(&b, &Element::Residue(0), 100).unwrap(), DepthValue::Finite(1));
        // 4 has norm 4; its neighbour 5 has norm 5
        assert_eq!(depth(&b, &Element::Residue(4), 100).unwrap(), DepthValue::Finite(1));
    }

    #[test]
    fn cyclic_eleven_profile() {
        let b = ball_for(Group::cyclic(11).unwrap(), "1", 5);
        let p = depth_profile(&b, 20).unwrap();
        for e in &p.entries {
            if e.norm == 5 {
                assert_eq!(e.depth, DepthValue::Infinite);
            } else {
                assert!(matches!(e.depth, DepthValue::Finite(k) if k >= 1));
            }
        }
        assert_eq!(p.overall_max(), Some(DepthValue::Infinite));
    }

    #[test]
    fn trivial_group_identity_is_infinite() {
        let g = Group::cyclic(1).unwrap();
        let b = Ball::build(&GeneratingSet::new(&g, vec![]).unwrap(), 3, &Budget::default()).unwrap();
        assert_eq!(depth(&b, &g.identity(), 5).unwrap(), DepthValue::Infinite);
    }

    #[test]
    fn cap_semantics_are_monotone() {
        let b = ball_for(Group::lamplighter(), "t,a", 8);
        let p = depth_profile(&b, 17).unwrap();
        for e in p.entries.iter().filter(|e| e.norm <= 6) {
            if let DepthValue::Finite(k) = e.depth {
                assert_eq!(depth(&b, &e.element, k - 1).unwrap(), DepthValue::AtLeast(k - 1));
                assert_eq!(depth(&b, &e.element, k).unwrap(), DepthValue::Finite(k));
            }
        }
    }

    #[test]
    fn precondition_violation() {
        let b = ball_for(Group::integers(), "1", 3);
        assert!(matches!(depth(&b, &Element::Int(7), 5), Err(Error::NotInBall(_))));
    }

    #[test]
    fn value_ordering_and_display() {
        use DepthValue::*;
        assert_eq!(Finite(3).max(AtLeast(3)), AtLeast(3));
        assert_eq!(Finite(4).max(AtLeast(3)), Finite(4));
        assert_eq!(Finite(4).max(Infinite), Infinite);
        assert_eq!(
            [Finite(2), AtLeast(5), Infinite].map(|d| d.to_string()),
            ["2", ">=5", "inf"]
        );
        assert!(Infinite.is_at_least(100));
        assert!(!Finite(2).is_at_least(3));
    }

    #[test]
    fn csv_columns() {
        let p = depth_profile(&ball_for(Group::cyclic(3).unwrap(), "1", 1), 5).unwrap();
        let mut out = Vec::new();
        p.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "element,norm,depth\n0,0,1\n1,1,inf\n2,1,inf\n");
    }
}
