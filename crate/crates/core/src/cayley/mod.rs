//! Balls, norms and geodesics in Cayley graphs.
//!
//! A [`Ball`] is built by breadth-first search from the identity over the
//! symmetrized generating set. The frontier is processed FIFO and neighbors
//! are generated in generating-set order with the positive letter first, so
//! the table, the parent links and hence every geodesic are deterministic.

mod cache;

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

pub use cache::BallCache;

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group, Letter, Word};

/// Resource limits for a ball computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: usize,
    pub max_radius: u32,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: 10_000_000,
            max_radius: 10_000,
            max_time: Duration::from_secs(600),
        }
    }
}

impl Budget {
    pub fn new(max_elements: usize, max_radius: u32, max_time: Duration) -> Result<Budget> {
        if max_elements == 0 || max_radius == 0 || max_time.is_zero() {
            return Err(Error::Params("budget limits must be positive".into()));
        }
        Ok(Budget {
            max_elements,
            max_radius,
            max_time,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Node {
    pub element: Element,
    pub distance: u32,
    /// Index of the discovering node and the letter that leads from it here.
    pub parent: Option<(u32, Letter)>,
}

/// The closed ball of a given radius about the identity, with exact
/// distances and BFS parent links.
#[derive(Clone, Debug)]
pub struct Ball {
    gens: GeneratingSet,
    radius: u32,
    nodes: Vec<Node>,
    index: HashMap<Element, u32>,
    sphere_sizes: Vec<usize>,
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.radius == other.radius && self.nodes == other.nodes
    }
}

/// Computes the closed ball of radius `radius` about the identity.
pub fn ball(gens: &GeneratingSet, radius: u32, budget: &Budget) -> Result<Ball> {
    Ball::build(gens, radius, budget)
}

impl Ball {
    pub fn build(gens: &GeneratingSet, radius: u32, budget: &Budget) -> Result<Ball> {
        let group = gens.group();
        if gens.is_empty() && group.order() != Some(1) {
            return Err(Error::InvalidGenerators(
                "empty generating set for a nontrivial group".into(),
            ));
        }
        let started = Instant::now();
        let identity = group.identity();
        let mut nodes = vec![Node {
            element: identity.clone(),
            distance: 0,
            parent: None,
        }];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut sphere_sizes = vec![1usize];
        let mut layer_start = 0usize;
        let mut completed = 0u32;
        while completed < radius {
            let layer_end = nodes.len();
            if layer_start == layer_end {
                break;
            }
            if completed >= budget.max_radius {
                return Err(Error::BudgetExhausted {
                    radius_reached: completed,
                    reason: format!("radius limit {}", budget.max_radius),
                });
            }
            for current in layer_start..layer_end {
                for (step, letter) in gens.symmetric() {
                    let next = group.multiply(&nodes[current].element, step)?;
                    if index.contains_key(&next) {
                        continue;
                    }
                    if nodes.len() >= budget.max_elements {
                        return Err(Error::BudgetExhausted {
                            radius_reached: completed,
                            reason: format!("element limit {}", budget.max_elements),
                        });
                    }
                    index.insert(next.clone(), nodes.len() as u32);
                    nodes.push(Node {
                        element: next,
                        distance: completed + 1,
                        parent: Some((current as u32, *letter)),
                    });
                    if nodes.len() % 4096 == 0 && started.elapsed() > budget.max_time {
                        return Err(Error::BudgetExhausted {
                            radius_reached: completed,
                            reason: format!("time limit {:?}", budget.max_time),
                        });
                    }
                }
            }
            layer_start = layer_end;
            if nodes.len() > layer_end {
                sphere_sizes.push(nodes.len() - layer_end);
            }
            completed += 1;
        }
        Ok(Ball {
            gens: gens.clone(),
            radius,
            nodes,
            index,
            sphere_sizes,
        })
    }

    pub(crate) fn from_parts(gens: GeneratingSet, radius: u32, nodes: Vec<Node>) -> Result<Ball> {
        let mut index = HashMap::with_capacity(nodes.len());
        let mut sphere_sizes: Vec<usize> = Vec::new();
        for (i, node) in nodes.iter().enumerate() {
            let d = node.distance as usize;
            if d > radius as usize || d + 1 < sphere_sizes.len() || d > sphere_sizes.len() {
                return Err(Error::Cache(format!("node {i} breaks BFS distance order")));
            }
            if d == sphere_sizes.len() {
                sphere_sizes.push(0);
            }
            sphere_sizes[d] += 1;
            if let Some((p, _)) = node.parent {
                if p as usize >= i {
                    return Err(Error::Cache(format!("node {i} has a forward parent link")));
                }
            }
            if index.insert(node.element.clone(), i as u32).is_some() {
                return Err(Error::Cache(format!("node {i} duplicates an element")));
            }
        }
        if nodes.first().map(|n| &n.element) != Some(&gens.group().identity()) {
            return Err(Error::Cache("ball does not start at the identity".into()));
        }
        Ok(Ball {
            gens,
            radius,
            nodes,
            index,
            sphere_sizes,
        })
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn group(&self) -> &Group {
        self.gens.group()
    }

    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    /// The requested radius. For a finite group the actual eccentricity may
    /// be smaller; see [`Ball::sphere_sizes`].
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of elements at each distance `0..`; sums to [`Ball::len`].
    pub fn sphere_sizes(&self) -> &[usize] {
        &self.sphere_sizes
    }

    /// True when the ball is the whole (finite) group.
    pub fn is_exhaustive(&self) -> bool {
        self.group().order() == Some(self.len() as u64)
    }

    /// Word norm of `g`, or `None` when it exceeds the radius.
    pub fn norm(&self, g: &Element) -> Option<u32> {
        self.index.get(g).map(|&i| self.nodes[i as usize].distance)
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    /// Elements with their norms, in BFS order (hence sorted by norm).
    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.nodes.iter().map(|n| (&n.element, n.distance))
    }

    /// The elements of norm at most `r`: a prefix of the BFS order.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &Element> {
        let end: usize = self.sphere_sizes.iter().take(r as usize + 1).sum();
        self.nodes[..end].iter().map(|n| &n.element)
    }

    /// A word of length `norm(g)` spelling `g`, following first parents.
    pub fn geodesic(&self, g: &Element) -> Result<Word> {
        let mut i = *self
            .index
            .get(g)
            .ok_or_else(|| Error::NotInBall(g.clone()))?;
        let mut letters = Vec::with_capacity(self.nodes[i as usize].distance as usize);
        while let Some((parent, letter)) = self.nodes[i as usize].parent {
            letters.push(letter);
            i = parent;
        }
        letters.reverse();
        Ok(Word(letters))
    }

    /// Writes `(element, norm)` rows in BFS order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["element", "norm"])?;
        for (e, d) in self.iter() {
            writer.write_record([e.to_string(), d.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}
