//! Surjections onto finite groups, their diameters, and the search for a
//! quotient of large enough diameter.

mod diameter;
mod family;

use rand::Rng;
use serde::Serialize;

pub use diameter::{counting_bound_check, diameter, DiameterReport};
pub use family::{find_quotient, QuotientFamily, SearchMode};

use crate::cayley::{Ball, Budget};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group, Letter, Word};

/// Built-in homomorphisms that can be evaluated on any source element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NativeMap {
    /// `Z -> Z/m`, reduction.
    IntegersToCyclic,
    /// `Z^d -> Z/m`, `x -> sum(c_i x_i) mod m`.
    GridToCyclic { coefficients: Vec<i64> },
    /// `Z_2 wr Z -> Z/m`, cursor position mod m.
    LamplighterCursor,
    /// `Z/k -> Z/m` for `m | k`.
    CyclicReduction,
    /// `D_k -> D_m` for `m | k`, rotations reduced.
    DihedralReduction,
    /// `D_k -> Z/2`, the reflection bit.
    DihedralParity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvaluationMode {
    Native(NativeMap),
    /// Images are only known on generators; applying the map needs a word.
    WordBased,
}

/// A surjection from the group generated by `S` onto a finite target,
/// described by the images of the generators in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    source_gens: GeneratingSet,
    target: Group,
    images: Vec<Element>,
    mode: EvaluationMode,
    target_gens: GeneratingSet,
    /// For each target generator, the least source index mapping onto it.
    section: Vec<u32>,
}

impl QuotientMap {
    pub fn native(source_gens: &GeneratingSet, target: &Group, map: NativeMap) -> Result<QuotientMap> {
        check_native(source_gens.group(), target, &map)?;
        let images = source_gens
            .elements()
            .map(|s| eval_native(&map, target, s))
            .collect::<Result<Vec<_>>>()?;
        QuotientMap::assemble(source_gens, target, images, EvaluationMode::Native(map))
    }

    pub fn word_based(source_gens: &GeneratingSet, target: &Group, images: Vec<Element>) -> Result<QuotientMap> {
        if images.len() != source_gens.len() {
            return Err(Error::Quotient(format!(
                "{} images given for {} generators",
                images.len(),
                source_gens.len()
            )));
        }
        QuotientMap::assemble(source_gens, target, images, EvaluationMode::WordBased)
    }

    /// The natural map onto `Z/m`: reduction for `Z` and `Z/k`, coordinate
    /// sum for `Z^d`, cursor position for the lamplighter group, reflection
    /// bit for dihedral groups (only `m = 2`).
    pub fn onto_cyclic(source_gens: &GeneratingSet, m: u64) -> Result<QuotientMap> {
        let target = Group::cyclic(m)?;
        let map = match source_gens.group() {
            Group::IntegerLine { .. } => NativeMap::IntegersToCyclic,
            Group::IntegerGrid { rank, .. } => NativeMap::GridToCyclic {
                coefficients: vec![1; *rank],
            },
            Group::Lamplighter { .. } => NativeMap::LamplighterCursor,
            Group::Cyclic { .. } => NativeMap::CyclicReduction,
            Group::Dihedral { .. } => NativeMap::DihedralParity,
            Group::Table(_) => {
                return Err(Error::Quotient(
                    "table groups need explicit word-based images".into(),
                ))
            }
        };
        QuotientMap::native(source_gens, &target, map)
    }

    fn assemble(
        source_gens: &GeneratingSet,
        target: &Group,
        images: Vec<Element>,
        mode: EvaluationMode,
    ) -> Result<QuotientMap> {
        if !target.is_finite() {
            return Err(Error::Quotient(format!("target {target} is not finite")));
        }
        let mut distinct: Vec<Element> = Vec::new();
        let mut section = Vec::new();
        for (i, image) in images.iter().enumerate() {
            if !target.contains(image) {
                return Err(Error::ForeignElement {
                    element: image.to_string(),
                    group: target.to_string(),
                });
            }
            if !target.is_identity(image) && !distinct.contains(image) {
                distinct.push(image.clone());
                section.push(i as u32);
            }
        }
        let target_gens = GeneratingSet::with_labels(
            target,
            distinct
                .into_iter()
                .zip(&section)
                .map(|(element, &i)| crate::group::Generator {
                    label: format!("π({})", source_gens.generators()[i as usize].label),
                    element,
                })
                .collect(),
        )?;
        Ok(QuotientMap {
            source_gens: source_gens.clone(),
            target: target.clone(),
            images,
            mode,
            target_gens,
            section,
        })
    }

    pub fn source(&self) -> &Group {
        self.source_gens.group()
    }

    pub fn source_gens(&self) -> &GeneratingSet {
        &self.source_gens
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn target_order(&self) -> u64 {
        self.target.order().expect("target is finite")
    }

    pub fn mode(&self) -> &EvaluationMode {
        &self.mode
    }

    /// Images of the source generators, one per entry of `S` (may repeat or
    /// include the identity).
    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// `T = π(S)` as a generating set of the target: distinct non-identity
    /// images in order of first appearance.
    pub fn target_gens(&self) -> &GeneratingSet {
        &self.target_gens
    }

    /// Whether `x` lies in `π(S)`, identity included when some generator
    /// maps to it.
    pub fn in_image_of_gens(&self, x: &Element) -> bool {
        self.images.contains(x)
    }

    /// Lifts a target letter to the source letter of least index with the
    /// same image.
    pub fn lift_letter(&self, letter: Letter) -> Letter {
        Letter {
            index: self.section[letter.index as usize],
            inverse: letter.inverse,
        }
    }

    pub fn lift_word(&self, word: &Word) -> Word {
        word.letters().iter().map(|&l| self.lift_letter(l)).collect()
    }

    /// Image of a source word: the product of generator images.
    pub fn apply_word(&self, word: &Word) -> Result<Element> {
        let mut acc = self.target.identity();
        for &letter in word.letters() {
            let image = self.images.get(letter.index as usize).ok_or(Error::LetterOutOfRange {
                index: letter.index,
                len: self.images.len(),
            })?;
            let step = if letter.inverse {
                self.target.invert(image)?
            } else {
                image.clone()
            };
            acc = self.target.multiply(&acc, &step)?;
        }
        Ok(acc)
    }

    /// Image of `g`. A hint, when given, must spell `g` over `S`; word-based
    /// maps require one.
    pub fn apply(&self, g: &Element, word_hint: Option<&Word>) -> Result<Element> {
        if let Some(word) = word_hint {
            let value = self.source_gens.evaluate(word)?;
            if value != *g {
                return Err(Error::Quotient(format!(
                    "word hint evaluates to {value}, not {g}"
                )));
            }
        }
        match (&self.mode, word_hint) {
            (EvaluationMode::Native(map), _) => {
                if !self.source().contains(g) {
                    return Err(Error::ForeignElement {
                        element: g.to_string(),
                        group: self.source().to_string(),
                    });
                }
                eval_native(map, &self.target, g)
            }
            (EvaluationMode::WordBased, Some(word)) => self.apply_word(word),
            (EvaluationMode::WordBased, None) => Err(Error::Quotient(
                "word-based quotient maps need a word hint".into(),
            )),
        }
    }

    /// Image of an element recorded in an `S`-ball, using its geodesic as the
    /// hint when the map is word-based.
    pub fn apply_in_ball(&self, ball: &Ball, g: &Element) -> Result<Element> {
        match self.mode {
            EvaluationMode::Native(_) => self.apply(g, None),
            EvaluationMode::WordBased => self.apply_word(&ball.geodesic(g)?),
        }
    }

    /// True when the generator images generate the whole target.
    pub fn is_surjective(&self) -> bool {
        diameter::closure_size(&self.target_gens).is_ok_and(|n| n == self.target_order())
    }

    /// Checks the homomorphism law.
    ///
    /// Every element of the `S`-ball of radius `radius` gets the image of its
    /// geodesic, and each edge `x -> x s` must satisfy
    /// `f(x s) = f(x) f(s)`. For a finite source with `radius` at least its
    /// diameter this is exhaustive. Native maps are also compared against the
    /// word images and sampled on `samples` random pairs of words.
    pub fn check_homomorphism<R: Rng>(&self, radius: u32, samples: usize, rng: &mut R) -> Result<()> {
        let ball = Ball::build(&self.source_gens, radius, &Budget::default())?;
        let source = self.source();
        let mut image_of = std::collections::HashMap::with_capacity(ball.len());
        for (x, _) in ball.iter() {
            let by_word = self.apply_word(&ball.geodesic(x)?)?;
            if let EvaluationMode::Native(_) = self.mode {
                let native = self.apply(x, None)?;
                if native != by_word {
                    return Err(Error::Quotient(format!(
                        "native image {native} of {x} disagrees with word image {by_word}"
                    )));
                }
            }
            image_of.insert(x.clone(), by_word);
        }
        for (x, _) in ball.iter() {
            for (step, letter) in self.source_gens.symmetric() {
                let y = source.multiply(x, step)?;
                if let Some(fy) = image_of.get(&y) {
                    let expected = self.target.multiply(&image_of[x], &self.apply_word(&Word(vec![*letter]))?)?;
                    if *fy != expected {
                        return Err(Error::Quotient(format!(
                            "homomorphism law fails on the edge {x} -> {y}"
                        )));
                    }
                }
            }
        }
        if let EvaluationMode::Native(_) = self.mode {
            let random_word = |rng: &mut R| -> Word {
                let len = rng.gen_range(0..16);
                (0..len)
                    .map(|_| Letter {
                        index: rng.gen_range(0..self.source_gens.len() as u32),
                        inverse: rng.gen(),
                    })
                    .collect()
            };
            for _ in 0..samples {
                let (u, v) = (random_word(rng), random_word(rng));
                let x = self.source_gens.evaluate(&u)?;
                let y = self.source_gens.evaluate(&v)?;
                let xy = source.multiply(&x, &y)?;
                let lhs = self.apply(&xy, None)?;
                let rhs = self.target.multiply(&self.apply(&x, None)?, &self.apply(&y, None)?)?;
                if lhs != rhs || self.apply(&x, Some(&u))? != self.apply_word(&u)? {
                    return Err(Error::Quotient(format!(
                        "homomorphism law fails on ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_native(source: &Group, target: &Group, map: &NativeMap) -> Result<()> {
    let ok = match (map, source, target) {
        (NativeMap::IntegersToCyclic, Group::IntegerLine { .. }, Group::Cyclic { .. }) => true,
        (NativeMap::GridToCyclic { coefficients }, Group::IntegerGrid { rank, .. }, Group::Cyclic { .. }) => {
            coefficients.len() == *rank
        }
        (NativeMap::LamplighterCursor, Group::Lamplighter { .. }, Group::Cyclic { .. }) => true,
        (NativeMap::CyclicReduction, Group::Cyclic { order: k }, Group::Cyclic { order: m }) => k % m == 0,
        (NativeMap::DihedralReduction, Group::Dihedral { sides: k }, Group::Dihedral { sides: m }) => {
            k % m == 0
        }
        (NativeMap::DihedralParity, Group::Dihedral { .. }, Group::Cyclic { order: 2 }) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Quotient(format!(
            "{map:?} is not a homomorphism from {source} to {target}"
        )))
    }
}

fn eval_native(map: &NativeMap, target: &Group, g: &Element) -> Result<Element> {
    let m = match target {
        Group::Cyclic { order } => *order,
        Group::Dihedral { sides } => *sides,
        _ => unreachable!("checked by check_native"),
    };
    let reduce = |v: i128| v.rem_euclid(m as i128) as u64;
    Ok(match (map, g) {
        (NativeMap::IntegersToCyclic, Element::Int(v)) => Element::Residue(reduce(*v as i128)),
        (NativeMap::GridToCyclic { coefficients }, Element::Vector(x)) => {
            let mut acc: i128 = 0;
            for (c, v) in coefficients.iter().zip(x.iter()) {
                acc = (acc + reduce(*c as i128) as i128 * reduce(*v as i128) as i128) % m as i128;
            }
            Element::Residue(acc as u64)
        }
        (NativeMap::LamplighterCursor, Element::Lamplighter { cursor, .. }) => {
            Element::Residue(reduce(*cursor as i128))
        }
        (NativeMap::CyclicReduction, Element::Residue(r)) => Element::Residue(r % m),
        (
            NativeMap::DihedralReduction,
            Element::Dihedral {
                rotation,
                reflection,
            },
        ) => Element::Dihedral {
            rotation: rotation % m,
            reflection: *reflection,
        },
        (NativeMap::DihedralParity, Element::Dihedral { reflection, .. }) => {
            Element::Residue(*reflection as u64)
        }
        _ => {
            return Err(Error::ForeignElement {
                element: g.to_string(),
                group: format!("source of {map:?}"),
            })
        }
    })
}
