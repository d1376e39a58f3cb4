use std::fmt;

use crate::error::{Error, Result};

use super::{Element, Group};

/// One letter of a word: a generator index, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(index: u32) -> Letter {
        Letter {
            index,
            inverse: false,
        }
    }

    pub fn neg(index: u32) -> Letter {
        Letter {
            index,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Letter {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// 1-based signed form: generator 0 is `+1` / `-1`.
    pub fn to_signed(self) -> i64 {
        let v = self.index as i64 + 1;
        if self.inverse {
            -v
        } else {
            v
        }
    }

    pub fn from_signed(v: i64) -> Result<Letter> {
        if v == 0 || v.unsigned_abs() > u32::MAX as u64 {
            return Err(Error::Parse(format!("bad signed letter {v}")));
        }
        Ok(Letter {
            index: (v.unsigned_abs() - 1) as u32,
            inverse: v < 0,
        })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.to_signed())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The word spelling the inverse element.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub element: Element,
    pub label: String,
}

/// An ordered list of distinct non-identity generators. Metric code always
/// works with the symmetrized view (each generator followed by its inverse).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    group: Group,
    generators: Vec<Generator>,
    symmetric: Vec<(Element, Letter)>,
}

impl GeneratingSet {
    /// Labels default to the element's display form.
    pub fn new(group: &Group, elements: Vec<Element>) -> Result<GeneratingSet> {
        let generators = elements
            .into_iter()
            .map(|element| Generator {
                label: element.to_string(),
                element,
            })
            .collect();
        GeneratingSet::with_labels(group, generators)
    }

    pub fn with_labels(group: &Group, generators: Vec<Generator>) -> Result<GeneratingSet> {
        if generators.len() > u32::MAX as usize {
            return Err(Error::InvalidGenerators("too many generators".into()));
        }
        let mut symmetric = Vec::with_capacity(2 * generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !group.contains(&g.element) {
                return Err(Error::ForeignElement {
                    element: g.element.to_string(),
                    group: group.to_string(),
                });
            }
            if group.is_identity(&g.element) {
                return Err(Error::InvalidGenerators(format!(
                    "generator {} is the identity",
                    g.label
                )));
            }
            if generators[..i].iter().any(|h| h.element == g.element) {
                return Err(Error::InvalidGenerators(format!(
                    "duplicate generator {}",
                    g.label
                )));
            }
            symmetric.push((g.element.clone(), Letter::pos(i as u32)));
            symmetric.push((group.invert(&g.element)?, Letter::neg(i as u32)));
        }
        Ok(GeneratingSet {
            group: group.clone(),
            generators,
            symmetric,
        })
    }

    /// Parses a comma-separated list of elements, e.g. `2,3` or `t,a`.
    pub fn parse(group: &Group, text: &str) -> Result<GeneratingSet> {
        let elements = super::split_top_level(text)
            .into_iter()
            .map(|part| group.parse_element(part))
            .collect::<Result<Vec<_>>>()?;
        GeneratingSet::new(group, elements)
    }

    pub fn standard(group: &Group) -> Result<GeneratingSet> {
        GeneratingSet::new(group, group.standard_generators()?)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.generators.iter().map(|g| &g.element)
    }

    pub fn get(&self, index: usize) -> Option<&Element> {
        self.generators.get(index).map(|g| &g.element)
    }

    pub fn position(&self, element: &Element) -> Option<usize> {
        self.generators.iter().position(|g| g.element == *element)
    }

    /// Generators interleaved with their inverses, in BFS neighbor order:
    /// generator order, positive before negative.
    pub fn symmetric(&self) -> &[(Element, Letter)] {
        &self.symmetric
    }

    /// The element a single letter stands for.
    pub fn letter_value(&self, letter: Letter) -> Result<&Element> {
        let i = letter.index as usize;
        if i >= self.generators.len() {
            return Err(Error::LetterOutOfRange {
                index: letter.index,
                len: self.generators.len(),
            });
        }
        Ok(&self.symmetric[2 * i + letter.inverse as usize].0)
    }

    /// Product of the word's letters, left to right. The empty word is the
    /// identity.
    pub fn evaluate(&self, word: &Word) -> Result<Element> {
        let mut acc = self.group.identity();
        for &letter in word.letters() {
            acc = self.group.multiply(&acc, self.letter_value(letter)?)?;
        }
        Ok(acc)
    }

    /// `S ∪ S^-1` as an explicit generating set, without duplicates.
    pub fn symmetrized(&self) -> Result<GeneratingSet> {
        let mut elements: Vec<Element> = Vec::with_capacity(self.symmetric.len());
        for (e, _) in &self.symmetric {
            if !elements.contains(e) {
                elements.push(e.clone());
            }
        }
        GeneratingSet::new(&self.group, elements)
    }

    /// Renders a word with generator labels, e.g. `t a t^-1`.
    pub fn spell(&self, word: &Word) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.letters()
            .iter()
            .map(|l| {
                let label = self
                    .generators
                    .get(l.index as usize)
                    .map_or("?", |g| g.label.as_str());
                if l.inverse {
                    format!("{label}^-1")
                } else {
                    label.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}
