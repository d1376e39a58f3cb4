//! Generating sets with deep dead ends.
//!
//! Given `S` generating `G` and a finite quotient `π: G -> H` of diameter
//! `n` under `T = π(S)`, the new generating set `A` consists of the elements
//! of the `S`-ball of radius `N` whose image lies in `T`. Any preimage `g_n`
//! of an element of `H` at `T`-distance `n` then has `A`-norm exactly `n`,
//! and every element within `A`-distance `d` of `g_n` has `A`-norm at most
//! `n`, so `g_n` has depth at least `d + 1`. The upper bound is witnessed
//! by explicit factorizations ([`Certificate`]).

mod certificate;
mod params;
mod verify;

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

pub use certificate::{factorize, Certificate};
pub use params::{
    length_inequality_holds, required_ball_radius, required_n, BoundMode, ConstructionParams,
};
pub use verify::{verify_construction, VerificationReport, VerifiedElement};

use crate::cayley::{Ball, Budget};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Letter, Word};
use crate::quotient::{diameter, find_quotient, DiameterReport, QuotientFamily, QuotientMap, SearchMode};

/// The generating set `A` with the data needed to spell its members over `S`.
#[derive(Clone, Debug)]
pub struct ConstructedGenSet {
    gens: GeneratingSet,
    /// An `S`-geodesic for each member of `A`.
    s_words: Vec<Word>,
    images: Vec<Element>,
    /// `A ∪ A^-1`.
    members: HashSet<Element>,
    ball_size: usize,
    inverse_pairs: usize,
    identity_dropped: bool,
}

impl ConstructedGenSet {
    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn s_word(&self, index: usize) -> &Word {
        &self.s_words[index]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Whether `x` or its inverse is a member of `A`.
    pub fn contains_symmetric(&self, x: &Element) -> bool {
        self.members.contains(x)
    }

    /// `S`-spelling of an `A`-letter.
    pub fn spell_letter(&self, letter: Letter) -> Word {
        let word = &self.s_words[letter.index as usize];
        if letter.inverse {
            word.inverse()
        } else {
            word.clone()
        }
    }

    /// `S`-spelling of an `A`-word.
    pub fn spell_word(&self, word: &Word) -> Word {
        word.letters().iter().flat_map(|&l| self.spell_letter(l).0).collect()
    }

    /// Elements of the `S`-ball that were left out because their inverse is
    /// already in `A`.
    pub fn inverse_pairs(&self) -> usize {
        self.inverse_pairs
    }

    pub fn identity_dropped(&self) -> bool {
        self.identity_dropped
    }

    pub fn ball_size(&self) -> usize {
        self.ball_size
    }
}

/// Builds `A = B_S(N) ∩ π^-1(π(S))` minus the identity, in BFS order.
///
/// Generating sets are stored without inverse pairs, so an element whose
/// inverse was found earlier is not listed again; metric code symmetrizes.
pub fn build_generating_set(
    s: &GeneratingSet,
    pi: &QuotientMap,
    params: &ConstructionParams,
    budget: &Budget,
) -> Result<ConstructedGenSet> {
    if pi.source_gens() != s {
        return Err(Error::Quotient(
            "quotient map is defined on a different generating set".into(),
        ));
    }
    if !pi.is_surjective() {
        return Err(Error::Quotient(format!("map onto {} is not surjective", pi.target())));
    }
    let group = s.group();
    let radius = u32::try_from(params.ball_radius).map_err(|_| Error::Overflow { bits: 32 })?;
    let s_ball = Ball::build(s, radius, budget)?;
    let mut elements = Vec::new();
    let mut s_words = Vec::new();
    let mut images = Vec::new();
    let mut members = HashSet::new();
    let mut inverse_pairs = 0;
    let mut identity_dropped = false;
    for (x, _) in s_ball.iter() {
        let image = pi.apply_in_ball(&s_ball, x)?;
        if !pi.in_image_of_gens(&image) {
            continue;
        }
        if group.is_identity(x) {
            log::warn!("the identity maps into π(S) and is left out of the generating set");
            identity_dropped = true;
            continue;
        }
        if members.contains(x) {
            inverse_pairs += 1;
            continue;
        }
        members.insert(group.invert(x)?);
        members.insert(x.clone());
        s_words.push(s_ball.geodesic(x)?);
        elements.push(x.clone());
        images.push(image);
    }
    let gens = GeneratingSet::new(group, elements)?;
    if let Some(missing) = s.elements().find(|x| !members.contains(*x)) {
        return Err(Error::Verification(format!(
            "generator {missing} of S is missing from the constructed set"
        )));
    }
    Ok(ConstructedGenSet {
        gens,
        s_words,
        images,
        members,
        ball_size: s_ball.len(),
        inverse_pairs,
        identity_dropped,
    })
}

/// Minimal lifts: for each element `h` of the target, an `S`-word of length
/// `|h|_T` mapping to `h`, obtained by lifting a `T`-geodesic letter by
/// letter through the canonical section.
#[derive(Clone, Debug)]
pub struct PhiTable {
    quotient: QuotientMap,
    target_ball: Ball,
}

pub fn phi_table(pi: &QuotientMap, budget: &Budget) -> Result<PhiTable> {
    let report = diameter(pi.target_gens())?;
    let target_ball = Ball::build(pi.target_gens(), report.diameter, budget)?;
    if !target_ball.is_exhaustive() {
        return Err(Error::Verification(format!(
            "target ball of radius {} misses elements of {}",
            report.diameter,
            pi.target()
        )));
    }
    Ok(PhiTable {
        quotient: pi.clone(),
        target_ball,
    })
}

impl PhiTable {
    pub fn diameter(&self) -> u32 {
        self.target_ball.radius()
    }

    pub fn len(&self) -> usize {
        self.target_ball.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target_ball.is_empty()
    }

    /// `|h|_T`.
    pub fn norm(&self, h: &Element) -> Result<u32> {
        self.target_ball
            .norm(h)
            .ok_or_else(|| Error::NotInBall(h.clone()))
    }

    /// A `T`-geodesic for `h`.
    pub fn geodesic(&self, h: &Element) -> Result<Word> {
        self.target_ball.geodesic(h)
    }

    /// `φ(h)` as an `S`-word.
    pub fn lift(&self, h: &Element) -> Result<Word> {
        Ok(self.quotient.lift_word(&self.geodesic(h)?))
    }

    /// `φ(h)` as an element of the source group.
    pub fn lift_element(&self, h: &Element) -> Result<Element> {
        self.quotient.source_gens().evaluate(&self.lift(h)?)
    }

    /// Every target element with its lift, in BFS order.
    pub fn entries(&self) -> Result<Vec<(Element, Word)>> {
        self.target_ball
            .iter()
            .map(|(h, _)| Ok((h.clone(), self.lift(h)?)))
            .collect()
    }
}

/// An element of `A`-norm exactly `n`, the claimed deep dead end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeadEndWitness {
    pub element: Element,
    /// Its image, an element of maximal `T`-length.
    pub image: Element,
    pub n: u32,
    /// Depth lower bound claimed for the witness.
    pub depth_bound: u32,
    /// Lifted `T`-geodesic spelling the witness over `S`.
    pub s_word: Word,
    pub a_norm: u32,
}

/// Lifts a `T`-geodesic of the diameter witness and confirms by BFS in the
/// `A`-ball that the lift has `A`-norm `n`.
pub fn find_witness(
    a: &ConstructedGenSet,
    phi: &PhiTable,
    report: &DiameterReport,
    a_ball: &Ball,
    params: &ConstructionParams,
) -> Result<DeadEndWitness> {
    let h = &report.witness;
    let n = phi.norm(h)?;
    if n != params.n || n != report.diameter {
        return Err(Error::Verification(format!(
            "quotient witness {h} has length {n}, expected {}",
            params.n
        )));
    }
    let s_word = phi.lift(h)?;
    let element = phi.quotient.source_gens().evaluate(&s_word)?;
    if a_ball.gens() != a.gens() || a_ball.radius() < n {
        return Err(Error::Params(format!("an A-ball of radius at least {n} is needed")));
    }
    let a_norm = a_ball.norm(&element).ok_or_else(|| {
        Error::Verification(format!("witness {element} has A-norm greater than {n}"))
    })?;
    if a_norm != n {
        return Err(Error::Verification(format!(
            "witness {element} has A-norm {a_norm}, expected {n}"
        )));
    }
    Ok(DeadEndWitness {
        element,
        image: h.clone(),
        n,
        depth_bound: params.target_depth,
        s_word,
        a_norm,
    })
}

/// How the quotient is chosen.
#[derive(Clone, Debug)]
pub enum QuotientChoice {
    /// Use this map; its diameter becomes `n`.
    Fixed(QuotientMap),
    /// Search the family for diameter at least `2d + 1`.
    Search { family: QuotientFamily, mode: SearchMode },
}

/// Everything produced by one run of the construction.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ConstructionParams,
    pub quotient: QuotientMap,
    pub quotient_report: DiameterReport,
    pub generating_set: ConstructedGenSet,
    pub phi: PhiTable,
    /// `A`-ball of radius `n`.
    pub a_ball: Ball,
    pub witness: DeadEndWitness,
}

impl Construction {
    pub fn build(
        s: &GeneratingSet,
        choice: QuotientChoice,
        target_depth: u32,
        bound_mode: BoundMode,
        budget: &Budget,
    ) -> Result<Construction> {
        let min_diameter = required_n(target_depth.saturating_sub(1))?;
        let (quotient, report) = match choice {
            QuotientChoice::Fixed(pi) => {
                let report = diameter(pi.target_gens())?;
                (pi, report)
            }
            QuotientChoice::Search { family, mode } => find_quotient(s, &family, min_diameter, mode)?,
        };
        if report.diameter < min_diameter {
            return Err(Error::Params(format!(
                "quotient {} has diameter {}, depth {target_depth} needs at least {min_diameter}",
                quotient.target(),
                report.diameter
            )));
        }
        let params = ConstructionParams::new(target_depth, report.diameter, bound_mode)?;
        Construction::with_params(s, quotient, report, params, budget)
    }

    pub fn with_params(
        s: &GeneratingSet,
        quotient: QuotientMap,
        quotient_report: DiameterReport,
        params: ConstructionParams,
        budget: &Budget,
    ) -> Result<Construction> {
        if quotient_report.diameter != params.n {
            return Err(Error::Params(format!(
                "quotient diameter {} differs from n = {}",
                quotient_report.diameter, params.n
            )));
        }
        let generating_set = build_generating_set(s, &quotient, &params, budget)?;
        let phi = phi_table(&quotient, budget)?;
        let a_ball = Ball::build(generating_set.gens(), params.n, budget)?;
        let witness = find_witness(&generating_set, &phi, &quotient_report, &a_ball, &params)?;
        Ok(Construction {
            params,
            quotient,
            quotient_report,
            generating_set,
            phi,
            a_ball,
            witness,
        })
    }

    pub fn source_gens(&self) -> &GeneratingSet {
        self.quotient.source_gens()
    }

    /// An `S`-word for `g`: through the witness when `g` is within
    /// `A`-distance `d` of it, otherwise an `S`-geodesic.
    pub fn s_word_for(&self, g: &Element, budget: &Budget) -> Result<Word> {
        if let Some(a_word) = verify::a_path_from_witness(self, g, self.params.d)? {
            return Ok(self.witness.s_word.concat(&self.generating_set.spell_word(&a_word)));
        }
        let limit = u32::try_from(self.params.word_length_limit()).map_err(|_| Error::Overflow { bits: 32 })?;
        let ball = Ball::build(self.source_gens(), limit, budget)?;
        ball.geodesic(g)
    }

    /// JSON payload describing the construction and its verification.
    pub fn report(&self, verification: &VerificationReport) -> Result<Value> {
        let a = &self.generating_set;
        Ok(json!({
            "params": self.params,
            "source_generators": self.source_gens(),
            "quotient": {
                "target": self.quotient.target(),
                "order": self.quotient.target_order().to_string(),
                "images": self.quotient.images(),
                "target_generators": self.quotient.target_gens(),
                "diameter": self.quotient_report,
            },
            "generating_set": {
                "size": a.len(),
                "elements": a.gens().elements().collect::<Vec<_>>(),
                "s_ball_size": a.ball_size(),
                "inverse_pairs_merged": a.inverse_pairs(),
                "identity_dropped": a.identity_dropped(),
            },
            "witness": self.witness,
            "verification": verification,
        }))
    }
}
