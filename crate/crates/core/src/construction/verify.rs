use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{factorize, Construction};
use crate::depth::{depth, DepthValue};
use crate::error::{Error, Result};
use crate::group::{Element, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifiedElement {
    pub element: Element,
    pub distance_from_witness: u32,
    /// `|g|_A` from the `A`-ball of radius `n`.
    pub a_norm: u32,
    /// Length of the certificate, an upper bound on `|g|_A`.
    pub k: u32,
    pub certificate_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Every element within this `A`-distance of the witness was checked.
    pub radius: u32,
    pub witness: Element,
    pub witness_a_norm: u32,
    pub elements: Vec<VerifiedElement>,
    pub max_a_norm: u32,
    pub min_k: u32,
    /// Depth of the witness under `A`, searched up to `2n + 1` steps.
    pub witness_depth: DepthValue,
    /// `radius + 1`.
    pub certified_depth: u32,
}

/// BFS from the witness over `A^±1` up to `radius` steps, returning each
/// element with an `A`-word leading to it from the witness.
fn neighbourhood(ctx: &Construction, radius: u32) -> Result<Vec<(Element, Word)>> {
    let a = ctx.generating_set.gens();
    let group = a.group();
    let start = ctx.witness.element.clone();
    let mut parents: HashMap<Element, Option<(usize, Letter)>> = HashMap::from([(start.clone(), None)]);
    let mut order: Vec<(Element, u32)> = vec![(start.clone(), 0)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (x, dist) = order[i].clone();
        if dist == radius {
            continue;
        }
        for (step, letter) in a.symmetric() {
            let y = group.multiply(&x, step)?;
            if !parents.contains_key(&y) {
                parents.insert(y.clone(), Some((i, *letter)));
                order.push((y, dist + 1));
                queue.push_back(order.len() - 1);
            }
        }
    }
    order
        .iter()
        .map(|(x, _)| {
            let mut letters = Vec::new();
            let mut cursor = x;
            while let Some(Some((parent, letter))) = parents.get(cursor) {
                letters.push(*letter);
                cursor = &order[*parent].0;
            }
            letters.reverse();
            Ok((x.clone(), Word(letters)))
        })
        .collect()
}

/// An `A`-word from the witness to `g` of length at most `radius`, if any.
pub(super) fn a_path_from_witness(ctx: &Construction, g: &Element, radius: u32) -> Result<Option<Word>> {
    Ok(neighbourhood(ctx, radius)?
        .into_iter()
        .find(|(x, _)| x == g)
        .map(|(_, w)| w))
}

/// Checks that every element within `A`-distance `radius <= d` of the
/// witness has `A`-norm at most `n`, once from the `A`-ball and once through
/// a validated certificate, so the witness has depth at least `radius + 1`.
/// The depth found by direct search must agree.
pub fn verify_construction(ctx: &Construction, radius: u32) -> Result<VerificationReport> {
    let params = &ctx.params;
    if radius > params.d {
        return Err(Error::Params(format!(
            "can only verify up to the slack d = {}, got {radius}",
            params.d
        )));
    }
    let n = params.n;
    let witness = &ctx.witness;
    let witness_a_norm = ctx
        .a_ball
        .norm(&witness.element)
        .ok_or_else(|| Error::Verification("witness is outside the A-ball".into()))?;
    if witness_a_norm != n {
        return Err(Error::Verification(format!(
            "witness has A-norm {witness_a_norm}, expected {n}"
        )));
    }

    let mut failures: Vec<String> = Vec::new();
    let mut elements = Vec::new();
    for (g, a_word) in neighbourhood(ctx, radius)? {
        let distance = a_word.len() as u32;
        let s_word = witness.s_word.concat(&ctx.generating_set.spell_word(&a_word));
        let a_norm = ctx.a_ball.norm(&g);
        if a_norm.is_none() {
            failures.push(format!("{g}: A-norm exceeds {n}"));
        }
        let certificate = match factorize(ctx, &g, &s_word) {
            Ok(c) if c.degenerate => {
                failures.push(format!("{g}: maps to the identity of the quotient"));
                continue;
            }
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{g}: {e}"));
                continue;
            }
        };
        if certificate.k + distance < n {
            failures.push(format!("{g}: k = {} below n - {distance}", certificate.k));
        }
        if certificate.k > n {
            failures.push(format!("{g}: k = {} exceeds n", certificate.k));
        }
        if let Some(norm) = a_norm {
            if norm > certificate.k {
                failures.push(format!("{g}: A-norm {norm} exceeds certificate length {}", certificate.k));
            }
        }
        elements.push(VerifiedElement {
            element: g,
            distance_from_witness: distance,
            a_norm: a_norm.unwrap_or(u32::MAX),
            k: certificate.k,
            certificate_digest: certificate.digest()?,
        });
    }

    let witness_depth = depth(&ctx.a_ball, &witness.element, 2 * n + 1)?;
    if !witness_depth.is_at_least(radius + 1) {
        failures.push(format!(
            "direct search gives depth {witness_depth} for the witness, below {}",
            radius + 1
        ));
    }
    if !failures.is_empty() {
        failures.sort();
        return Err(Error::Verification(format!(
            "{} failure(s): {}",
            failures.len(),
            failures.join("; ")
        )));
    }
    Ok(VerificationReport {
        radius,
        witness: witness.element.clone(),
        witness_a_norm,
        max_a_norm: elements.iter().map(|e| e.a_norm).max().unwrap_or(0),
        min_k: elements.iter().map(|e| e.k).min().unwrap_or(0),
        elements,
        witness_depth,
        certified_depth: radius + 1,
    })
}
