use serde::Serialize;

use super::Construction;
use crate::error::{Error, Result};
use crate::group::json::digest;
use crate::group::{Element, Letter, Word};

/// A factorization `g = v_1 ... v_k` with every `v_i` in `A^±1`, so that
/// `|g|_A <= k`.
///
/// An `S`-word for `g` is cut into pieces `u_1 ... u_k`, where `k` is the
/// `T`-length of `π(g)` and `t_1 ... t_k` a `T`-geodesic for it. With
/// `P_i = π(u_1 ... u_i)`, `Q_i = t_1 ... t_i` and `x_i = P_i^-1 Q_i`,
///
/// ```text
/// v_1 = u_1 φ(x_1),  v_i = φ(x_{i-1})^-1 u_i φ(x_i),  v_k = φ(x_{k-1})^-1 u_k
/// ```
///
/// and the middle terms cancel in the product. Each `v_i` maps to `t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub target: Element,
    pub k: u32,
    /// The `S`-word the pieces are cut from.
    pub word: Word,
    pub pieces: Vec<Word>,
    /// `t_1 ... t_k` over `T`.
    pub quotient_geodesic: Word,
    pub factors: Vec<Element>,
    /// `S`-words for the factors, built from the pieces and lifts.
    pub factor_words: Vec<Word>,
    /// Set when `π(g)` is the identity, where no factorization is produced.
    pub degenerate: bool,
}

/// Splits `word` into `k` consecutive pieces whose lengths differ by at most
/// one, longer pieces first.
fn split(word: &Word, k: usize) -> Vec<Word> {
    let (base, extra) = (word.len() / k, word.len() % k);
    let mut pieces = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        pieces.push(Word(word.letters()[start..start + len].to_vec()));
        start += len;
    }
    pieces
}

/// Factorizes `g`, given an `S`-word for it of length at most `n + dN`, and
/// validates the result.
pub fn factorize(ctx: &Construction, g: &Element, s_word: &Word) -> Result<Certificate> {
    let fail = |index, reason: String| Error::Certificate {
        element: g.to_string(),
        index,
        reason,
    };
    let limit = ctx.params.word_length_limit();
    if s_word.len() as u64 > limit {
        return Err(fail(0, format!("word of length {} exceeds n + dN = {limit}", s_word.len())));
    }
    let pi = &ctx.quotient;
    let image = pi.apply(g, Some(s_word))?;
    let k = ctx.phi.norm(&image)?;
    if k == 0 {
        return Ok(Certificate {
            target: g.clone(),
            k: 0,
            word: s_word.clone(),
            pieces: vec![],
            quotient_geodesic: Word::empty(),
            factors: vec![],
            factor_words: vec![],
            degenerate: true,
        });
    }
    let target = pi.target();
    let t_gens = pi.target_gens();
    let quotient_geodesic = ctx.phi.geodesic(&image)?;
    let pieces = split(s_word, k as usize);

    // lifts[i] = φ(x_i) for 1 <= i < k
    let mut lifts: Vec<Word> = Vec::with_capacity(k as usize);
    let mut p = target.identity();
    let mut q = target.identity();
    for i in 0..k as usize - 1 {
        p = target.multiply(&p, &pi.apply_word(&pieces[i])?)?;
        q = target.multiply(&q, t_gens.letter_value(quotient_geodesic.letters()[i])?)?;
        lifts.push(ctx.phi.lift(&target.left_divide(&p, &q)?)?);
    }
    let mut factor_words = Vec::with_capacity(k as usize);
    for (i, piece) in pieces.iter().enumerate() {
        let mut w = Word::empty();
        if i > 0 {
            w = lifts[i - 1].inverse();
        }
        w = w.concat(piece);
        if i + 1 < k as usize {
            w = w.concat(&lifts[i]);
        }
        factor_words.push(w);
    }
    let s = ctx.source_gens();
    let factors = factor_words
        .iter()
        .map(|w| s.evaluate(w))
        .collect::<Result<Vec<_>>>()?;
    let certificate = Certificate {
        target: g.clone(),
        k,
        word: s_word.clone(),
        pieces,
        quotient_geodesic,
        factors,
        factor_words,
        degenerate: false,
    };
    certificate.validate(ctx)?;
    Ok(certificate)
}

impl Certificate {
    /// Re-checks every claim of the certificate from scratch.
    pub fn validate(&self, ctx: &Construction) -> Result<()> {
        let fail = |index, reason: String| Error::Certificate {
            element: self.target.to_string(),
            index,
            reason,
        };
        if self.degenerate {
            return Err(fail(0, "degenerate: the element maps to the identity of the quotient".into()));
        }
        let k = self.k as usize;
        let pi = &ctx.quotient;
        let target = pi.target();
        let t_gens = pi.target_gens();
        let s = ctx.source_gens();
        let group = s.group();
        let n = ctx.params.n as usize;
        let big_n = ctx.params.ball_radius as usize;

        if k == 0
            || self.pieces.len() != k
            || self.factors.len() != k
            || self.factor_words.len() != k
            || self.quotient_geodesic.len() != k
        {
            return Err(fail(0, format!("expected {k} pieces, factors and quotient letters")));
        }
        if s.evaluate(&self.word)? != self.target {
            return Err(fail(0, "word does not spell the element".into()));
        }
        let joined: Vec<Letter> = self.pieces.iter().flat_map(|p| p.0.iter().copied()).collect();
        if joined != self.word.0 {
            return Err(fail(0, "pieces do not concatenate to the word".into()));
        }
        let lengths: Vec<usize> = self.pieces.iter().map(Word::len).collect();
        if lengths.windows(2).any(|w| w[0] < w[1] || w[0] > w[1] + 1) {
            return Err(fail(0, format!("uneven split {lengths:?}")));
        }
        let limit = ctx.params.word_length_limit() as usize;
        if let Some(i) = lengths.iter().position(|&len| len * k >= limit + k) {
            return Err(fail(i + 1, format!("|u| = {} is not below (n + dN)/k + 1", lengths[i])));
        }

        let image = pi.apply(&self.target, Some(&self.word))?;
        if t_gens.evaluate(&self.quotient_geodesic)? != image {
            return Err(fail(0, "quotient word does not spell π(g)".into()));
        }
        if ctx.phi.norm(&image)? as usize != k {
            return Err(fail(0, "quotient word is not a geodesic".into()));
        }

        let mut product = group.identity();
        for f in &self.factors {
            product = group.multiply(&product, f)?;
        }
        if product != self.target {
            return Err(fail(0, format!("factors multiply to {product}")));
        }

        // P_i and Q_i for i = 0..k
        let mut p = vec![target.identity()];
        let mut q = vec![target.identity()];
        for i in 0..k {
            p.push(target.multiply(&p[i], &pi.apply_word(&self.pieces[i])?)?);
            q.push(target.multiply(&q[i], t_gens.letter_value(self.quotient_geodesic.letters()[i])?)?);
        }
        for i in 1..=k {
            let t_i = t_gens.letter_value(self.quotient_geodesic.letters()[i - 1])?;
            let word = &self.factor_words[i - 1];
            let v = &self.factors[i - 1];
            if s.evaluate(word)? != *v {
                return Err(fail(i, "factor word does not spell the factor".into()));
            }
            let mut expected = Word::empty();
            if i > 1 {
                expected = ctx.phi.lift(&target.left_divide(&p[i - 1], &q[i - 1])?)?.inverse();
            }
            expected = expected.concat(&self.pieces[i - 1]);
            if i < k {
                expected = expected.concat(&ctx.phi.lift(&target.left_divide(&p[i], &q[i])?)?);
            }
            if *word != expected {
                return Err(fail(i, "factor word is not φ(x_{i-1})^-1 u_i φ(x_i)".into()));
            }
            if pi.apply_word(word)? != *t_i {
                return Err(fail(i, format!("π(v) = {} but t = {t_i}", pi.apply_word(word)?)));
            }
            // Q_{i-1}^-1 P_{i-1} π(u_i), then times P_i^-1 Q_i unless i = k
            let head = target.multiply(
                &target.left_divide(&q[i - 1], &p[i - 1])?,
                &pi.apply_word(&self.pieces[i - 1])?,
            )?;
            let telescoped = if i < k {
                target.multiply(&head, &target.left_divide(&p[i], &q[i])?)?
            } else {
                head
            };
            if telescoped != *t_i {
                return Err(fail(i, format!("telescoped image {telescoped} differs from t = {t_i}")));
            }
            if i == k && target.left_divide(&q[k - 1], &image)? != *t_i {
                return Err(fail(i, "Q_{k-1}^-1 π(g) differs from t_k".into()));
            }
            if word.len() > self.pieces[i - 1].len() + 2 * n {
                return Err(fail(i, format!("|v| = {} exceeds |u| + 2n", word.len())));
            }
            if word.len() > big_n {
                return Err(fail(i, format!("|v| = {} exceeds N = {big_n}", word.len())));
            }
            if !ctx.generating_set.contains_symmetric(v) {
                return Err(fail(i, format!("factor {v} is not in A or A^-1")));
            }
        }
        Ok(())
    }

    /// The factorization as a word over `A`.
    pub fn a_word(&self, ctx: &Construction) -> Result<Word> {
        let a = ctx.generating_set.gens();
        let group = a.group();
        self.factors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if let Some(j) = a.position(v) {
                    return Ok(Letter::pos(j as u32));
                }
                a.position(&group.invert(v)?)
                    .map(|j| Letter::neg(j as u32))
                    .ok_or_else(|| Error::Certificate {
                        element: self.target.to_string(),
                        index: i + 1,
                        reason: format!("factor {v} is not in A or A^-1"),
                    })
            })
            .collect()
    }

    pub fn digest(&self) -> Result<String> {
        digest(self)
    }
}
