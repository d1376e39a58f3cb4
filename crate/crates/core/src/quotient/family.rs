use serde::Serialize;

use super::{diameter, DiameterReport, QuotientMap};
use crate::error::{Error, Result};
use crate::group::GeneratingSet;

/// An ordered supply of finite quotients of the group generated by `S`.
#[derive(Clone, Debug)]
pub enum QuotientFamily {
    /// The natural maps onto `Z/m` for `m = 2, 3, ..., max_order`.
    Cyclic { max_order: u64 },
    /// An explicit list; every member must be surjective.
    Explicit(Vec<QuotientMap>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// First member of order at least `(2a + 1)^n'`, which the counting
    /// bound guarantees has diameter at least `n'`.
    PaperSafe,
    /// First member whose computed diameter is at least `n'`.
    Greedy,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<SearchMode> {
        match s {
            "paper-safe" | "paper_safe" => Ok(SearchMode::PaperSafe),
            "greedy" => Ok(SearchMode::Greedy),
            _ => Err(Error::Parse(format!("unknown search mode {s:?}"))),
        }
    }
}

impl QuotientFamily {
    /// Members in family order, built lazily.
    pub fn members<'a>(
        &'a self,
        source_gens: &'a GeneratingSet,
    ) -> Box<dyn Iterator<Item = Result<QuotientMap>> + 'a> {
        match self {
            QuotientFamily::Cyclic { max_order } => {
                Box::new((2..=*max_order).map(move |m| QuotientMap::onto_cyclic(source_gens, m)))
            }
            QuotientFamily::Explicit(maps) => Box::new(maps.iter().cloned().map(Ok)),
        }
    }

    fn requires_surjective(&self) -> bool {
        matches!(self, QuotientFamily::Explicit(_))
    }
}

/// Finds a quotient whose diameter (under the image of `S`) is at least
/// `n_prime`. Among members reaching the same diameter the first in family
/// order wins.
pub fn find_quotient(
    source_gens: &GeneratingSet,
    family: &QuotientFamily,
    n_prime: u32,
    mode: SearchMode,
) -> Result<(QuotientMap, DiameterReport)> {
    let a = source_gens.len() as u128;
    let min_order = (2 * a + 1).checked_pow(n_prime);
    for member in family.members(source_gens) {
        let pi = member?;
        if mode == SearchMode::PaperSafe {
            match min_order {
                Some(bound) if (pi.target_order() as u128) >= bound => {}
                _ => continue,
            }
        }
        if !pi.is_surjective() {
            if family.requires_surjective() {
                return Err(Error::Quotient(format!(
                    "family member onto {} is not surjective",
                    pi.target()
                )));
            }
            log::debug!("skipping non-surjective map onto {}", pi.target());
            continue;
        }
        let report = diameter(pi.target_gens())?;
        if report.diameter >= n_prime {
            return Ok((pi, report));
        }
        if mode == SearchMode::PaperSafe {
            return Err(Error::Verification(format!(
                "quotient of order {} has diameter {} < {n_prime} despite the counting bound",
                report.order, report.diameter
            )));
        }
    }
    Err(Error::FamilyExhausted(format!(
        "no member has diameter >= {n_prime}"
    )))
}
