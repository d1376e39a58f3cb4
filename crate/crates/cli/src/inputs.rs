//! Turning flags into library values, and echoing them back in reports so a
//! run can be replayed from the report alone.

use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use serde_json::{json, Value};

use deadend::cayley::{Ball, BallCache, Budget};
use deadend::construction::{BoundMode, QuotientChoice};
use deadend::group::json::{generating_set_from_value, open_document};
use deadend::group::{Element, GeneratingSet, Group};
use deadend::quotient::{NativeMap, QuotientFamily, QuotientMap, SearchMode};
use deadend::Error;

use crate::cli::{CommonArgs, ConstructionArgs};

/// Largest cyclic quotient searched when `cyclic-family` has no bound.
pub const DEFAULT_FAMILY_MAX: u64 = 59_049;

/// Radius and sample count used to check word-based quotient maps.
const HOMOMORPHISM_CHECK_RADIUS: u32 = 6;
const HOMOMORPHISM_CHECK_SAMPLES: usize = 256;

fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(Path::new(path)).with_context(|| format!("reading {path}"))?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

/// Unwraps `doc` if it is a schema-tagged document of type `kind`.
fn payload<'a>(kind: &str, doc: &'a Value) -> Result<&'a Value> {
    if doc.get("schema").is_some() {
        Ok(open_document(kind, doc)?)
    } else {
        Ok(doc)
    }
}

pub fn parse_group(spec: &str) -> Result<Group> {
    if let Some(path) = spec.strip_prefix("table:") {
        let doc = read_json(path)?;
        return Ok(serde_json::from_value(payload("group", &doc)?.clone()).map_err(Error::from)?);
    }
    Ok(Group::parse(spec)?)
}

pub fn parse_gens(group: &Group, spec: Option<&str>) -> Result<GeneratingSet> {
    match spec {
        None => Ok(GeneratingSet::standard(group)?),
        Some(s) => match s.strip_prefix('@') {
            Some(path) => {
                let doc = read_json(path)?;
                Ok(generating_set_from_value(group, payload("generating_set", &doc)?)?)
            }
            None => Ok(GeneratingSet::parse(group, s)?),
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuotientSpec {
    Cyclic(u64),
    CyclicFamily(u64),
    Dihedral(u64),
    Explicit { target: Group, images: Vec<Element> },
}

fn parse_order(text: &str, what: &str) -> Result<u64> {
    text.parse()
        .map_err(|_| Error::Parse(format!("bad {what} {text:?}")).into())
}

impl QuotientSpec {
    pub fn parse(spec: &str) -> Result<QuotientSpec> {
        if spec == "cyclic-family" {
            return Ok(QuotientSpec::CyclicFamily(DEFAULT_FAMILY_MAX));
        }
        if let Some(max) = spec.strip_prefix("cyclic-family:") {
            return Ok(QuotientSpec::CyclicFamily(parse_order(max, "family bound")?));
        }
        if let Some(m) = spec.strip_prefix("cyclic:") {
            return Ok(QuotientSpec::Cyclic(parse_order(m, "cyclic order")?));
        }
        if let Some(m) = spec.strip_prefix("dihedral:") {
            return Ok(QuotientSpec::Dihedral(parse_order(m, "dihedral size")?));
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return QuotientSpec::from_value(payload("quotient", &read_json(path)?)?);
        }
        bail!(Error::Parse(format!("unknown quotient {spec:?}")))
    }

    /// Explicit maps are stored as `{"target": group, "images": [...]}`.
    pub fn from_value(value: &Value) -> Result<QuotientSpec> {
        if let Some(s) = value.as_str() {
            return QuotientSpec::parse(s);
        }
        let target: Group = serde_json::from_value(
            value
                .get("target")
                .cloned()
                .ok_or_else(|| Error::Parse("quotient needs a target".into()))?,
        )
        .map_err(Error::from)?;
        let images: Vec<Element> = serde_json::from_value(
            value
                .get("images")
                .cloned()
                .ok_or_else(|| Error::Parse("quotient needs images".into()))?,
        )
        .map_err(Error::from)?;
        Ok(QuotientSpec::Explicit { target, images })
    }

    pub fn to_value(&self) -> Value {
        match self {
            QuotientSpec::Cyclic(m) => json!(format!("cyclic:{m}")),
            QuotientSpec::CyclicFamily(m) => json!(format!("cyclic-family:{m}")),
            QuotientSpec::Dihedral(m) => json!(format!("dihedral:{m}")),
            QuotientSpec::Explicit { target, images } => json!({ "target": target, "images": images }),
        }
    }

    pub fn choice(&self, gens: &GeneratingSet, mode: SearchMode) -> Result<QuotientChoice> {
        Ok(match self {
            QuotientSpec::Cyclic(m) => QuotientChoice::Fixed(QuotientMap::onto_cyclic(gens, *m)?),
            QuotientSpec::CyclicFamily(max) => QuotientChoice::Search {
                family: QuotientFamily::Cyclic { max_order: *max },
                mode,
            },
            QuotientSpec::Dihedral(m) => QuotientChoice::Fixed(QuotientMap::native(
                gens,
                &Group::dihedral(*m)?,
                NativeMap::DihedralReduction,
            )?),
            QuotientSpec::Explicit { target, images } => {
                let pi = QuotientMap::word_based(gens, target, images.clone())?;
                let mut rng = rand::rngs::StdRng::seed_from_u64(0);
                pi.check_homomorphism(HOMOMORPHISM_CHECK_RADIUS, HOMOMORPHISM_CHECK_SAMPLES, &mut rng)?;
                QuotientChoice::Fixed(pi)
            }
        })
    }
}

/// Group, generators and resource limits shared by all commands.
#[derive(Clone, Debug)]
pub struct Setup {
    pub group: Group,
    pub gens: GeneratingSet,
    pub budget: Budget,
    pub cache: Option<BallCache>,
}

impl Setup {
    pub fn from_args(args: &CommonArgs) -> Result<Setup> {
        let spec = args
            .group
            .as_deref()
            .ok_or_else(|| Error::Parse("--group is required".into()))?;
        let group = parse_group(spec)?;
        let gens = parse_gens(&group, args.gens.as_deref())?;
        Setup::new(group, gens, args)
    }

    pub fn new(group: Group, gens: GeneratingSet, args: &CommonArgs) -> Result<Setup> {
        let budget = Budget::new(
            args.budget_elements,
            args.budget_radius,
            Duration::from_secs(args.budget_seconds),
        )?;
        let cache = args.cache_dir.as_ref().map(BallCache::new).transpose()?;
        Ok(Setup {
            group,
            gens,
            budget,
            cache,
        })
    }

    pub fn ball(&self, radius: u32) -> Result<Ball> {
        Ok(match &self.cache {
            Some(cache) => cache.get_or_build(&self.gens, radius, &self.budget)?,
            None => Ball::build(&self.gens, radius, &self.budget)?,
        })
    }

    pub fn echo(&self) -> Value {
        json!({
            "group": self.group,
            "gens": self.gens,
            "budget": {
                "elements": self.budget.max_elements,
                "radius": self.budget.max_radius,
                "seconds": self.budget.max_time.as_secs(),
            },
        })
    }
}

/// Parameters of a construction run.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionInputs {
    pub quotient: QuotientSpec,
    pub quotient_mode: SearchMode,
    pub target_depth: u32,
    pub bound_mode: BoundMode,
}

impl ConstructionInputs {
    pub fn from_args(args: &ConstructionArgs) -> Result<ConstructionInputs> {
        let quotient = args
            .quotient
            .as_deref()
            .ok_or_else(|| Error::Parse("--quotient is required".into()))?;
        let target_depth = args
            .target_depth
            .ok_or_else(|| Error::Parse("--target-depth is required".into()))?;
        Ok(ConstructionInputs {
            quotient: QuotientSpec::parse(quotient)?,
            quotient_mode: args.quotient_mode.parse()?,
            target_depth,
            bound_mode: args.bound_mode.parse()?,
        })
    }

    pub fn echo(&self) -> Value {
        json!({
            "quotient": self.quotient.to_value(),
            "quotient_mode": self.quotient_mode,
            "target_depth": self.target_depth,
            "bound_mode": self.bound_mode,
        })
    }

    pub fn from_echo(value: &Value) -> Result<ConstructionInputs> {
        let field = |key: &str| {
            value
                .get(key)
                .ok_or_else(|| Error::Parse(format!("report inputs lack {key:?}")))
        };
        let text = |key: &str| -> Result<String> {
            Ok(field(key)?
                .as_str()
                .ok_or_else(|| Error::Parse(format!("report input {key:?} is not a string")))?
                .to_string())
        };
        Ok(ConstructionInputs {
            quotient: QuotientSpec::from_value(field("quotient")?)?,
            quotient_mode: text("quotient_mode")?.replace('_', "-").parse()?,
            target_depth: field("target_depth")?
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| Error::Parse("bad target depth in report inputs".into()))?,
            bound_mode: text("bound_mode")?.parse()?,
        })
    }
}

/// Rebuilds group and generators from a report's input echo.
pub fn setup_from_echo(inputs: &Value, args: &CommonArgs) -> Result<Setup> {
    let group: Group = serde_json::from_value(
        inputs
            .get("group")
            .cloned()
            .ok_or_else(|| Error::Parse("report inputs lack a group".into()))?,
    )
    .map_err(Error::from)?;
    let gens = generating_set_from_value(
        &group,
        inputs
            .get("gens")
            .ok_or_else(|| Error::Parse("report inputs lack generators".into()))?,
    )?;
    Setup::new(group, gens, args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_specs() {
        assert_eq!(QuotientSpec::parse("cyclic:10").unwrap(), QuotientSpec::Cyclic(10));
        assert_eq!(
            QuotientSpec::parse("cyclic-family").unwrap(),
            QuotientSpec::CyclicFamily(DEFAULT_FAMILY_MAX)
        );
        assert_eq!(
            QuotientSpec::parse("cyclic-family:500").unwrap(),
            QuotientSpec::CyclicFamily(500)
        );
        assert_eq!(QuotientSpec::parse("dihedral:4").unwrap(), QuotientSpec::Dihedral(4));
        assert!(QuotientSpec::parse("cyclic:x").is_err());
        assert!(QuotientSpec::parse("sphere:3").is_err());
        for spec in ["cyclic:7", "cyclic-family:30", "dihedral:3"] {
            let q = QuotientSpec::parse(spec).unwrap();
            assert_eq!(QuotientSpec::from_value(&q.to_value()).unwrap(), q);
        }
    }

    #[test]
    fn explicit_quotient_roundtrip() {
        let q = QuotientSpec::Explicit {
            target: Group::cyclic(4).unwrap(),
            images: vec![Element::Residue(1)],
        };
        assert_eq!(QuotientSpec::from_value(&q.to_value()).unwrap(), q);
    }

    #[test]
    fn gens_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gens.json");
        let group = Group::integers();
        let gens = GeneratingSet::parse(&group, "2,3").unwrap();
        fs::write(&path, serde_json::to_string(&gens).unwrap()).unwrap();
        let spec = format!("@{}", path.display());
        assert_eq!(parse_gens(&group, Some(&spec)).unwrap(), gens);
        assert_eq!(parse_gens(&group, None).unwrap(), GeneratingSet::parse(&group, "1").unwrap());
    }
}
