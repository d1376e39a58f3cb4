use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use deadend::construction::{factorize, verify_construction, Construction};
use deadend::depth::{depth, depth_profile};
use deadend::group::json::{canonical_string, sha256_hex};
use deadend::quotient::{counting_bound_check, diameter};
use deadend::Error;

use crate::cli::{BallArgs, CertifyArgs, CommonArgs, DepthArgs, ProfileArgs, VerifyArgs};
use crate::inputs::{setup_from_echo, ConstructionInputs, Setup};

/// What a command hands back for the report: the echoed inputs and the
/// results payload.
pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn build(setup: &Setup, inputs: &ConstructionInputs) -> Result<Construction> {
    let choice = inputs.quotient.choice(&setup.gens, inputs.quotient_mode)?;
    Ok(Construction::build(
        &setup.gens,
        choice,
        inputs.target_depth,
        inputs.bound_mode,
        &setup.budget,
    )?)
}

fn construct_and_verify(setup: &Setup, inputs: &ConstructionInputs, radius: Option<u32>) -> Result<Value> {
    let c = build(setup, inputs)?;
    let radius = radius.unwrap_or(c.params.d);
    let verification = verify_construction(&c, radius)?;
    Ok(c.report(&verification)?)
}

pub fn construct(setup: &Setup, inputs: &ConstructionInputs) -> Result<Outcome> {
    Ok(Outcome {
        inputs: merge(setup.echo(), inputs.echo()),
        results: construct_and_verify(setup, inputs, None)?,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let Some(path) = &args.report else {
        let setup = Setup::from_args(&args.common)?;
        let inputs = ConstructionInputs::from_args(&args.construction)?;
        let mut echo = merge(setup.echo(), inputs.echo());
        if let Some(r) = args.radius {
            echo["radius"] = json!(r);
        }
        return Ok(Outcome {
            inputs: echo,
            results: construct_and_verify(&setup, &inputs, args.radius)?,
        });
    };
    recheck(path, &args.common)
}

/// Replays a saved report and compares its results with a fresh run.
fn recheck(path: &Path, common: &CommonArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let saved: Value = serde_json::from_str(&text).map_err(Error::from)?;
    if saved.get("schema").and_then(Value::as_str) != Some(deadend::group::json::SCHEMA) {
        return Err(Error::Parse("report has an unsupported schema".into()).into());
    }
    let command = saved.get("command").and_then(Value::as_str).unwrap_or_default();
    if command != "construct" && command != "verify" {
        return Err(Error::Parse(format!("cannot re-check a {command:?} report")).into());
    }
    let echo = saved
        .get("inputs")
        .ok_or_else(|| Error::Parse("report has no inputs".into()))?;
    let setup = setup_from_echo(echo, common)?;
    let inputs = ConstructionInputs::from_echo(echo)?;
    let radius = match echo.get("radius") {
        Some(r) => Some(
            r.as_u64()
                .and_then(|r| u32::try_from(r).ok())
                .ok_or_else(|| Error::Parse(format!("bad radius {r}")))?,
        ),
        None => None,
    };
    let fresh = construct_and_verify(&setup, &inputs, radius)?;
    let claimed = saved.get("results").cloned().unwrap_or(Value::Null);
    if fresh != claimed {
        return Err(Error::Verification(
            "re-running the report's inputs gives different results".into(),
        )
        .into());
    }
    Ok(Outcome {
        inputs: json!({ "report_digest": sha256_hex(canonical_string(&saved)?.as_bytes()) }),
        results: json!({
            "report_inputs": echo,
            "matches": true,
            "params": fresh["params"],
            "certified_depth": fresh["verification"]["certified_depth"],
        }),
    })
}

pub fn certify(args: &CertifyArgs) -> Result<Outcome> {
    let setup = Setup::from_args(&args.common)?;
    let inputs = ConstructionInputs::from_args(&args.construction)?;
    let c = build(&setup, &inputs)?;
    let g = setup.group.parse_element(&args.element)?;
    let word = c.s_word_for(&g, &setup.budget)?;
    let cert = factorize(&c, &g, &word)?;
    // a degenerate certificate is reported as a failed validation
    cert.validate(&c)?;
    let a_word = cert.a_word(&c)?;
    let a = c.generating_set.gens();
    Ok(Outcome {
        inputs: merge(
            merge(setup.echo(), inputs.echo()),
            json!({ "element": g }),
        ),
        results: json!({
            "params": c.params,
            "witness": c.witness.element,
            "element": g,
            "k": cert.k,
            "a_word": a_word,
            "a_word_labels": a.spell(&a_word),
            "a_word_value": a.evaluate(&a_word)?,
            "a_norm": c.a_ball.norm(&g),
            "certificate": cert,
            "certificate_digest": cert.digest()?,
        }),
    })
}

pub fn depth_one(args: &DepthArgs) -> Result<Outcome> {
    let setup = Setup::from_args(&args.common)?;
    let g = setup.group.parse_element(&args.element)?;
    let cap = args.cap.unwrap_or(2 * args.radius + 1);
    let ball = setup.ball(args.radius)?;
    let value = depth(&ball, &g, cap)?;
    Ok(Outcome {
        inputs: merge(
            setup.echo(),
            json!({ "element": g, "radius": args.radius, "cap": cap }),
        ),
        results: json!({
            "element": g,
            "norm": ball.norm(&g),
            "depth": value,
        }),
    })
}

pub fn profile(args: &ProfileArgs) -> Result<Outcome> {
    let setup = Setup::from_args(&args.common)?;
    let cap = args.cap.unwrap_or(2 * args.radius + 1);
    let ball = setup.ball(args.radius)?;
    let profile = depth_profile(&ball, cap)?;
    if let Some(path) = &args.csv {
        profile.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(Outcome {
        inputs: merge(
            setup.echo(),
            json!({ "radius": args.radius, "cap": cap }),
        ),
        results: serde_json::to_value(profile.summary()).map_err(Error::from)?,
    })
}

pub fn ball(args: &BallArgs) -> Result<Outcome> {
    let setup = Setup::from_args(&args.common)?;
    let ball = setup.ball(args.radius)?;
    if let Some(path) = &args.csv {
        ball.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(Outcome {
        inputs: merge(setup.echo(), json!({ "radius": args.radius })),
        results: json!({
            "size": ball.len(),
            "sphere_sizes": ball.sphere_sizes(),
            "exhaustive": ball.is_exhaustive(),
        }),
    })
}

pub fn diameter_of(args: &CommonArgs) -> Result<Outcome> {
    let setup = Setup::from_args(args)?;
    let report = diameter(&setup.gens)?;
    Ok(Outcome {
        inputs: setup.echo(),
        results: merge(
            serde_json::to_value(&report).map_err(Error::from)?,
            json!({ "counting_bound_holds": counting_bound_check(&report, setup.gens.len()) }),
        ),
    })
}
