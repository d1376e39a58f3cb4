//! Flat `key = value` configuration files.
//!
//! Keys are flag names without the leading dashes (`target-depth = 3`;
//! underscores are accepted too). Lines starting with `#` are comments.
//! Entries are spliced into the argument list ahead of the user's own flags,
//! so flags given on the command line win.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;

use crate::cli::Cli;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(deadend::Error::Parse(format!(
                "config line {}: expected key = value",
                lineno + 1
            )));
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            bail!(deadend::Error::Parse(format!("config line {}: empty key", lineno + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Removes `--config PATH` from `args` and returns the path.
fn take_config_flag(args: &mut Vec<String>) -> Result<Option<String>> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                bail!(deadend::Error::Parse("--config needs a path".into()));
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(path) = args[i].strip_prefix("--config=") {
            found = Some(path.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

/// Applies a config file named by `--config`, if any, to the raw arguments.
pub fn merge_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = take_config_flag(&mut args)? else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let entries = parse_config(&text)?;

    let command = Cli::command();
    let Some(position) = args
        .iter()
        .position(|a| command.find_subcommand(a).is_some())
    else {
        // let clap report the missing subcommand
        return Ok(args);
    };
    let sub = command.find_subcommand(&args[position]).expect("found above");
    let known = |key: &str| sub.get_arguments().any(|a| a.get_long() == Some(key));
    let all_known = |key: &str| {
        command
            .get_subcommands()
            .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
    };
    let mut injected = Vec::new();
    for (key, value) in entries {
        if known(&key) {
            injected.push(format!("--{key}"));
            injected.push(value);
        } else if !all_known(&key) {
            bail!(deadend::Error::Parse(format!("unknown config key {key:?} in {path}")));
        }
    }
    args.splice(position + 1..position + 1, injected);
    Ok(args)
}
