use crate::error::{Error, Result};

use super::{lamplighter_a, lamplighter_t, Element, Group};

pub(super) fn parse_group(spec: &str) -> Result<Group> {
    let spec = spec.trim();
    let (base, bits) = match spec.split_once('/') {
        Some((base, bits)) => (base, Some(parse_num::<u32>(bits)?)),
        None => (spec, None),
    };
    let group = match base.split_once(':') {
        Some(("cyclic", m)) => Group::cyclic(parse_num(m)?)?,
        Some(("dihedral", m)) => Group::dihedral(parse_num(m)?)?,
        Some(("grid", r)) => Group::grid(parse_num(r)?)?,
        Some(_) => return Err(Error::Parse(format!("unknown group descriptor {spec:?}"))),
        None => match base {
            "zz" | "z" | "integers" => Group::integers(),
            "lamplighter" => Group::lamplighter(),
            _ => match base.strip_prefix("zz^") {
                Some(r) => Group::grid(parse_num(r)?)?,
                None => return Err(Error::Parse(format!("unknown group descriptor {spec:?}"))),
            },
        },
    };
    match bits {
        Some(b) => group.with_int_bits(b),
        None => Ok(group),
    }
}

fn parse_num<T: std::str::FromStr>(text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, got {text:?}")))
}

fn parse_int_list(text: &str, open: char, close: char) -> Result<Vec<i64>> {
    let inner = text
        .strip_prefix(open)
        .and_then(|t| t.strip_suffix(close))
        .ok_or_else(|| Error::Parse(format!("expected {open}...{close}, got {text:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_num).collect()
}

fn reduce(v: i64, modulus: u64) -> u64 {
    (v as i128).rem_euclid(modulus as i128) as u64
}

pub(super) fn parse_element(group: &Group, text: &str) -> Result<Element> {
    let text = text.trim();
    let element = match group {
        Group::IntegerLine { .. } => Element::Int(parse_num(text)?),
        Group::IntegerGrid { .. } => {
            let open = if text.starts_with('[') { '[' } else { '(' };
            let close = if open == '[' { ']' } else { ')' };
            Element::vector(parse_int_list(text, open, close)?)
        }
        Group::Cyclic { order } => Element::Residue(reduce(parse_num(text)?, *order)),
        Group::Dihedral { sides } => {
            let (reflection, rest) = match text.split_at_checked(1) {
                Some(("r", rest)) => (false, rest),
                Some(("s", rest)) => (true, rest),
                _ => {
                    return Err(Error::Parse(format!(
                        "dihedral elements are r<k> or s<k>, got {text:?}"
                    )))
                }
            };
            Element::Dihedral {
                rotation: reduce(parse_num(rest)?, *sides),
                reflection,
            }
        }
        Group::Lamplighter { .. } => match text {
            "t" => lamplighter_t(),
            "a" => lamplighter_a(),
            "e" | "1" => group.identity(),
            _ => {
                let (lamps, cursor) = text.split_once('@').ok_or_else(|| {
                    Error::Parse(format!("lamplighter elements are [lamps]@cursor, got {text:?}"))
                })?;
                Element::lamplighter(parse_int_list(lamps.trim(), '[', ']')?, parse_num(cursor)?)?
            }
        },
        Group::Table(_) => Element::Table(parse_num(text.strip_prefix('e').unwrap_or(text))?),
    };
    if !group.contains(&element) {
        return Err(Error::ForeignElement {
            element: text.to_string(),
            group: group.to_string(),
        });
    }
    Ok(element)
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() || !parts.is_empty() {
        parts.push(last);
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_descriptors() {
        assert_eq!(parse_group("zz").unwrap(), Group::integers());
        assert_eq!(parse_group("zz^3").unwrap(), Group::grid(3).unwrap());
        assert_eq!(parse_group("cyclic:10").unwrap(), Group::cyclic(10).unwrap());
        assert_eq!(parse_group("dihedral:6").unwrap(), Group::dihedral(6).unwrap());
        assert_eq!(parse_group("lamplighter").unwrap(), Group::lamplighter());
        assert_eq!(
            parse_group("zz/16").unwrap(),
            Group::integers().with_int_bits(16).unwrap()
        );
        assert!(parse_group("dihedral:2").is_err());
        assert!(parse_group("cyclic:0").is_err());
        assert!(parse_group("free:2").is_err());
        for spec in ["zz", "zz^2", "cyclic:7", "dihedral:5", "lamplighter", "zz/32"] {
            assert_eq!(parse_group(spec).unwrap().to_string(), spec);
        }
    }

    #[test]
    fn elements_roundtrip_through_display() {
        let cases = [
            (Group::integers(), "-17"),
            (Group::grid(2).unwrap(), "(3,-4)"),
            (Group::cyclic(10).unwrap(), "7"),
            (Group::dihedral(6).unwrap(), "s4"),
            (Group::lamplighter(), "[-2,0,5]@3"),
            (Group::lamplighter(), "[]@-1"),
        ];
        for (g, text) in cases {
            let e = parse_element(&g, text).unwrap();
            assert_eq!(e.to_string(), text);
        }
    }

    #[test]
    fn residues_are_reduced_and_aliases_work() {
        let c10 = Group::cyclic(10).unwrap();
        assert_eq!(parse_element(&c10, "-4").unwrap(), Element::Residue(6));
        let l = Group::lamplighter();
        assert_eq!(parse_element(&l, "t").unwrap(), lamplighter_t());
        assert_eq!(parse_element(&l, "e").unwrap(), l.identity());
        assert!(parse_element(&Group::grid(2).unwrap(), "(1,2,3)").is_err());
        assert!(parse_element(&Group::dihedral(4).unwrap(), "x1").is_err());
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("2,3"), vec!["2", "3"]);
        assert_eq!(split_top_level("(1,0), (0,1)"), vec!["(1,0)", "(0,1)"]);
        assert_eq!(split_top_level("[0,1]@2,t"), vec!["[0,1]@2", "t"]);
        assert!(split_top_level("").is_empty());
    }
}
