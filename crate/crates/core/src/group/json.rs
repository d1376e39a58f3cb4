//! JSON encodings for groups, elements, generating sets and words.
//!
//! Integers are written as decimal strings so that 64-bit payloads survive
//! parsers that read numbers as doubles. Documents carry a schema tag, and
//! [`canonical_string`] emits keys in sorted order.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::{Element, GeneratingSet, Generator, Group, Letter, TableGroup, Word};

pub const SCHEMA: &str = "deadend/1";

fn dec<T: ToString>(v: T) -> String {
    v.to_string()
}

fn num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("expected a decimal integer, got {s:?}"))
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementRepr {
    Int { value: String },
    Vector { coords: Vec<String> },
    Residue { value: String },
    Dihedral { rotation: String, reflection: bool },
    Lamplighter { lamps: Vec<String>, cursor: String },
    Table { id: String },
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        match e {
            Element::Int(v) => ElementRepr::Int { value: dec(v) },
            Element::Vector(c) => ElementRepr::Vector {
                coords: c.iter().map(dec).collect(),
            },
            Element::Residue(r) => ElementRepr::Residue { value: dec(r) },
            Element::Dihedral {
                rotation,
                reflection,
            } => ElementRepr::Dihedral {
                rotation: dec(rotation),
                reflection,
            },
            Element::Lamplighter { lamps, cursor } => ElementRepr::Lamplighter {
                lamps: lamps.iter().map(dec).collect(),
                cursor: dec(cursor),
            },
            Element::Table(id) => ElementRepr::Table { id: dec(id) },
        }
    }
}

impl TryFrom<ElementRepr> for Element {
    type Error = String;

    fn try_from(r: ElementRepr) -> std::result::Result<Self, String> {
        Ok(match r {
            ElementRepr::Int { value } => Element::Int(num(&value)?),
            ElementRepr::Vector { coords } => {
                Element::vector(coords.iter().map(|c| num(c)).collect::<std::result::Result<_, _>>()?)
            }
            ElementRepr::Residue { value } => Element::Residue(num(&value)?),
            ElementRepr::Dihedral {
                rotation,
                reflection,
            } => Element::Dihedral {
                rotation: num(&rotation)?,
                reflection,
            },
            ElementRepr::Lamplighter { lamps, cursor } => Element::lamplighter(
                lamps.iter().map(|c| num(c)).collect::<std::result::Result<_, _>>()?,
                num(&cursor)?,
            )
            .map_err(|e| e.to_string())?,
            ElementRepr::Table { id } => Element::Table(num(&id)?),
        })
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Element::try_from(ElementRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupRepr {
    Integers { bits: String },
    Grid { rank: String, bits: String },
    Cyclic { order: String },
    Dihedral { sides: String },
    Lamplighter { bits: String },
    Table { identity: String, table: Vec<Vec<String>> },
}

impl From<&Group> for GroupRepr {
    fn from(g: &Group) -> Self {
        match g {
            Group::IntegerLine { bits } => GroupRepr::Integers { bits: dec(bits) },
            Group::IntegerGrid { rank, bits } => GroupRepr::Grid {
                rank: dec(rank),
                bits: dec(bits),
            },
            Group::Cyclic { order } => GroupRepr::Cyclic { order: dec(order) },
            Group::Dihedral { sides } => GroupRepr::Dihedral { sides: dec(sides) },
            Group::Lamplighter { bits } => GroupRepr::Lamplighter { bits: dec(bits) },
            Group::Table(t) => GroupRepr::Table {
                identity: dec(t.identity()),
                table: t.rows().map(|row| row.iter().map(dec).collect()).collect(),
            },
        }
    }
}

impl TryFrom<GroupRepr> for Group {
    type Error = Error;

    fn try_from(r: GroupRepr) -> Result<Group> {
        let n = |s: &str| num::<u64>(s).map_err(Error::Parse);
        match r {
            GroupRepr::Integers { bits } => Group::integers().with_int_bits(n(&bits)? as u32),
            GroupRepr::Grid { rank, bits } => {
                Group::grid(n(&rank)? as usize)?.with_int_bits(n(&bits)? as u32)
            }
            GroupRepr::Cyclic { order } => Group::cyclic(n(&order)?),
            GroupRepr::Dihedral { sides } => Group::dihedral(n(&sides)?),
            GroupRepr::Lamplighter { bits } => Group::lamplighter().with_int_bits(n(&bits)? as u32),
            GroupRepr::Table { identity, table } => {
                let rows = table
                    .iter()
                    .map(|row| row.iter().map(|v| num::<u32>(v).map_err(Error::Parse)).collect())
                    .collect::<Result<Vec<Vec<u32>>>>()?;
                Ok(Group::table(TableGroup::new(rows, num(&identity).map_err(Error::Parse)?)?))
            }
        }
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Group::try_from(GroupRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Words serialize as lists of 1-based signed generator indices.
impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let letters: Vec<String> = self.letters().iter().map(|l| dec(l.to_signed())).collect();
        letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<String>::deserialize(d)?;
        letters
            .iter()
            .map(|s| {
                let v: i64 = num(s.trim_start_matches('+')).map_err(serde::de::Error::custom)?;
                Letter::from_signed(v).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorRepr {
    element: Element,
    label: String,
}

impl Serialize for GeneratingSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gens: Vec<GeneratorRepr> = self
            .generators()
            .iter()
            .map(|g| GeneratorRepr {
                element: g.element.clone(),
                label: g.label.clone(),
            })
            .collect();
        gens.serialize(s)
    }
}

/// Reads a generating set serialized by its `Serialize` impl; the group is
/// needed to validate and invert the entries.
pub fn generating_set_from_value(group: &Group, value: &Value) -> Result<GeneratingSet> {
    let reprs: Vec<GeneratorRepr> = serde_json::from_value(value.clone())?;
    GeneratingSet::with_labels(
        group,
        reprs
            .into_iter()
            .map(|r| Generator {
                element: r.element,
                label: r.label,
            })
            .collect(),
    )
}

/// Wraps a payload in a schema-tagged document.
pub fn document<T: Serialize>(kind: &str, payload: &T) -> Result<Value> {
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "type": kind,
        "value": serde_json::to_value(payload)?,
    }))
}

/// Unwraps a document produced by [`document`], checking schema and type.
pub fn open_document<'a>(kind: &str, doc: &'a Value) -> Result<&'a Value> {
    let schema = doc.get("schema").and_then(Value::as_str);
    if schema != Some(SCHEMA) {
        return Err(Error::Parse(format!("unsupported schema {schema:?}")));
    }
    let found = doc.get("type").and_then(Value::as_str);
    if found != Some(kind) {
        return Err(Error::Parse(format!("expected a {kind} document, found {found:?}")));
    }
    doc.get("value")
        .ok_or_else(|| Error::Parse("document has no value".into()))
}

/// Serializes with object keys in sorted order.
pub fn canonical_string<T: Serialize>(payload: &T) -> Result<String> {
    // serde_json::Map is a BTreeMap unless `preserve_order` is enabled.
    Ok(serde_json::to_value(payload)?.to_string())
}

pub fn canonical_pretty<T: Serialize>(payload: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&serde_json::to_value(payload)?)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the canonical JSON form.
pub fn digest<T: Serialize>(payload: &T) -> Result<String> {
    Ok(sha256_hex(canonical_string(payload)?.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_decimal_strings() {
        let v = serde_json::to_value(Element::Int(i64::MAX)).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "int", "value": "9223372036854775807"}));
        let e: Element = serde_json::from_value(v).unwrap();
        assert_eq!(e, Element::Int(i64::MAX));
    }

    #[test]
    fn canonical_keys_are_sorted() {
        let e = Element::lamplighter(vec![2, -1], 5).unwrap();
        assert_eq!(
            canonical_string(&e).unwrap(),
            r#"{"cursor":"5","kind":"lamplighter","lamps":["-1","2"]}"#
        );
    }

    #[test]
    fn groups_roundtrip() {
        let (t, _) = TableGroup::from_permutations(&[vec![1, 2, 0]]).unwrap();
        for g in [
            Group::integers(),
            Group::grid(2).unwrap().with_int_bits(32).unwrap(),
            Group::cyclic(10).unwrap(),
            Group::dihedral(6).unwrap(),
            Group::lamplighter(),
            Group::table(t),
        ] {
            let doc = document("group", &g).unwrap();
            let back: Group = serde_json::from_value(open_document("group", &doc).unwrap().clone()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn invalid_table_is_rejected() {
        let v = serde_json::json!({"kind": "table", "identity": "0", "table": [["0", "1"], ["1", "1"]]});
        assert!(serde_json::from_value::<Group>(v).is_err());
    }

    #[test]
    fn generating_sets_and_words_roundtrip() {
        let g = Group::lamplighter();
        let s = GeneratingSet::parse(&g, "t,a").unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(generating_set_from_value(&g, &v).unwrap(), s);

        let w = Word(vec![Letter::pos(0), Letter::neg(1)]);
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v, serde_json::json!(["1", "-2"]));
        assert_eq!(serde_json::from_value::<Word>(v).unwrap(), w);
    }

    #[test]
    fn documents_check_schema_and_type() {
        let doc = document("word", &Word::empty()).unwrap();
        assert!(open_document("word", &doc).is_ok());
        assert!(open_document("group", &doc).is_err());
        let mut bad = doc.clone();
        bad["schema"] = Value::from("deadend/0");
        assert!(open_document("word", &bad).is_err());
    }
}
