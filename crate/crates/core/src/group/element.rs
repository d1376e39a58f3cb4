use std::fmt;

use crate::error::{Error, Result};

/// Canonical element payload. Two elements are equal exactly when their
/// payloads (and hence their byte encodings) are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Int(i64),
    Vector(Box<[i64]>),
    Residue(u64),
    /// `rho^rotation * sigma^reflection`.
    Dihedral { rotation: u64, reflection: bool },
    /// Lit lamps are strictly increasing.
    Lamplighter { lamps: Box<[i64]>, cursor: i64 },
    Table(u32),
}

const TAG_INT: u8 = 1;
const TAG_VECTOR: u8 = 2;
const TAG_RESIDUE: u8 = 3;
const TAG_DIHEDRAL: u8 = 4;
const TAG_LAMPLIGHTER: u8 = 5;
const TAG_TABLE: u8 = 6;

impl Element {
    /// Builds a lamplighter element, sorting the lamp positions. Repeated
    /// positions are rejected rather than cancelled.
    pub fn lamplighter(mut lamps: Vec<i64>, cursor: i64) -> Result<Element> {
        lamps.sort_unstable();
        if lamps.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!(
                "lamplighter lamp set {lamps:?} has duplicate positions"
            )));
        }
        Ok(Element::Lamplighter {
            lamps: lamps.into_boxed_slice(),
            cursor,
        })
    }

    pub fn vector(coords: Vec<i64>) -> Element {
        Element::Vector(coords.into_boxed_slice())
    }

    /// Canonical byte encoding: a tag byte followed by little-endian fields.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16);
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            Element::Int(v) => {
                out.push(TAG_INT);
                out.extend_from_slice(&v.to_le_bytes());
            }
            Element::Vector(coords) => {
                out.push(TAG_VECTOR);
                out.extend_from_slice(&(coords.len() as u32).to_le_bytes());
                for c in coords.iter() {
                    out.extend_from_slice(&c.to_le_bytes());
                }
            }
            Element::Residue(r) => {
                out.push(TAG_RESIDUE);
                out.extend_from_slice(&r.to_le_bytes());
            }
            Element::Dihedral {
                rotation,
                reflection,
            } => {
                out.push(TAG_DIHEDRAL);
                out.extend_from_slice(&rotation.to_le_bytes());
                out.push(*reflection as u8);
            }
            Element::Lamplighter { lamps, cursor } => {
                out.push(TAG_LAMPLIGHTER);
                out.extend_from_slice(&cursor.to_le_bytes());
                out.extend_from_slice(&(lamps.len() as u32).to_le_bytes());
                for p in lamps.iter() {
                    out.extend_from_slice(&p.to_le_bytes());
                }
            }
            Element::Table(id) => {
                out.push(TAG_TABLE);
                out.extend_from_slice(&id.to_le_bytes());
            }
        }
    }

    /// Inverse of [`Element::encode`]. Trailing bytes are an error.
    pub fn decode(bytes: &[u8]) -> Result<Element> {
        let mut reader = ByteReader { bytes, pos: 0 };
        let element = match reader.u8()? {
            TAG_INT => Element::Int(reader.i64()?),
            TAG_VECTOR => {
                let len = reader.u32()? as usize;
                let coords = (0..len).map(|_| reader.i64()).collect::<Result<Vec<_>>>()?;
                Element::vector(coords)
            }
            TAG_RESIDUE => Element::Residue(reader.u64()?),
            TAG_DIHEDRAL => {
                let rotation = reader.u64()?;
                let reflection = match reader.u8()? {
                    0 => false,
                    1 => true,
                    b => return Err(Error::Parse(format!("bad reflection byte {b}"))),
                };
                Element::Dihedral {
                    rotation,
                    reflection,
                }
            }
            TAG_LAMPLIGHTER => {
                let cursor = reader.i64()?;
                let len = reader.u32()? as usize;
                let lamps = (0..len).map(|_| reader.i64()).collect::<Result<Vec<_>>>()?;
                if lamps.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Parse("lamp positions not strictly sorted".into()));
                }
                Element::Lamplighter {
                    lamps: lamps.into_boxed_slice(),
                    cursor,
                }
            }
            TAG_TABLE => Element::Table(reader.u32()?),
            tag => return Err(Error::Parse(format!("unknown element tag {tag}"))),
        };
        if reader.pos != bytes.len() {
            return Err(Error::Parse("trailing bytes after element encoding".into()));
        }
        Ok(element)
    }
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl ByteReader<'_> {
    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        let end = self.pos + K;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Parse("truncated element encoding".into()))?;
        self.pos = end;
        Ok(slice.try_into().expect("slice length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take()?))
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: char, items: &[i64], close: char) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "{close}")
}

/// The textual form accepted by [`Group::parse_element`](crate::group::Group::parse_element).
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) => write!(f, "{v}"),
            Element::Vector(coords) => write_list(f, '(', coords, ')'),
            Element::Residue(r) => write!(f, "{r}"),
            Element::Dihedral {
                rotation,
                reflection,
            } => write!(f, "{}{rotation}", if *reflection { 's' } else { 'r' }),
            Element::Lamplighter { lamps, cursor } => {
                write_list(f, '[', lamps, ']')?;
                write!(f, "@{cursor}")
            }
            Element::Table(id) => write!(f, "{id}"),
        }
    }
}
