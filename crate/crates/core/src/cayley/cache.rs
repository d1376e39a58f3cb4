//! On-disk ball cache.
//!
//! File layout (little-endian):
//!
//! ```text
//! magic      8 bytes  "DEADBALL"
//! version    u32
//! key        32 bytes SHA-256 of the canonical JSON of {group, gens, radius}
//! radius     u32
//! count      u64
//! count records:
//!   len      u32, then `len` bytes of canonical element encoding
//!   distance u32
//!   parent   u32 (u32::MAX for the identity)
//!   letter   u32 generator index, u8 inverse flag
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};

use super::{Ball, Budget, Node};
use crate::error::{Error, Result};
use crate::group::json::canonical_string;
use crate::group::{Element, GeneratingSet, Letter};

const MAGIC: &[u8; 8] = b"DEADBALL";
const VERSION: u32 = 1;
const NO_PARENT: u32 = u32::MAX;

/// Content key of a ball: identifies group, generators and radius.
pub fn ball_key(gens: &GeneratingSet, radius: u32) -> Result<[u8; 32]> {
    let payload = json!({
        "group": gens.group(),
        "gens": gens,
        "radius": radius.to_string(),
    });
    Ok(Sha256::digest(canonical_string(&payload)?.as_bytes()).into())
}

impl Ball {
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&ball_key(self.gens(), self.radius())?)?;
        out.write_all(&self.radius().to_le_bytes())?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        let mut buf = Vec::new();
        for node in self.nodes() {
            buf.clear();
            node.element.encode_into(&mut buf);
            out.write_all(&(buf.len() as u32).to_le_bytes())?;
            out.write_all(&buf)?;
            out.write_all(&node.distance.to_le_bytes())?;
            let (parent, letter) = node.parent.unwrap_or((NO_PARENT, Letter::pos(0)));
            out.write_all(&parent.to_le_bytes())?;
            out.write_all(&letter.index.to_le_bytes())?;
            out.write_all(&[letter.inverse as u8])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a ball written by [`Ball::write_to`], refusing it unless its key
    /// matches `gens` and `radius`. Parent links are re-checked against the
    /// group law.
    pub fn read_from<R: Read>(mut input: R, gens: &GeneratingSet, radius: u32) -> Result<Ball> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Cache("not a ball cache file".into()));
        }
        let version = read_u32(&mut input)?;
        if version != VERSION {
            return Err(Error::Cache(format!("unsupported cache version {version}")));
        }
        let mut key = [0u8; 32];
        input.read_exact(&mut key)?;
        if key != ball_key(gens, radius)? {
            return Err(Error::Cache("cache key does not match group, generators and radius".into()));
        }
        if read_u32(&mut input)? != radius {
            return Err(Error::Cache("radius mismatch".into()));
        }
        let count = read_u64(&mut input)? as usize;
        let mut nodes: Vec<Node> = Vec::with_capacity(count.min(1 << 20));
        let group = gens.group();
        for i in 0..count {
            let len = read_u32(&mut input)? as usize;
            let mut bytes = vec![0u8; len];
            input.read_exact(&mut bytes)?;
            let element = Element::decode(&bytes)?;
            let distance = read_u32(&mut input)?;
            let parent = read_u32(&mut input)?;
            let index = read_u32(&mut input)?;
            let mut flag = [0u8; 1];
            input.read_exact(&mut flag)?;
            let parent = if parent == NO_PARENT {
                None
            } else {
                let letter = Letter {
                    index,
                    inverse: flag[0] != 0,
                };
                let from = nodes
                    .get(parent as usize)
                    .ok_or_else(|| Error::Cache(format!("record {i} has a dangling parent")))?;
                let expected = group.multiply(&from.element, gens.letter_value(letter)?)?;
                if expected != element || from.distance + 1 != distance {
                    return Err(Error::Cache(format!("record {i} has an inconsistent parent link")));
                }
                Some((parent, letter))
            };
            nodes.push(Node {
                element,
                distance,
                parent,
            });
        }
        let mut rest = [0u8; 1];
        if input.read(&mut rest)? != 0 {
            return Err(Error::Cache("trailing bytes in cache file".into()));
        }
        Ball::from_parts(gens.clone(), radius, nodes)
    }
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// A directory of cached balls, one file per content key.
#[derive(Clone, Debug)]
pub struct BallCache {
    dir: PathBuf,
}

impl BallCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<BallCache> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(BallCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    pub fn path_for(&self, gens: &GeneratingSet, radius: u32) -> Result<PathBuf> {
        Ok(self.dir.join(format!("{}.ball", hex::encode(ball_key(gens, radius)?))))
    }

    pub fn load(&self, gens: &GeneratingSet, radius: u32) -> Result<Option<Ball>> {
        let path = self.path_for(gens, radius)?;
        if !path.exists() {
            return Ok(None);
        }
        let file = BufReader::new(File::open(&path)?);
        Ball::read_from(file, gens, radius).map(Some)
    }

    pub fn store(&self, ball: &Ball) -> Result<PathBuf> {
        let path = self.path_for(ball.gens(), ball.radius())?;
        let tmp = path.with_extension("tmp");
        ball.write_to(BufWriter::new(File::create(&tmp)?))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn get_or_build(&self, gens: &GeneratingSet, radius: u32, budget: &Budget) -> Result<Ball> {
        if let Some(ball) = self.load(gens, radius)? {
            log::debug!("ball cache hit for radius {radius}");
            return Ok(ball);
        }
        let ball = Ball::build(gens, radius, budget)?;
        self.store(&ball)?;
        Ok(ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = BallCache::new(dir.path()).unwrap();
        let gens = GeneratingSet::standard(&Group::lamplighter()).unwrap();
        let budget = Budget::default();
        let built = cache.get_or_build(&gens, 6, &budget).unwrap();
        assert!(cache.path_for(&gens, 6).unwrap().exists());
        let loaded = cache.load(&gens, 6).unwrap().unwrap();
        assert_eq!(built, loaded);
        assert_eq!(loaded.sphere_sizes(), built.sphere_sizes());
        let g = loaded.iter().last().unwrap().0.clone();
        assert_eq!(loaded.geodesic(&g).unwrap(), built.geodesic(&g).unwrap());
    }

    #[test]
    fn mismatched_key_is_refused() {
        let gens = GeneratingSet::parse(&Group::integers(), "1").unwrap();
        let other = GeneratingSet::parse(&Group::integers(), "2").unwrap();
        let ball = Ball::build(&gens, 4, &Budget::default()).unwrap();
        let mut bytes = Vec::new();
        ball.write_to(&mut bytes).unwrap();
        assert!(Ball::read_from(&bytes[..], &gens, 4).is_ok());
        assert!(matches!(Ball::read_from(&bytes[..], &other, 4), Err(Error::Cache(_))));
        assert!(matches!(Ball::read_from(&bytes[..], &gens, 5), Err(Error::Cache(_))));
    }

    #[test]
    fn corrupted_records_are_refused() {
        let gens = GeneratingSet::parse(&Group::integers(), "1").unwrap();
        let ball = Ball::build(&gens, 3, &Budget::default()).unwrap();
        let mut bytes = Vec::new();
        ball.write_to(&mut bytes).unwrap();
        // header is 8 + 4 + 32 + 4 + 8 = 56 bytes; the second record's
        // element payload starts at 56 + (4 + 9 + 13) + 4 + 1
        let pos = 56 + 26 + 5;
        bytes[pos] ^= 1;
        assert!(Ball::read_from(&bytes[..], &gens, 3).is_err());
        let mut truncated = Vec::new();
        ball.write_to(&mut truncated).unwrap();
        truncated.pop();
        assert!(Ball::read_from(&truncated[..], &gens, 3).is_err());
    }
}
