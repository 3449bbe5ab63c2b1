//! On-disk progress cache for long sweeps.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      8 bytes  "NRMCACHE"
//! version    u32      1
//! encoding   u32      1 = base-n, point 1 most significant
//! degree     u32
//! rank       u32      0 = all singular ranks
//! digest     u64      FNV-1a of the generators
//! label_len  u32, label bytes (UTF-8)
//! cursor     u64      next encoding to scan
//! reps       u64      representatives checked so far
//! complete   u8
//! strategy   u8
//! bitmap     n^n bits as u64 words
//! ```

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normalizing::BitmapIndex;

const MAGIC: &[u8; 8] = b"NRMCACHE";
const VERSION: u32 = 1;
pub const ENCODING_ID: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHeader {
    pub degree: usize,
    pub label: String,
    pub digest: u64,
    pub rank: usize,
}

#[derive(Debug)]
pub struct CacheState {
    pub bitmap: BitmapIndex,
    pub cursor: u64,
    pub representatives: u64,
    pub complete: bool,
    pub strategy: u8,
}

/// Writes the cache atomically (temporary file, then rename).
pub fn save(
    path: &Path,
    header: &CacheHeader,
    bitmap: &BitmapIndex,
    cursor: u64,
    representatives: u64,
    complete: bool,
    strategy: u8,
) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(MAGIC)?;
        for v in [
            VERSION,
            ENCODING_ID,
            header.degree as u32,
            header.rank as u32,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&header.digest.to_le_bytes())?;
        w.write_all(&(header.label.len() as u32).to_le_bytes())?;
        w.write_all(header.label.as_bytes())?;
        w.write_all(&cursor.to_le_bytes())?;
        w.write_all(&representatives.to_le_bytes())?;
        w.write_all(&[complete as u8, strategy])?;
        for word in bitmap.words() {
            w.write_all(&word.to_le_bytes())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Reads a cache, refusing it unless its header matches `expected`.
pub fn load(path: &Path, expected: &CacheHeader) -> Result<CacheState> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::CacheMismatch("not a progress cache".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::CacheMismatch(format!("version {version}")));
    }
    let encoding = read_u32(&mut r)?;
    if encoding != ENCODING_ID {
        return Err(Error::CacheMismatch(format!(
            "encoding convention {encoding}"
        )));
    }
    let degree = read_u32(&mut r)? as usize;
    let rank = read_u32(&mut r)? as usize;
    let digest = read_u64(&mut r)?;
    let len = read_u32(&mut r)? as usize;
    if len > 4096 {
        return Err(Error::CacheMismatch("label too long".into()));
    }
    let mut label = vec![0u8; len];
    r.read_exact(&mut label)?;
    let found = CacheHeader {
        degree,
        label: String::from_utf8_lossy(&label).into_owned(),
        digest,
        rank,
    };
    if found != *expected {
        return Err(Error::CacheMismatch(format!(
            "cache is for {} on {} points (rank {}, digest {:016x}), expected {} on {} points (rank {}, digest {:016x})",
            found.label, found.degree, found.rank, found.digest,
            expected.label, expected.degree, expected.rank, expected.digest
        )));
    }
    let cursor = read_u64(&mut r)?;
    let representatives = read_u64(&mut r)?;
    let mut flags = [0u8; 2];
    r.read_exact(&mut flags)?;
    let words_len = (BitmapIndex::bytes_needed(degree) / 8) as usize;
    let mut words = Vec::with_capacity(words_len);
    for _ in 0..words_len {
        words.push(read_u64(&mut r)?);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::CacheMismatch("trailing bytes".into()));
    }
    Ok(CacheState {
        bitmap: BitmapIndex::from_words(degree, words)?,
        cursor,
        representatives,
        complete: flags[0] != 0,
        strategy: flags[1],
    })
}
