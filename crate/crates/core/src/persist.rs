//! Flat-file persistence of the invariant cache.
//!
//! Layout: a header line, one `key<TAB>p/q` line per entry, and a trailer
//! carrying the SHA-256 of everything before it. A file failing any check is
//! rejected as a whole.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gwengine::InvariantKey;
use crate::Rational;

pub const CACHE_FILE_NAME: &str = "gw_cache.tsv";
const HEADER: &str = "# gw-cache v1";
const TRAILER: &str = "# sha256 ";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("cache corrupt: {0}")]
    Corrupt(String),
}

fn digest_hex(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn encode(entries: &[(InvariantKey, Rational)]) -> String {
    let mut body = String::new();
    body.push_str(HEADER);
    body.push('\n');
    for (k, v) in entries {
        let _ = writeln!(body, "{k}\t{v}");
    }
    let digest = digest_hex(&body);
    body.push_str(TRAILER);
    body.push_str(&digest);
    body.push('\n');
    body
}

pub fn decode(text: &str) -> Result<Vec<(InvariantKey, Rational)>, CacheError> {
    let corrupt = |m: String| CacheError::Corrupt(m);
    let trailer_at = text.rfind(TRAILER).ok_or_else(|| corrupt("missing checksum".into()))?;
    let (body, trailer) = text.split_at(trailer_at);
    let digest = trailer[TRAILER.len()..].trim_end();
    if digest != digest_hex(body) {
        return Err(corrupt("checksum mismatch".into()));
    }
    let mut lines = body.lines();
    if lines.next() != Some(HEADER) {
        return Err(corrupt("bad header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| corrupt(format!("line {}: missing tab", i + 2)))?;
            let key: InvariantKey = key.parse().map_err(|e| corrupt(format!("line {}: {e}", i + 2)))?;
            let value: Rational = value.parse().map_err(|e| corrupt(format!("line {}: {e:?}", i + 2)))?;
            Ok((key, value))
        })
        .collect()
}

pub fn write_cache(path: &Path, entries: &[(InvariantKey, Rational)]) -> Result<(), CacheError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode(entries))?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// A missing file is an empty cache.
pub fn read_cache(path: &Path) -> Result<Vec<(InvariantKey, Rational)>, CacheError> {
    match fs::read_to_string(path) {
        Ok(text) => decode(&text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e.into()),
    }
}
