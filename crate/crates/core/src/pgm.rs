//! Binary PGM (P5, maxval 255) reading and writing.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::{BinaryMask, Heatmap, Scalar};

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("file not found: {0}")]
    NotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("unsupported format: expected P5 magic, found {0:?}")]
    UnsupportedFormat(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated payload: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
}

/// Reads a P5 file as a heatmap with values `byte / 255`.
pub fn load_heatmap<T: Scalar>(path: impl AsRef<Path>) -> Result<Heatmap<T>, PgmError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => PgmError::NotFound(path.to_path_buf()),
        _ => PgmError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    parse_heatmap(&bytes)
}

pub fn parse_heatmap<T: Scalar>(bytes: &[u8]) -> Result<Heatmap<T>, PgmError> {
    let (width, height, payload) = parse_p5(bytes)?;
    let scale = T::lit(255.0);
    let values = payload
        .iter()
        .map(|&b| T::from_u8(b).expect("byte fits scalar") / scale)
        .collect();
    Ok(Heatmap::new(width, height, values).expect("header dimensions are positive and bytes lie in [0, 1]"))
}

fn parse_p5(bytes: &[u8]) -> Result<(usize, usize, &[u8]), PgmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(PgmError::UnsupportedFormat(magic));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (k, name) in ["width", "height", "maxval"].iter().enumerate() {
        // whitespace and comments between tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|b| *b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(PgmError::MalformedHeader(format!("missing {name}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        fields[k] = text
            .parse()
            .map_err(|_| PgmError::MalformedHeader(format!("{name} {text} does not fit")))?;
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(PgmError::MalformedHeader("no separator after maxval".into())),
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader(format!(
            "dimensions {width}x{height} are empty"
        )));
    }
    if maxval != 255 {
        return Err(PgmError::MalformedHeader(format!(
            "maxval {maxval} is not 255"
        )));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| PgmError::MalformedHeader("dimensions overflow".into()))?;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            got: payload.len(),
        });
    }
    Ok((width, height, &payload[..expected]))
}

fn encode(width: usize, height: usize, data: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(data);
    out
}

/// Encodes values as `round(v * 255)`.
pub fn encode_heatmap<T: Scalar>(hm: &Heatmap<T>) -> Vec<u8> {
    let scale = T::lit(255.0);
    encode(
        hm.width(),
        hm.height(),
        hm.values()
            .iter()
            .map(|v| (*v * scale).round().to_u8().unwrap_or(255)),
    )
}

/// Set bits as 255, clear bits as 0.
pub fn encode_mask(mask: &BinaryMask) -> Vec<u8> {
    encode(
        mask.width(),
        mask.height(),
        mask.bits().iter().map(|b| if *b { 255 } else { 0 }),
    )
}

pub fn save_heatmap<T: Scalar>(hm: &Heatmap<T>, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, encode_heatmap(hm))
}

pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, encode_mask(mask))
}
