//! Minimal binary PGM (P5, maxval 255) reader and writer.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("failed to read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("failed to write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("{path}: malformed PGM header")]
    MalformedHeader { path: String },
    #[error("{path}: unsupported maxval {maxval} (only 255 is handled)")]
    UnsupportedMaxval { path: String, maxval: u32 },
    #[error("{path}: truncated payload, expected {expected} bytes, got {got}")]
    Truncated { path: String, expected: usize, got: usize },
}

/// Raw 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

/// Pulls the next whitespace-delimited token, skipping `#` comments.
fn next_token(bytes: &[u8], pos: &mut usize) -> Option<Vec<u8>> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    if *pos >= bytes.len() {
        return None;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    Some(bytes[start..*pos].to_vec())
}

fn parse_number(token: Option<Vec<u8>>) -> Option<u32> {
    let token = token?;
    let text = std::str::from_utf8(&token).ok()?;
    text.parse().ok()
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<PgmImage, PgmError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| PgmError::Read { path: display.clone(), source })?;

    let mut pos = 0;
    let magic = next_token(&bytes, &mut pos);
    if magic.as_deref() != Some(b"P5") {
        return Err(PgmError::MalformedHeader { path: display });
    }
    let cols = parse_number(next_token(&bytes, &mut pos))
        .ok_or_else(|| PgmError::MalformedHeader { path: display.clone() })? as usize;
    let rows = parse_number(next_token(&bytes, &mut pos))
        .ok_or_else(|| PgmError::MalformedHeader { path: display.clone() })? as usize;
    let maxval = parse_number(next_token(&bytes, &mut pos))
        .ok_or_else(|| PgmError::MalformedHeader { path: display.clone() })?;
    if rows == 0 || cols == 0 {
        return Err(PgmError::MalformedHeader { path: display });
    }
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval { path: display, maxval });
    }
    // Exactly one whitespace byte separates the header from the payload.
    pos += 1;
    let expected = rows * cols;
    let got = bytes.len().saturating_sub(pos);
    if got < expected {
        return Err(PgmError::Truncated { path: display, expected, got });
    }
    Ok(PgmImage { rows, cols, pixels: bytes[pos..pos + expected].to_vec() })
}

pub fn write_pgm(path: impl AsRef<Path>, image: &PgmImage) -> Result<(), PgmError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    assert_eq!(image.pixels.len(), image.rows * image.cols, "pixel buffer length mismatch");
    let mut out = Vec::with_capacity(image.pixels.len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.cols, image.rows).expect("in-memory write");
    out.extend_from_slice(&image.pixels);
    fs::write(path, out).map_err(|source| PgmError::Write { path: display, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let image = PgmImage { rows: 2, cols: 3, pixels: vec![0, 10, 20, 255, 128, 64] };
        write_pgm(&path, &image).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), image);
    }

    #[test]
    fn reads_header_with_comments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        fs::write(&path, b"P5\n# a comment\n2 # inline\n1\n255\n\x01\x02").unwrap();
        let image = read_pgm(&path).unwrap();
        assert_eq!((image.rows, image.cols), (1, 2));
        assert_eq!(image.pixels, vec![1, 2]);
    }

    #[test]
    fn rejects_text_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("notes.txt");
        fs::write(&path, "not an image at all").unwrap();
        assert!(matches!(read_pgm(&path), Err(PgmError::MalformedHeader { .. })));
    }

    #[test]
    fn rejects_truncated_payload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        fs::write(&path, b"P5\n4 4\n255\nxy").unwrap();
        assert!(matches!(read_pgm(&path), Err(PgmError::Truncated { .. })));
    }

    #[test]
    fn rejects_wide_maxval() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        fs::write(&path, b"P5\n1 1\n65535\n\x00\x00").unwrap();
        assert!(matches!(read_pgm(&path), Err(PgmError::UnsupportedMaxval { maxval: 65535, .. })));
    }

    #[test]
    fn missing_file_error_names_path() {
        let err = read_pgm("/nonexistent/dir/img.pgm").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/img.pgm"));
    }
}
