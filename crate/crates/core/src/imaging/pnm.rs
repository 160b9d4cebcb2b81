//! Netpbm gray and color maps (P2, P3, P5, P6) with a maximum value of 255.

use std::fs;
use std::path::Path;

use super::ImageBuffer;
use crate::error::{Error, Result};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let Some(tok) = self.token() else {
            return parse_err(format!("missing {what}"));
        };
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad {what} {:?}", String::from_utf8_lossy(tok))))
    }
}

pub fn decode_pnm(bytes: &[u8]) -> Result<ImageBuffer> {
    let mut cur = Cursor { bytes, pos: 0 };
    let (channels, binary) = match cur.token() {
        Some(b"P2") => (1, false),
        Some(b"P3") => (3, false),
        Some(b"P5") => (1, true),
        Some(b"P6") => (3, true),
        _ => return parse_err("not a P2/P3/P5/P6 file"),
    };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maximum value")?;
    if width == 0 || height == 0 {
        return parse_err(format!("empty image {width}x{height}"));
    }
    if maxval != 255 {
        return parse_err(format!("maximum value must be 255, got {maxval}"));
    }
    let count = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(channels))
        .ok_or_else(|| Error::Parse("image dimensions overflow".into()))?;

    let data = if binary {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return parse_err("missing separator before pixel data"),
        }
        let Some(raw) = bytes.get(cur.pos..cur.pos + count) else {
            return parse_err(format!(
                "truncated pixel data: {} of {count} bytes",
                bytes.len() - cur.pos
            ));
        };
        raw.to_vec()
    } else {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let v = cur.number(&format!("sample {i}"))?;
            if v > 255 {
                return parse_err(format!("sample {i} = {v} exceeds 255"));
            }
            out.push(v as u8);
        }
        out
    };
    ImageBuffer::new(width, height, channels, data)
}

/// Binary encoding: P5 for gray, P6 for color.
pub fn encode_pnm(buf: &ImageBuffer) -> Vec<u8> {
    let magic = if buf.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", buf.width(), buf.height()).into_bytes();
    out.extend_from_slice(buf.data());
    out
}

pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    decode_pnm(&fs::read(path)?)
}

pub fn save_image(buf: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pnm(buf))?;
    Ok(())
}
