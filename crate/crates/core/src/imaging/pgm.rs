//! Grayscale Netpbm (PGM) reading and writing, ASCII `P2` and binary `P5`,
//! `maxval ≤ 255`.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmFormat {
    /// `P5`.
    #[default]
    Binary,
    /// `P2`.
    Ascii,
}

fn parse_err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_blank(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Reads the next decimal token; returns it with its byte offset.
    fn number(&mut self, what: &str) -> Result<(u64, usize)> {
        self.skip_blank();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return if start >= self.data.len() {
                parse_err(
                    start,
                    format!("unexpected end of data while reading {what}"),
                )
            } else {
                parse_err(start, format!("expected a decimal number for {what}"))
            };
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(v) => Ok((v, start)),
            Err(_) => parse_err(start, format!("{what} is out of range")),
        }
    }
}

/// Decodes a PGM byte stream into intensities `p / maxval`.
pub fn decode_pgm(data: &[u8]) -> Result<Image> {
    if data.len() < 2 || data[0] != b'P' {
        return parse_err(0, "missing `P` magic number");
    }
    let binary = match data[1] {
        b'2' => false,
        b'5' => true,
        b'3' | b'6' => {
            return Err(Error::UnsupportedFormat(
                "color PPM input; convert to grayscale PGM first".into(),
            ))
        }
        b'1' | b'4' => return Err(Error::UnsupportedFormat("bitmap (PBM) input".into())),
        _ => return parse_err(1, "magic number must be P2 or P5"),
    };
    let mut cur = Cursor { data, pos: 2 };
    if cur.pos < data.len() && !(data[cur.pos].is_ascii_whitespace() || data[cur.pos] == b'#') {
        return parse_err(cur.pos, "expected whitespace after magic number");
    }
    let (width, width_at) = cur.number("width")?;
    let (height, _) = cur.number("height")?;
    if width == 0 || height == 0 {
        return parse_err(
            width_at,
            format!("image dimensions must be positive, got {width}x{height}"),
        );
    }
    let (maxval, maxval_at) = cur.number("maxval")?;
    if maxval == 0 {
        return parse_err(maxval_at, "maxval must be positive");
    }
    if maxval > 255 {
        return Err(Error::UnsupportedFormat(format!(
            "maxval {maxval} exceeds 255 (16-bit PGM)"
        )));
    }
    let count = (width as usize)
        .checked_mul(height as usize)
        .filter(|n| *n <= (1 << 31))
        .ok_or_else(|| Error::Parse {
            offset: width_at,
            message: format!("image dimensions {width}x{height} are too large"),
        })?;
    let scale = maxval as f64;

    let mut pixels = Vec::with_capacity(count);
    if binary {
        if cur.pos >= data.len() || !data[cur.pos].is_ascii_whitespace() {
            return parse_err(cur.pos, "expected a single whitespace byte after maxval");
        }
        let start = cur.pos + 1;
        let available = data.len() - start;
        if available < count {
            return parse_err(
                data.len(),
                format!(
                    "truncated payload: expected {count} bytes, found {available} ({} missing)",
                    count - available
                ),
            );
        }
        for (i, &b) in data[start..start + count].iter().enumerate() {
            if b as u64 > maxval {
                return parse_err(start + i, format!("sample {b} exceeds maxval {maxval}"));
            }
            pixels.push(b as f64 / scale);
        }
    } else {
        for i in 0..count {
            let (v, at) = cur.number(&format!("pixel {i}"))?;
            if v > maxval {
                return parse_err(at, format!("sample {v} exceeds maxval {maxval}"));
            }
            pixels.push(v as f64 / scale);
        }
    }
    Image::new(width as usize, height as usize, pixels)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&std::fs::read(path)?)
}

/// Clamps to `[0, 1]` and quantizes to `round(255·p)`.
pub fn quantize(p: f64) -> u8 {
    (p.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn encode_pgm(img: &Image, format: PgmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(img.len() * 4 + 32);
    match format {
        PgmFormat::Binary => {
            out.extend_from_slice(format!("P5\n{w} {h}\n255\n").as_bytes());
            out.extend(img.pixels().iter().map(|p| quantize(*p)));
        }
        PgmFormat::Ascii => {
            out.extend_from_slice(format!("P2\n{w} {h}\n255\n").as_bytes());
            for row in img.pixels().chunks(w) {
                let line: Vec<String> = row.iter().map(|p| quantize(*p).to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

/// Writes atomically: the bytes land in a temporary file next to `path`,
/// which is then renamed over it.
pub fn save_pgm(img: &Image, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
    write_atomic(path.as_ref(), &encode_pgm(img, format))
}

/// Replaces `path` with `bytes` via a same-directory temporary file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // Subject to the process umask, like a plain create.
        builder.permissions(std::fs::Permissions::from_mode(0o666));
    }
    let mut tmp = builder.tempfile_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
