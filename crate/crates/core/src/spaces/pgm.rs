//! Minimal PGM (portable graymap) reading and writing, P2 and P5.

use std::path::Path;

use crate::bitset::PointSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples.
    pub pixels: Vec<u16>,
}

impl GrayImage {
    /// Pixels at or above `threshold` (below it, when `invert`).
    pub fn threshold(&self, threshold: u16, invert: bool) -> PointSet {
        PointSet::from_indices(
            self.pixels.len(),
            self.pixels
                .iter()
                .enumerate()
                .filter(|(_, &p)| (p >= threshold) != invert)
                .map(|(i, _)| i),
        )
    }

    /// A binary image: members of `set` white, the rest black.
    pub fn from_set(width: usize, height: usize, set: &PointSet) -> Self {
        let pixels = (0..width * height)
            .map(|i| if set.contains(i) { 255 } else { 0 })
            .collect();
        GrayImage {
            width,
            height,
            maxval: 255,
            pixels,
        }
    }

    /// Binary P5 encoding (8-bit samples when `maxval < 256`).
    pub fn to_p5(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for &p in &self.pixels {
            if self.maxval < 256 {
                out.push(p as u8);
            } else {
                out.extend_from_slice(&p.to_be_bytes());
            }
        }
        out
    }
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_pgm(&bytes)
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let magic = token(bytes, &mut pos)?;
    let binary = match magic.as_str() {
        "P5" => true,
        "P2" => false,
        _ => return Err(Error::invalid(format!("not a PGM file (magic `{magic}`)"))),
    };
    let width = number(bytes, &mut pos)?;
    let height = number(bytes, &mut pos)?;
    let maxval = number(bytes, &mut pos)?;
    if width == 0 || height == 0 || maxval == 0 || maxval > 65535 {
        return Err(Error::invalid("bad PGM header"));
    }
    let count = width * height;
    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates header and raster
        pos += 1;
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let raster = bytes
            .get(pos..pos + need)
            .ok_or_else(|| Error::invalid("truncated PGM raster"))?;
        if wide {
            pixels.extend(raster.chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])));
        } else {
            pixels.extend(raster.iter().map(|&b| b as u16));
        }
    } else {
        for _ in 0..count {
            pixels.push(number(bytes, &mut pos)? as u16);
        }
    }
    if pixels.iter().any(|&p| p as usize > maxval) {
        return Err(Error::invalid("PGM sample exceeds maxval"));
    }
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

fn token(bytes: &[u8], pos: &mut usize) -> Result<String> {
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
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::invalid("unexpected end of PGM data"));
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    let t = token(bytes, pos)?;
    t.parse()
        .map_err(|_| Error::invalid(format!("bad number `{t}` in PGM data")))
}
