//! 8-bit grayscale export of patterns and overlaps.
//!
//! Slot mapping: Dark 0, Bright 255, H 255, V 128. Overlap intensities are
//! scaled by 255/S so a fully transmitting slot is white for every scheme.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::bar::{OverlapImage, PatternImage};
use crate::circular::PolarPattern;
use crate::codec::{CodingScheme, SlotState};
use crate::error::{Error, Result};
use crate::io::config::ImageFormat;

pub const GRAY_V: u8 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

pub fn slot_gray(s: SlotState) -> u8 {
    match s {
        SlotState::Dark => 0,
        SlotState::Bright | SlotState::H => 255,
        SlotState::V => GRAY_V,
    }
}

pub fn intensity_gray(i: u32, scheme: CodingScheme) -> u8 {
    let s = scheme.signal_level();
    let scaled = (u64::from(i) * 255 + u64::from(s) / 2) / u64::from(s);
    scaled.min(255) as u8
}

impl GrayImage {
    pub fn from_pattern(p: &PatternImage) -> Self {
        Self {
            width: p.cols(),
            height: p.rows(),
            pixels: p.slots().iter().map(|&s| slot_gray(s)).collect(),
        }
    }

    pub fn from_overlap(img: &OverlapImage) -> Self {
        Self {
            width: img.cols(),
            height: img.rows(),
            pixels: img
                .data()
                .iter()
                .map(|&i| intensity_gray(i, img.scheme()))
                .collect(),
        }
    }

    pub fn from_polar(p: &PolarPattern) -> Self {
        Self {
            width: p.width(),
            height: p.height(),
            pixels: p.pixels().iter().map(|&s| slot_gray(s)).collect(),
        }
    }
}

/// Inverse of [`slot_gray`] for a scheme: white decodes to H under the
/// polarization schemes and to Bright otherwise.
pub fn gray_to_slots(img: &GrayImage, scheme: CodingScheme) -> Result<Vec<SlotState>> {
    let white = match scheme {
        CodingScheme::TypeII | CodingScheme::TypeIII => SlotState::H,
        CodingScheme::TypeI | CodingScheme::TypeIV => SlotState::Bright,
    };
    img.pixels
        .iter()
        .map(|&g| match g {
            0 => Ok(SlotState::Dark),
            255 => Ok(white),
            GRAY_V => Ok(SlotState::V),
            other => Err(Error::MalformedImage(format!(
                "gray level {other} is not a slot"
            ))),
        })
        .collect()
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Reads back what [`encode_pgm`] writes (single whitespace separators, no
/// comments).
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let bad = |m: &str| Error::MalformedImage(m.to_string());
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header"))?);
    }
    pos += 1;
    if fields[0] != "P5" {
        return Err(bad("not a binary PGM"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("header number"));
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    let pixels = bytes.get(pos..).unwrap_or_default();
    if pixels.len() != width * height {
        return Err(bad("payload size"));
    }
    Ok(GrayImage {
        width,
        height,
        pixels: pixels.to_vec(),
    })
}

pub fn encode_png(img: &GrayImage, w: impl Write) -> Result<()> {
    let mut enc = png::Encoder::new(w, img.width as u32, img.height as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header()?;
    writer.write_image_data(&img.pixels)?;
    writer.finish()?;
    Ok(())
}

pub fn write_image(img: &GrayImage, format: ImageFormat, path: impl AsRef<Path>) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    match format {
        ImageFormat::Pgm => file.write_all(&encode_pgm(img))?,
        ImageFormat::Png => encode_png(img, &mut file)?,
    }
    file.flush()?;
    Ok(())
}
