//! Raster data model and portable graymap I/O.
//!
//! Only the Netpbm graymap family is supported: `P2` (ASCII) and `P5`
//! (binary). Binary rasters use one byte per sample when `maxval <= 255` and
//! two big-endian bytes otherwise.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("unsupported magic number {0:?} (expected P2 or P5)")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("maxval {0} out of range 1..=65535")]
    MaxvalOutOfRange(u64),
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample value {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    #[error("invalid mask: pixel value {value} is neither 0 nor maxval {maxval}")]
    InvalidMask { value: u16, maxval: u16 },
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("buffer length {len} does not match {width}x{height}")]
    LengthMismatch {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("binary map value {0} is not 0 or 1")]
    NonBinary(u8),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::InvalidDimensions { width, height });
    }
    if width.checked_mul(height) != Some(len) {
        return Err(RasterError::LengthMismatch { width, height, len });
    }
    Ok(())
}

/// A single-band image of integer intensities, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u16>) -> Result<Self, RasterError> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u16) -> Result<Self, RasterError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u16,
    ) -> Result<Self, RasterError> {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.pixels[row * self.width + col]
    }

    pub fn max_value(&self) -> u16 {
        self.pixels.iter().copied().max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |r, c| self.get(c, r))
            .expect("transpose preserves a valid shape")
    }

    /// Rotate a quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let h = self.height;
        Self::from_fn(self.height, self.width, |r, c| self.get(h - 1 - c, r))
            .expect("rotation preserves a valid shape")
    }
}

impl fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrayImage({}x{})", self.width, self.height)
    }
}

/// A rectangular grid of `{0, 1}` values. Used for land/water masks and for
/// edge maps alike.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BinaryMap {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self, RasterError> {
        check_dims(width, height, bits.len())?;
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(RasterError::NonBinary(bad));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, RasterError> {
        Self::new(width, height, vec![0; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, RasterError> {
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(u8::from(f(row, col)));
            }
        }
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col] == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = u8::from(value);
    }

    /// Number of 1-pixels.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(move |(i, _)| (i / w, i % w))
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| 1 - b).collect(),
        }
    }

    /// True when every 1-pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMap) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a <= b)
    }

    pub fn same_shape(&self, other: &BinaryMap) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Scale to a graymap with values `{0, high}`.
    pub fn to_gray(&self, high: u16) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.bits.iter().map(|&b| u16::from(b) * high).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |r, c| self.get(c, r))
            .expect("transpose preserves a valid shape")
    }

    /// Rotate a quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let h = self.height;
        Self::from_fn(self.height, self.width, |r, c| self.get(h - 1 - c, r))
            .expect("rotation preserves a valid shape")
    }
}

impl fmt::Debug for BinaryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMap({}x{})", self.width, self.height)?;
        if self.width * self.height <= 64 * 64 {
            for row in self.bits.chunks(self.width) {
                let line: String = row
                    .iter()
                    .map(|&b| if b == 1 { '#' } else { '.' })
                    .collect();
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Row-major grid of real values, the working type between Canny stages.
#[derive(Clone, Debug, PartialEq)]
pub struct RealGrid {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl RealGrid {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self, RasterError> {
        check_dims(width, height, values.len())?;
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, RasterError> {
        Self::new(width, height, vec![0.0; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, RasterError> {
        let mut values = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                values.push(f(row, col));
            }
        }
        Self::new(width, height, values)
    }

    pub fn from_image(image: &GrayImage) -> Self {
        Self {
            width: image.width,
            height: image.height,
            values: image.pixels.iter().map(|&p| f64::from(p)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |r, c| self.get(c, r))
            .expect("transpose preserves a valid shape")
    }
}

/// Spectral band of a Sentinel-2 Level-2A product (12 bands; B10 is absent).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandId {
    B01,
    B02,
    B03,
    B04,
    B05,
    B06,
    B07,
    B08,
    B8A,
    B09,
    B11,
    B12,
}

impl BandId {
    pub const ALL: [BandId; 12] = [
        BandId::B01,
        BandId::B02,
        BandId::B03,
        BandId::B04,
        BandId::B05,
        BandId::B06,
        BandId::B07,
        BandId::B08,
        BandId::B8A,
        BandId::B09,
        BandId::B11,
        BandId::B12,
    ];

    /// Near-infrared reference band.
    pub const NIR: BandId = BandId::B08;

    pub fn name(self) -> &'static str {
        match self {
            BandId::B01 => "B01",
            BandId::B02 => "B02",
            BandId::B03 => "B03",
            BandId::B04 => "B04",
            BandId::B05 => "B05",
            BandId::B06 => "B06",
            BandId::B07 => "B07",
            BandId::B08 => "B08",
            BandId::B8A => "B8A",
            BandId::B09 => "B09",
            BandId::B11 => "B11",
            BandId::B12 => "B12",
        }
    }

    pub fn is_nir(self) -> bool {
        self == Self::NIR
    }
}

impl fmt::Display for BandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BandId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        if upper == "NIR" {
            return Ok(Self::NIR);
        }
        Self::ALL
            .into_iter()
            .find(|b| b.name() == upper)
            .ok_or_else(|| format!("unknown band {s:?}"))
    }
}

/// Band label attached to an input raster: either a named spectral band or a
/// single anonymous band (synthetic scenes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    Single,
    Spectral(BandId),
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Band::Single => f.write_str("single"),
            Band::Spectral(id) => id.fmt(f),
        }
    }
}

impl FromStr for Band {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" | "band" => Ok(Band::Single),
            _ => s.parse().map(Band::Spectral),
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<u64, RasterError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(RasterError::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| RasterError::MalformedHeader(format!("{what} is not a valid integer")))
    }
}

/// Decode a P2 or P5 graymap from memory. Pixel values are kept exactly.
pub fn decode_pgm(data: &[u8]) -> Result<(GrayImage, u16), RasterError> {
    if data.len() < 2 {
        return Err(RasterError::BadMagic(
            String::from_utf8_lossy(data).into_owned(),
        ));
    }
    let binary = match &data[..2] {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(RasterError::BadMagic(
                String::from_utf8_lossy(other).into_owned(),
            ))
        }
    };
    let mut cur = Cursor { data, pos: 2 };
    if !cur
        .data
        .get(cur.pos)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(RasterError::MalformedHeader(
            "magic number must be followed by whitespace".into(),
        ));
    }
    let width = cur.read_uint("width")? as usize;
    let height = cur.read_uint("height")? as usize;
    let maxval = cur.read_uint("maxval")?;
    if !(1..=65535).contains(&maxval) {
        return Err(RasterError::MaxvalOutOfRange(maxval));
    }
    if width == 0 || height == 0 {
        return Err(RasterError::InvalidDimensions { width, height });
    }
    let maxval = maxval as u32;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| RasterError::MalformedHeader("dimensions overflow".into()))?;
    let mut pixels = Vec::with_capacity(expected);

    if binary {
        // exactly one whitespace byte separates the header from the raster
        match cur.data.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => {
                return Err(RasterError::MalformedHeader(
                    "missing whitespace after maxval".into(),
                ))
            }
        }
        let raster = &cur.data[cur.pos..];
        let bytes_per = if maxval <= 255 { 1 } else { 2 };
        let found = raster.len() / bytes_per;
        if found < expected {
            return Err(RasterError::Truncated { expected, found });
        }
        for i in 0..expected {
            let v = if bytes_per == 1 {
                u32::from(raster[i])
            } else {
                u32::from(u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]))
            };
            if v > maxval {
                return Err(RasterError::SampleOutOfRange { value: v, maxval });
            }
            pixels.push(v as u16);
        }
    } else {
        for found in 0..expected {
            cur.skip_whitespace_and_comments();
            if cur.pos >= cur.data.len() {
                return Err(RasterError::Truncated { expected, found });
            }
            let v = cur.read_uint("sample")?;
            if v > u64::from(maxval) {
                return Err(RasterError::SampleOutOfRange {
                    value: v.min(u64::from(u32::MAX)) as u32,
                    maxval,
                });
            }
            pixels.push(v as u16);
        }
    }
    Ok((GrayImage::new(width, height, pixels)?, maxval as u16))
}

/// Encode as binary `P5`. The maxval written is the image maximum (at least 1),
/// which fixes the sample width.
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    encode_pgm_with_maxval(image, image.max_value().max(1))
}

fn encode_pgm_with_maxval(image: &GrayImage, maxval: u16) -> Vec<u8> {
    debug_assert!(image.max_value() <= maxval);
    let mut out = format!("P5\n{} {}\n{}\n", image.width, image.height, maxval).into_bytes();
    if maxval <= 255 {
        out.extend(image.pixels.iter().map(|&p| p as u8));
    } else {
        for &p in &image.pixels {
            out.extend_from_slice(&p.to_be_bytes());
        }
    }
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage, RasterError> {
    let data = fs::read(path)?;
    decode_pgm(&data).map(|(img, _)| img)
}

pub fn save_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<(), RasterError> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

fn mask_from_pgm(image: &GrayImage, maxval: u16) -> Result<BinaryMap, RasterError> {
    let mut bits = Vec::with_capacity(image.pixels.len());
    for &p in &image.pixels {
        if p == 0 {
            bits.push(0);
        } else if p == maxval {
            bits.push(1);
        } else {
            return Err(RasterError::InvalidMask { value: p, maxval });
        }
    }
    BinaryMap::new(image.width, image.height, bits)
}

/// Load a strictly two-valued graymap as a binary map: `maxval` becomes 1 and
/// 0 stays 0. Any intermediate value is rejected.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMap, RasterError> {
    let data = fs::read(path)?;
    let (image, maxval) = decode_pgm(&data)?;
    mask_from_pgm(&image, maxval)
}

/// Write a binary map as `P5` with 1-pixels stored as `high` (use 1 for a
/// compact mask, 255 for a viewable edge map).
pub fn save_mask(map: &BinaryMap, high: u16, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let high = high.max(1);
    fs::write(path, encode_pgm_with_maxval(&map.to_gray(high), high))?;
    Ok(())
}

/// Linear min-max rescale to `0..=255`, rounding half up. A constant image
/// maps to all zeros.
pub fn normalize_to_255(image: &GrayImage) -> GrayImage {
    let min = image.pixels.iter().copied().min().unwrap_or(0);
    let max = image.max_value();
    let span = u64::from(max - min);
    let pixels = if span == 0 {
        vec![0; image.pixels.len()]
    } else {
        image
            .pixels
            .iter()
            // round(255 (v - min) / span) with halves rounded up, in integers
            .map(|&v| ((2 * 255 * u64::from(v - min) + span) / (2 * span)) as u16)
            .collect()
    };
    GrayImage {
        width: image.width,
        height: image.height,
        pixels,
    }
}
