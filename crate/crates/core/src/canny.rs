//! Canny edge detector: Gaussian smoothing, Sobel gradients, non-maximum
//! suppression and hysteresis thresholding.
//!
//! Borders are handled by edge replication in the convolution stages. The
//! non-maximum suppression keeps ties (`>=`), and hysteresis links weak pixels
//! through 8-connectivity.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::raster::{BinaryMap, GrayImage, RealGrid};

#[derive(Debug, Error, PartialEq)]
pub enum CannyError {
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("invalid threshold pair ({low}, {high}): need 0 < low < high")]
    InvalidThresholds { low: f64, high: f64 },
    #[error("grid is {width}x{height}; at least 3x3 is required")]
    TooSmall { width: usize, height: usize },
}

/// Hysteresis bounds on gradient magnitude.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ThresholdPair {
    low: f64,
    high: f64,
}

impl ThresholdPair {
    pub fn new(low: f64, high: f64) -> Result<Self, CannyError> {
        if low.is_finite() && high.is_finite() && 0.0 < low && low < high {
            Ok(Self { low, high })
        } else {
            Err(CannyError::InvalidThresholds { low, high })
        }
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    /// Componentwise `<=`: every edge found with `other` is also found with
    /// `self`.
    pub fn dominated_by(&self, other: &ThresholdPair) -> bool {
        self.low <= other.low && self.high <= other.high
    }
}

impl fmt::Display for ThresholdPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.low, self.high)
    }
}

impl FromStr for ThresholdPair {
    type Err = String;

    /// Parses `low:high`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (l, h) = s
            .split_once(':')
            .ok_or_else(|| format!("expected low:high, got {s:?}"))?;
        let low: f64 = l
            .trim()
            .parse()
            .map_err(|_| format!("bad low bound {l:?}"))?;
        let high: f64 = h
            .trim()
            .parse()
            .map_err(|_| format!("bad high bound {h:?}"))?;
        ThresholdPair::new(low, high).map_err(|e| e.to_string())
    }
}

/// The six hysteresis pairs of the coastline study, in increasing order.
pub fn standard_pairs() -> Vec<ThresholdPair> {
    [
        (50., 100.),
        (50., 150.),
        (100., 200.),
        (100., 300.),
        (200., 400.),
        (200., 600.),
    ]
    .into_iter()
    .map(|(l, h)| ThresholdPair { low: l, high: h })
    .collect()
}

pub const DEFAULT_SIGMA: f64 = 1.0;

/// Quantized gradient orientation, measured in image coordinates with rows
/// growing downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Horizontal gradient; neighbors left and right.
    Deg0,
    /// Gradient along the main diagonal; neighbors up-left and down-right.
    Deg45,
    /// Vertical gradient; neighbors above and below.
    Deg90,
    /// Gradient along the anti-diagonal; neighbors up-right and down-left.
    Deg135,
}

impl Direction {
    /// Nearest of the four orientations to `atan2(gy, gx)` modulo 180 degrees.
    pub fn quantize(gx: f64, gy: f64) -> Self {
        // tan(22.5 deg); both axis tests use the same form so a quarter turn of
        // the input swaps them exactly
        const T: f64 = std::f64::consts::SQRT_2 - 1.0;
        let (ax, ay) = (gx.abs(), gy.abs());
        if ay <= T * ax {
            Direction::Deg0
        } else if ax <= T * ay {
            Direction::Deg90
        } else if (gx > 0.0) == (gy > 0.0) {
            Direction::Deg45
        } else {
            Direction::Deg135
        }
    }

    /// (row, col) offset of one neighbor; the other is its negation.
    fn offset(self) -> (isize, isize) {
        match self {
            Direction::Deg0 => (0, 1),
            Direction::Deg45 => (1, 1),
            Direction::Deg90 => (1, 0),
            Direction::Deg135 => (1, -1),
        }
    }

    pub fn degrees(self) -> u16 {
        match self {
            Direction::Deg0 => 0,
            Direction::Deg45 => 45,
            Direction::Deg90 => 90,
            Direction::Deg135 => 135,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradientField {
    pub magnitude: RealGrid,
    pub direction: Vec<Direction>,
}

impl GradientField {
    pub fn direction_at(&self, row: usize, col: usize) -> Direction {
        self.direction[row * self.magnitude.width() + col]
    }
}

/// Normalized 1-D Gaussian of radius `ceil(3 sigma)`; index `radius` is the
/// center tap.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>, CannyError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(CannyError::InvalidSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let two_s2 = 2.0 * sigma * sigma;
    let mut w: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / two_s2).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}

#[inline]
fn clamp_index(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

/// Smoothed values are snapped to multiples of this step. Mathematically equal
/// results computed in a different pass order (e.g. on a transposed image)
/// then compare equal, and the Sobel sums downstream are exact.
const SNAP: f64 = 1.0 / 65536.0;

/// Separable Gaussian smoothing, horizontal pass then vertical pass, with
/// replicated borders.
pub fn smooth(image: &GrayImage, sigma: f64) -> Result<RealGrid, CannyError> {
    let kernel = gaussian_kernel(sigma)?;
    let r = (kernel.len() / 2) as isize;
    let (w, h) = (image.width(), image.height());
    let src = image.pixels();

    let mut tmp = vec![0.0; w * h];
    for row in 0..h {
        let line = &src[row * w..(row + 1) * w];
        for col in 0..w {
            let mut acc = 0.0;
            for (k, &kw) in kernel.iter().enumerate() {
                let c = clamp_index(col as isize + k as isize - r, w);
                acc += kw * f64::from(line[c]);
            }
            tmp[row * w + col] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for row in 0..h {
        for col in 0..w {
            let mut acc = 0.0;
            for (k, &kw) in kernel.iter().enumerate() {
                let rr = clamp_index(row as isize + k as isize - r, h);
                acc += kw * tmp[rr * w + col];
            }
            out[row * w + col] = (acc / SNAP).round() * SNAP;
        }
    }
    Ok(RealGrid::new(w, h, out).expect("shape preserved"))
}

/// 3x3 Sobel gradients with replicated borders.
pub fn sobel_gradients(grid: &RealGrid) -> Result<GradientField, CannyError> {
    let (w, h) = (grid.width(), grid.height());
    if w < 3 || h < 3 {
        return Err(CannyError::TooSmall {
            width: w,
            height: h,
        });
    }
    let v = grid.values();
    let at = |r: isize, c: isize| v[clamp_index(r, h) * w + clamp_index(c, w)];
    let mut magnitude = Vec::with_capacity(w * h);
    let mut direction = Vec::with_capacity(w * h);
    for row in 0..h as isize {
        for col in 0..w as isize {
            let gx = (at(row - 1, col + 1) + 2.0 * at(row, col + 1) + at(row + 1, col + 1))
                - (at(row - 1, col - 1) + 2.0 * at(row, col - 1) + at(row + 1, col - 1));
            let gy = (at(row + 1, col - 1) + 2.0 * at(row + 1, col) + at(row + 1, col + 1))
                - (at(row - 1, col - 1) + 2.0 * at(row - 1, col) + at(row - 1, col + 1));
            magnitude.push((gx * gx + gy * gy).sqrt());
            direction.push(Direction::quantize(gx, gy));
        }
    }
    Ok(GradientField {
        magnitude: RealGrid::new(w, h, magnitude).expect("shape preserved"),
        direction,
    })
}

/// Zero every pixel that is smaller than either neighbor along its gradient
/// direction. Neighbors outside the grid count as 0.
pub fn nonmax_suppress(field: &GradientField) -> RealGrid {
    let mag = &field.magnitude;
    let (w, h) = (mag.width(), mag.height());
    let neighbor = |r: isize, c: isize| {
        if r < 0 || c < 0 || r >= h as isize || c >= w as isize {
            0.0
        } else {
            mag.get(r as usize, c as usize)
        }
    };
    RealGrid::from_fn(w, h, |row, col| {
        let m = mag.get(row, col);
        let (dr, dc) = field.direction_at(row, col).offset();
        let (r, c) = (row as isize, col as isize);
        if m >= neighbor(r + dr, c + dc) && m >= neighbor(r - dr, c - dc) {
            m
        } else {
            0.0
        }
    })
    .expect("shape preserved")
}

/// Strong pixels (`> high`) plus weak pixels (`> low`) 8-connected to them.
pub fn hysteresis(thinned: &RealGrid, t: ThresholdPair) -> BinaryMap {
    let (w, h) = (thinned.width(), thinned.height());
    let v = thinned.values();
    let mut out = BinaryMap::zeros(w, h).expect("valid shape");
    let mut queue = VecDeque::new();
    for (i, &m) in v.iter().enumerate() {
        if m > t.high {
            out.set(i / w, i % w, true);
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (row, col) = ((i / w) as isize, (i % w) as isize);
        for dr in -1..=1 {
            for dc in -1..=1 {
                let (r, c) = (row + dr, col + dc);
                if r < 0 || c < 0 || r >= h as isize || c >= w as isize {
                    continue;
                }
                let (r, c) = (r as usize, c as usize);
                if !out.get(r, c) && v[r * w + c] > t.low {
                    out.set(r, c, true);
                    queue.push_back(r * w + c);
                }
            }
        }
    }
    out
}

/// The first three stages: smoothing, gradients and thinning. Running
/// [`hysteresis`] on the result for several pairs is equivalent to calling
/// [`canny`] once per pair.
pub fn thin_edges(image: &GrayImage, sigma: f64) -> Result<RealGrid, CannyError> {
    if image.width() < 3 || image.height() < 3 {
        return Err(CannyError::TooSmall {
            width: image.width(),
            height: image.height(),
        });
    }
    let smoothed = smooth(image, sigma)?;
    let field = sobel_gradients(&smoothed)?;
    Ok(nonmax_suppress(&field))
}

pub fn canny(image: &GrayImage, t: ThresholdPair, sigma: f64) -> Result<BinaryMap, CannyError> {
    Ok(hysteresis(&thin_edges(image, sigma)?, t))
}

/// Ground-truth edges of a land/water mask: the mask is scaled to `{0, 255}`
/// and run through Canny with sigma 1 and thresholds (50, 100).
pub fn mask_to_edges(mask: &BinaryMap) -> Result<BinaryMap, CannyError> {
    let t = ThresholdPair::new(50.0, 100.0).expect("valid constant pair");
    canny(&mask.to_gray(255), t, DEFAULT_SIGMA)
}
