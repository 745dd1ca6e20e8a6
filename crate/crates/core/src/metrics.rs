//! Edge-map comparison metrics computed directly from the pixels: confusion
//! counts, MSE/RMSE/PSNR, global SSIM and Pratt's figure of merit.
//!
//! Edge maps carry values in `{0, 1}` and a 1 is the positive class.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::raster::BinaryMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("degenerate statistics: {0}")]
    DegenerateStatistics(&'static str),
    #[error("distance transform of a map without any 1-pixel")]
    EmptyMap,
    #[error("confusion counts sum to zero")]
    ZeroTotal,
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
}

fn check_shape(e: &BinaryMap, g: &BinaryMap) -> Result<(), MetricError> {
    if e.same_shape(g) {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch(
            e.width(),
            e.height(),
            g.width(),
            g.height(),
        ))
    }
}

/// Pixel tallies of a detected map against ground truth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    /// Total pixel count T.
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// Actual positives P (ground-truth edge pixels).
    pub fn actual_positive(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn actual_negative(&self) -> u64 {
        self.fp + self.tn
    }

    /// Predicted positives P' (detected edge pixels).
    pub fn predicted_positive(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn predicted_negative(&self) -> u64 {
        self.fn_ + self.tn
    }

    /// Misclassified pixels, FP + FN.
    pub fn errors(&self) -> u64 {
        self.fp + self.fn_
    }
}

pub fn confusion(e: &BinaryMap, g: &BinaryMap) -> Result<ConfusionCounts, MetricError> {
    check_shape(e, g)?;
    let mut cc = ConfusionCounts::default();
    for (&pe, &pg) in e.bits().iter().zip(g.bits()) {
        match (pe, pg) {
            (1, 1) => cc.tp += 1,
            (0, 0) => cc.tn += 1,
            (1, 0) => cc.fp += 1,
            _ => cc.fn_ += 1,
        }
    }
    Ok(cc)
}

/// Mean of squared per-pixel differences.
pub fn mse(e: &BinaryMap, g: &BinaryMap) -> Result<f64, MetricError> {
    check_shape(e, g)?;
    let sum: f64 = e
        .bits()
        .iter()
        .zip(g.bits())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    Ok(sum / e.len() as f64)
}

pub fn rmse(e: &BinaryMap, g: &BinaryMap) -> Result<f64, MetricError> {
    mse(e, g).map(f64::sqrt)
}

/// Peak signal-to-noise ratio. `Perfect` is the zero-error result and orders
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psnr {
    Finite(f64),
    Perfect,
}

impl Psnr {
    pub const PEAK: f64 = 255.0;

    pub fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Perfect
        } else {
            Psnr::Finite(10.0 * (Self::PEAK * Self::PEAK / mse).log10())
        }
    }

    pub fn is_perfect(&self) -> bool {
        matches!(self, Psnr::Perfect)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Psnr::Finite(v) => Some(v),
            Psnr::Perfect => None,
        }
    }

    /// `+inf` for `Perfect`.
    pub fn as_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl PartialOrd for Psnr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Psnr::Perfect, Psnr::Perfect) => Some(Ordering::Equal),
            (Psnr::Perfect, Psnr::Finite(_)) => Some(Ordering::Greater),
            (Psnr::Finite(_), Psnr::Perfect) => Some(Ordering::Less),
            (Psnr::Finite(a), Psnr::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v}"),
            Psnr::Perfect => f.write_str("inf"),
        }
    }
}

impl FromStr for Psnr {
    type Err = std::num::ParseFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: f64 = s.trim().parse()?;
        Ok(if v == f64::INFINITY {
            Psnr::Perfect
        } else {
            Psnr::Finite(v)
        })
    }
}

pub fn psnr(e: &BinaryMap, g: &BinaryMap) -> Result<Psnr, MetricError> {
    mse(e, g).map(Psnr::from_mse)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl SsimParams {
    /// Unit exponents with the given stabilizers and `c3 = c2 / 2`.
    pub fn with_constants(c1: f64, c2: f64) -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            c1,
            c2,
            c3: c2 / 2.0,
        }
    }

    /// All stabilizers zero.
    pub fn zero_constants() -> Self {
        Self::with_constants(0.0, 0.0)
    }

    fn validate(&self) -> Result<(), MetricError> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !(ok(self.c1) && ok(self.c2) && ok(self.c3)) {
            return Err(MetricError::InvalidParams(
                "SSIM constants must be finite and >= 0",
            ));
        }
        if ![self.alpha, self.beta, self.gamma]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(MetricError::InvalidParams("SSIM exponents must be finite"));
        }
        Ok(())
    }
}

impl Default for SsimParams {
    /// `c1 = 0.01^2`, `c2 = 0.03^2` for a dynamic range of 1.
    fn default() -> Self {
        Self::with_constants(0.01 * 0.01, 0.03 * 0.03)
    }
}

/// Whole-image statistics of a pair of maps. Variances and covariance use the
/// `n - 1` denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStats {
    pub mean_e: f64,
    pub mean_g: f64,
    pub var_e: f64,
    pub var_g: f64,
    pub cov: f64,
}

impl PairStats {
    pub fn compute(e: &BinaryMap, g: &BinaryMap) -> Result<Self, MetricError> {
        check_shape(e, g)?;
        let n = e.len() as f64;
        let mean = |m: &BinaryMap| m.bits().iter().map(|&b| f64::from(b)).sum::<f64>() / n;
        let (mean_e, mean_g) = (mean(e), mean(g));
        let (mut se, mut sg, mut seg) = (0.0, 0.0, 0.0);
        for (&a, &b) in e.bits().iter().zip(g.bits()) {
            let de = f64::from(a) - mean_e;
            let dg = f64::from(b) - mean_g;
            se += de * de;
            sg += dg * dg;
            seg += de * dg;
        }
        // a single pixel has no spread
        let denom = if e.len() > 1 { n - 1.0 } else { f64::INFINITY };
        Ok(Self {
            mean_e,
            mean_g,
            var_e: se / denom,
            var_g: sg / denom,
            cov: seg / denom,
        })
    }
}

/// Luminance, contrast and structure terms of SSIM.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimComponents {
    pub luminance: f64,
    pub contrast: f64,
    pub structure: f64,
}

fn ratio(num: f64, den: f64, what: &'static str) -> Result<f64, MetricError> {
    if den == 0.0 {
        Err(MetricError::DegenerateStatistics(what))
    } else {
        Ok(num / den)
    }
}

pub fn ssim_components(
    e: &BinaryMap,
    g: &BinaryMap,
    p: &SsimParams,
) -> Result<SsimComponents, MetricError> {
    p.validate()?;
    let st = PairStats::compute(e, g)?;
    let (sd_e, sd_g) = (st.var_e.sqrt(), st.var_g.sqrt());
    if p.c1 == 0.0 && p.c2 == 0.0 && p.c3 == 0.0 && (sd_e == 0.0 || sd_g == 0.0) {
        return Err(MetricError::DegenerateStatistics(
            "constant map with zero stabilizing constants",
        ));
    }
    Ok(SsimComponents {
        luminance: ratio(
            2.0 * st.mean_e * st.mean_g + p.c1,
            st.mean_e * st.mean_e + st.mean_g * st.mean_g + p.c1,
            "luminance denominator is zero",
        )?,
        contrast: ratio(
            2.0 * sd_e * sd_g + p.c2,
            st.var_e + st.var_g + p.c2,
            "contrast denominator is zero",
        )?,
        structure: ratio(
            st.cov + p.c3,
            sd_e * sd_g + p.c3,
            "structure denominator is zero",
        )?,
    })
}

/// Global (single-window) SSIM.
pub fn ssim(e: &BinaryMap, g: &BinaryMap, p: &SsimParams) -> Result<f64, MetricError> {
    let c = ssim_components(e, g, p)?;
    Ok(c.luminance.powf(p.alpha) * c.contrast.powf(p.beta) * c.structure.powf(p.gamma))
}

/// Squared Euclidean distance from every pixel to the nearest 1-pixel of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMap {
    width: usize,
    height: usize,
    squared: Vec<u64>,
}

impl DistanceMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.squared[row * self.width + col]
    }

    pub fn squared(&self) -> &[u64] {
        &self.squared
    }
}

/// Exact squared Euclidean distance transform (Meijster, Roerdink and
/// Hesselink's two-pass separable algorithm, integer arithmetic throughout).
pub fn distance_transform(g: &BinaryMap) -> Result<DistanceMap, MetricError> {
    if g.count_ones() == 0 {
        return Err(MetricError::EmptyMap);
    }
    let (w, h) = (g.width(), g.height());
    let inf = (w + h) as i64;

    // column pass: distance to the nearest feature in the same column
    let mut col_dist = vec![inf; w * h];
    for c in 0..w {
        let mut d = inf;
        for r in 0..h {
            d = if g.get(r, c) {
                0
            } else if d < inf {
                d + 1
            } else {
                inf
            };
            col_dist[r * w + c] = d;
        }
        let mut d = inf;
        for r in (0..h).rev() {
            d = if g.get(r, c) {
                0
            } else if d < inf {
                d + 1
            } else {
                inf
            };
            if d < col_dist[r * w + c] {
                col_dist[r * w + c] = d;
            }
        }
    }

    // row pass: lower envelope of parabolas (x - i)^2 + col_dist(i)^2
    let mut squared = vec![0u64; w * h];
    let mut s = vec![0usize; w];
    let mut t = vec![0i64; w];
    for r in 0..h {
        let gd = &col_dist[r * w..(r + 1) * w];
        let f = |x: i64, i: usize| (x - i as i64).pow(2) + gd[i].pow(2);
        let sep = |i: usize, u: usize| {
            let (ii, uu) = (i as i64, u as i64);
            (uu * uu - ii * ii + gd[u].pow(2) - gd[i].pow(2)).div_euclid(2 * (uu - ii))
        };
        let mut q: isize = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..w {
            while q >= 0 && f(t[q as usize], s[q as usize]) > f(t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
            } else {
                let wv = 1 + sep(s[q as usize], u);
                if wv < w as i64 {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = wv;
                }
            }
        }
        for u in (0..w).rev() {
            squared[r * w + u] = f(u as i64, s[q as usize]) as u64;
            if u as i64 == t[q as usize] {
                q -= 1;
            }
        }
    }
    Ok(DistanceMap {
        width: w,
        height: h,
        squared,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FomParams {
    /// Distance penalty scale.
    pub alpha: f64,
}

impl FomParams {
    pub fn new(alpha: f64) -> Result<Self, MetricError> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self { alpha })
        } else {
            Err(MetricError::InvalidParams("FOM alpha must be positive"))
        }
    }
}

impl Default for FomParams {
    fn default() -> Self {
        Self { alpha: 1.0 / 9.0 }
    }
}

/// Pratt's figure of merit. Two empty maps score 1; exactly one empty map
/// scores 0.
pub fn fom(e: &BinaryMap, g: &BinaryMap, p: &FomParams) -> Result<f64, MetricError> {
    check_shape(e, g)?;
    let (n_e, n_g) = (e.count_ones(), g.count_ones());
    match (n_e, n_g) {
        (0, 0) => return Ok(1.0),
        (0, _) | (_, 0) => return Ok(0.0),
        _ => {}
    }
    let dt = distance_transform(g)?;
    let sum: f64 = e
        .ones()
        .map(|(r, c)| 1.0 / (1.0 + p.alpha * dt.get(r, c) as f64))
        .sum();
    Ok(sum / n_e.max(n_g) as f64)
}

/// Metrics used to rank edge maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricId {
    Rmse,
    Psnr,
    Ssim,
    Fom,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Rmse,
        MetricId::Psnr,
        MetricId::Ssim,
        MetricId::Fom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Rmse => "rmse",
            MetricId::Psnr => "psnr",
            MetricId::Ssim => "ssim",
            MetricId::Fom => "fom",
        }
    }

    /// RMSE is an error; the rest are similarities.
    pub fn lower_is_better(self) -> bool {
        matches!(self, MetricId::Rmse)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| MetricError::UnknownMetric(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(w: usize, h: usize, bits: &[u8]) -> BinaryMap {
        BinaryMap::new(w, h, bits.to_vec()).unwrap()
    }

    fn worked_pair() -> (BinaryMap, BinaryMap) {
        (map(2, 2, &[1, 0, 0, 0]), map(2, 2, &[1, 1, 0, 0]))
    }

    #[test]
    fn confusion_examples() {
        let g = map(3, 2, &[1, 0, 1, 1, 0, 0]);
        let cc = confusion(&g, &g).unwrap();
        assert_eq!((cc.fp, cc.fn_, cc.tp), (0, 0, 3));

        let (e, g) = worked_pair();
        assert_eq!(confusion(&e, &g).unwrap(), ConfusionCounts::new(1, 2, 0, 1));
        let cc = confusion(&e, &g).unwrap();
        assert_eq!(cc.actual_positive(), 2);
        assert_eq!(cc.predicted_positive(), 1);
        assert_eq!(cc.actual_negative(), 2);
        assert_eq!(cc.predicted_negative(), 3);

        let cc = confusion(&g.complement(), &g).unwrap();
        assert_eq!((cc.tp, cc.tn), (0, 0));

        assert!(matches!(
            confusion(&map(1, 2, &[0, 0]), &map(2, 1, &[0, 0])),
            Err(MetricError::DimensionMismatch(1, 2, 2, 1))
        ));
    }

    #[test]
    fn mse_rmse_psnr_examples() {
        let (e, g) = worked_pair();
        assert_eq!(mse(&g, &g).unwrap(), 0.0);
        assert_eq!(mse(&e, &g).unwrap(), 0.25);
        assert_eq!(mse(&g.complement(), &g).unwrap(), 1.0);

        assert_eq!(rmse(&g, &g).unwrap(), 0.0);
        assert_eq!(rmse(&e, &g).unwrap(), 0.5);
        assert_eq!(rmse(&g.complement(), &g).unwrap(), 1.0);

        assert_eq!(psnr(&g, &g).unwrap(), Psnr::Perfect);
        let p = psnr(&e, &g).unwrap().finite().unwrap();
        assert!((p - 54.15140352195873).abs() < 1e-9);
        let p = psnr(&g.complement(), &g).unwrap().finite().unwrap();
        assert!((p - 48.1308036086791).abs() < 1e-9);
    }

    #[test]
    fn psnr_ordering() {
        assert!(Psnr::Perfect > Psnr::Finite(1e300));
        assert!(Psnr::Finite(3.0) > Psnr::Finite(2.0));
        assert_eq!(Psnr::Perfect.to_string(), "inf");
        assert_eq!("inf".parse::<Psnr>().unwrap(), Psnr::Perfect);
        assert_eq!("48.5".parse::<Psnr>().unwrap(), Psnr::Finite(48.5));
    }

    #[test]
    fn ssim_examples() {
        let (e, g) = worked_pair();
        for p in [SsimParams::zero_constants(), SsimParams::default()] {
            assert!((ssim(&g, &g, &p).unwrap() - 1.0).abs() < 1e-12);
        }
        let st = PairStats::compute(&e, &g).unwrap();
        assert_eq!(st.mean_e, 0.25);
        assert_eq!(st.mean_g, 0.5);
        assert!((st.var_e - 0.25).abs() < 1e-15);
        assert!((st.var_g - 1.0 / 3.0).abs() < 1e-15);
        assert!((st.cov - 1.0 / 6.0).abs() < 1e-15);
        let v = ssim(&e, &g, &SsimParams::zero_constants()).unwrap();
        assert!((v - 16.0 / 35.0).abs() < 1e-12, "{v}");

        let flat = map(2, 2, &[0, 0, 0, 0]);
        assert!(matches!(
            ssim(&flat, &g, &SsimParams::zero_constants()),
            Err(MetricError::DegenerateStatistics(_))
        ));
        // nonzero constants make a constant map legal
        let v = ssim(&flat, &g, &SsimParams::default()).unwrap();
        assert!(v.is_finite() && (-1.0..=1.0).contains(&v));

        let bad = SsimParams {
            c1: -1.0,
            ..SsimParams::default()
        };
        assert!(matches!(
            ssim(&e, &g, &bad),
            Err(MetricError::InvalidParams(_))
        ));
    }

    #[test]
    fn ssim_exponents_apply_per_component() {
        let (e, g) = worked_pair();
        let base = SsimParams::default();
        let c = ssim_components(&e, &g, &base).unwrap();
        let p = SsimParams {
            alpha: 2.0,
            beta: 0.5,
            gamma: 1.0,
            ..base
        };
        let expected = c.luminance.powi(2) * c.contrast.sqrt() * c.structure;
        assert!((ssim(&e, &g, &p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn distance_transform_examples() {
        let mut g = BinaryMap::zeros(6, 6).unwrap();
        g.set(0, 0, true);
        let dt = distance_transform(&g).unwrap();
        assert_eq!(dt.get(0, 0), 0);
        assert_eq!(dt.get(3, 4), 25);

        let mut g = BinaryMap::zeros(10, 1).unwrap();
        g.set(0, 0, true);
        g.set(0, 9, true);
        assert_eq!(distance_transform(&g).unwrap().get(0, 5), 16);

        assert_eq!(
            distance_transform(&BinaryMap::zeros(3, 3).unwrap()),
            Err(MetricError::EmptyMap)
        );
    }

    #[test]
    fn fom_examples() {
        let g = map(3, 2, &[1, 1, 0, 0, 1, 0]);
        assert_eq!(fom(&g, &g, &FomParams::default()).unwrap(), 1.0);

        let mut g = BinaryMap::zeros(4, 4).unwrap();
        g.set(0, 0, true);
        let mut e = BinaryMap::zeros(4, 4).unwrap();
        e.set(0, 1, true);
        let v = fom(&e, &g, &FomParams::new(1.0 / 9.0).unwrap()).unwrap();
        assert!((v - 0.9).abs() < 1e-15);

        let empty = BinaryMap::zeros(4, 4).unwrap();
        assert_eq!(fom(&empty, &g, &FomParams::default()).unwrap(), 0.0);
        assert_eq!(fom(&g, &empty, &FomParams::default()).unwrap(), 0.0);
        assert_eq!(fom(&empty, &empty, &FomParams::default()).unwrap(), 1.0);
        assert!(FomParams::new(0.0).is_err());
    }

    #[test]
    fn metric_ids() {
        assert_eq!("FOM".parse::<MetricId>().unwrap(), MetricId::Fom);
        assert!(matches!(
            "uqi".parse::<MetricId>(),
            Err(MetricError::UnknownMetric(_))
        ));
        assert!(MetricId::Rmse.lower_is_better());
        assert!(!MetricId::Ssim.lower_is_better());
    }

    fn brute_sq(g: &BinaryMap, r: usize, c: usize) -> u64 {
        g.ones()
            .map(|(gr, gc)| {
                let dr = gr as i64 - r as i64;
                let dc = gc as i64 - c as i64;
                (dr * dr + dc * dc) as u64
            })
            .min()
            .unwrap()
    }

    /// All ordered pairs of 3x3 maps.
    #[test]
    fn fom_is_one_exactly_when_maps_match() {
        let maps: Vec<BinaryMap> = (0u32..512)
            .map(|m| BinaryMap::from_fn(3, 3, |r, c| m >> (r * 3 + c) & 1 == 1).unwrap())
            .collect();
        let p = FomParams::default();
        for e in &maps {
            for g in &maps {
                let v = fom(e, g, &p).unwrap();
                assert!((0.0..=1.0).contains(&v));
                if e.count_ones() > 0 && g.count_ones() > 0 {
                    assert_eq!(v == 1.0, e == g, "{e:?}{g:?}");
                }
            }
        }
    }

    fn arb_map(w: usize, h: usize, density: f64) -> impl Strategy<Value = BinaryMap> {
        prop::collection::vec(prop::bool::weighted(density), w * h)
            .prop_map(move |v| BinaryMap::from_fn(w, h, |r, c| v[r * w + c]).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (BinaryMap, BinaryMap)> {
        (1usize..10, 1usize..10, 0.05f64..0.95)
            .prop_flat_map(|(w, h, d)| (arb_map(w, h, d), arb_map(w, h, d)))
    }

    proptest! {
        #[test]
        fn edt_matches_brute_force(w in 1usize..14, h in 1usize..14, d in 0.01f64..0.5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut g = BinaryMap::from_fn(w, h, |_, _| rng.gen_bool(d)).unwrap();
            if g.count_ones() == 0 { g.set(h / 2, w / 2, true); }
            let dt = distance_transform(&g).unwrap();
            for r in 0..h { for c in 0..w {
                prop_assert_eq!(dt.get(r, c), brute_sq(&g, r, c));
            }}
        }

        #[test]
        fn pixel_metric_identities((e, g) in arb_pair()) {
            let cc = confusion(&e, &g).unwrap();
            prop_assert_eq!(cc.total() as usize, e.len());
            let m = mse(&e, &g).unwrap();
            prop_assert_eq!(m, cc.errors() as f64 / cc.total() as f64);
            let r = rmse(&e, &g).unwrap();
            prop_assert!((r * r - m).abs() <= 1e-15);
            if let (Ok(a), Ok(b)) = (ssim(&e, &g, &SsimParams::default()), ssim(&g, &e, &SsimParams::default())) {
                prop_assert!((a - b).abs() <= 1e-12);
                prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&a));
            }
            let f = fom(&e, &g, &FomParams::default()).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
        }

        #[test]
        fn psnr_decreases_with_mse(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
            prop_assume!(a < b);
            prop_assert!(Psnr::from_mse(a) > Psnr::from_mse(b));
        }

        #[test]
        fn fom_non_increasing_in_alpha((e, g) in arb_pair(), a1 in 0.01f64..2.0, da in 0.0f64..2.0) {
            prop_assume!(e != g && e.count_ones() <= g.count_ones());
            let lo = fom(&e, &g, &FomParams::new(a1).unwrap()).unwrap();
            let hi = fom(&e, &g, &FomParams::new(a1 + da).unwrap()).unwrap();
            prop_assert!(hi <= lo + 1e-15);
        }
    }
}
