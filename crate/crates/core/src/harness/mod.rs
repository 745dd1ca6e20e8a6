//! Threshold sweeps over a dataset, the summary tables built from them, and
//! the command line front end in [`cli`].
//!
//! A sweep evaluates every `(image, band, pair)` cell: the band is min-max
//! normalized, thinned once, and hysteresis is applied for each pair of the
//! chain. Each cell is compared with the edges of the image's land/water
//! mask. Records always come out in `(image, band, pair)` order whatever the
//! worker count.

pub mod cli;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::canny::{self, standard_pairs, CannyError, ThresholdPair, DEFAULT_SIGMA};
use crate::cmreform;
use crate::metrics::{self, ConfusionCounts, FomParams, MetricError, MetricId, Psnr, SsimParams};
use crate::raster::{self, normalize_to_255, Band, BandId, BinaryMap, GrayImage, RasterError};

/// Masks of the Sentinel-2 water-segmentation test set that are known to be
/// wrong (the first is flipped). Ids are the source file stems.
pub const KNOWN_BAD_SWED_MASKS: [&str; 3] = [
    "S2A_MSIL2A_20190803T025551_N0213_R032_T54XWG_20190803T043943_image_0_0",
    "S2A_MSIL2A_20190901T101031_N0213_R022_T34VDM_20190901T130348_image_0_0",
    "S2A_MSIL2A_20200405T100021_N0214_R122_T34VDM_20200405T115512_image_0_0",
];

/// Worker cap read by [`run_sweep`].
pub const THREADS_ENV: &str = "EDGEBENCH_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Canny(#[from] CannyError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("invalid sweep config: {0}")]
    InvalidConfig(&'static str),
    #[error("image {image}, band {band}: {source}")]
    Cell {
        image: String,
        band: String,
        #[source]
        source: Box<HarnessError>,
    },
    #[error("image {image}: band {band} is {got_w}x{got_h} but the mask is {want_w}x{want_h}")]
    DimensionMismatch {
        image: String,
        band: String,
        got_w: usize,
        got_h: usize,
        want_w: usize,
        want_h: usize,
    },
    #[error("image {image} has no band {band}")]
    MissingBand { image: String, band: String },
    #[error("no oracle entry for image {0}")]
    MissingOracle(String),
    #[error("oracle pair {pair} for image {image} is not in the sweep")]
    OracleNotSwept { image: String, pair: String },
    #[error("report has no records")]
    EmptyReport,
    #[error("{path}: {message}")]
    Dataset { path: PathBuf, message: String },
    #[error("{path}, line {line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub pairs: Vec<ThresholdPair>,
    pub sigma: f64,
    /// Bands to evaluate; `None` takes every band each image provides.
    pub bands: Option<Vec<Band>>,
    pub fom: FomParams,
    pub ssim: SsimParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            pairs: standard_pairs(),
            sigma: DEFAULT_SIGMA,
            bands: None,
            fom: FomParams::default(),
            ssim: SsimParams::default(),
        }
    }
}

impl SweepConfig {
    /// The chain must be non-empty and nested: each pair is componentwise no
    /// lower than the one before, and distinct from it.
    pub fn validate(&self) -> Result<(), HarnessError> {
        validate_chain(&self.pairs)?;
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(HarnessError::InvalidConfig("sigma must be positive"));
        }
        if matches!(&self.bands, Some(b) if b.is_empty()) {
            return Err(HarnessError::InvalidConfig("band list is empty"));
        }
        Ok(())
    }
}

pub fn validate_chain(pairs: &[ThresholdPair]) -> Result<(), HarnessError> {
    if pairs.is_empty() {
        return Err(HarnessError::InvalidConfig("threshold list is empty"));
    }
    for w in pairs.windows(2) {
        if !w[0].dominated_by(&w[1]) || w[0] == w[1] {
            return Err(HarnessError::InvalidConfig(
                "threshold pairs must increase componentwise",
            ));
        }
    }
    Ok(())
}

/// One image: its mask and the bands rendered or converted from it.
#[derive(Clone, Debug)]
pub struct DatasetItem {
    pub id: String,
    pub mask: BinaryMap,
    pub bands: Vec<(Band, GrayImage)>,
}

/// Load every `<id>_mask.pgm` in `dir` together with its `<id>_<band>.pgm`
/// siblings, where `<band>` is a band name such as `B08` or the literal
/// `band` for a single-band scene. Items are sorted by id; bands by band.
/// Ids listed in `exclude` are skipped.
pub fn load_dataset(dir: &Path, exclude: &[String]) -> Result<Vec<DatasetItem>, HarnessError> {
    let mut masks: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut bands: HashMap<String, Vec<(Band, PathBuf)>> = HashMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("pgm") {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        let Some((id, suffix)) = stem.rsplit_once('_') else {
            continue;
        };
        if exclude.iter().any(|x| x.trim_end_matches(".tif") == id) {
            continue;
        }
        if suffix.eq_ignore_ascii_case("mask") {
            masks.insert(id.to_string(), path);
        } else if let Ok(band) = suffix.parse::<Band>() {
            bands.entry(id.to_string()).or_default().push((band, path));
        }
    }

    let mut items = Vec::with_capacity(masks.len());
    for (id, mask_path) in masks {
        let mask = raster::load_mask(&mask_path).map_err(|e| HarnessError::Dataset {
            path: mask_path.clone(),
            message: e.to_string(),
        })?;
        let mut found = bands.remove(&id).unwrap_or_default();
        if found.is_empty() {
            return Err(HarnessError::Dataset {
                path: mask_path,
                message: "mask has no band images next to it".into(),
            });
        }
        found.sort();
        let mut loaded = Vec::with_capacity(found.len());
        for (band, path) in found {
            let image = raster::load_pgm(&path).map_err(|e| HarnessError::Dataset {
                path: path.clone(),
                message: e.to_string(),
            })?;
            loaded.push((band, image));
        }
        items.push(DatasetItem {
            id,
            mask,
            bands: loaded,
        });
    }
    Ok(items)
}

/// Metrics of one `(image, band, pair)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRecord {
    pub image: String,
    pub band: Band,
    pub pair: ThresholdPair,
    pub rmse: f64,
    pub psnr: Psnr,
    pub ssim: f64,
    pub fom: f64,
    pub counts: ConfusionCounts,
}

impl MetricRecord {
    /// Ranking key for `metric`, larger is better. `Perfect` PSNR is `+inf`.
    pub fn score(&self, metric: MetricId) -> f64 {
        match metric {
            MetricId::Rmse => -self.rmse,
            MetricId::Psnr => self.psnr.as_f64(),
            MetricId::Ssim => self.ssim,
            MetricId::Fom => self.fom,
        }
    }

    /// Whether the stored RMSE and PSNR agree with the count-based forms.
    pub fn counts_consistent(&self, tol: f64) -> bool {
        let Ok(rmse) = cmreform::rmse_from_counts(&self.counts) else {
            return false;
        };
        let Ok(psnr) = cmreform::psnr_from_counts(&self.counts) else {
            return false;
        };
        let psnr_ok = match (self.psnr, psnr) {
            (Psnr::Perfect, Psnr::Perfect) => true,
            (Psnr::Finite(a), Psnr::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        };
        (self.rmse - rmse).abs() <= tol && psnr_ok
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    /// Present when the report came from [`run_sweep`] rather than a file.
    pub config: Option<SweepConfig>,
    /// Threshold chain in sweep order.
    pub pairs: Vec<ThresholdPair>,
    /// Image ids in sweep order.
    pub manifest: Vec<String>,
    pub records: Vec<MetricRecord>,
}

impl SweepReport {
    fn pair_index(&self, pair: &ThresholdPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair)
    }

    fn records_of<'a, 'b>(&'a self, image: &'b str) -> impl Iterator<Item = &'a MetricRecord> + 'b
    where
        'a: 'b,
    {
        self.records.iter().filter(move |r| r.image == image)
    }
}

fn worker_count() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn sweep_band(
    id: &str,
    band: Band,
    image: &GrayImage,
    truth: &BinaryMap,
    cfg: &SweepConfig,
) -> Result<Vec<MetricRecord>, HarnessError> {
    let thin = canny::thin_edges(&normalize_to_255(image), cfg.sigma)?;
    cfg.pairs
        .iter()
        .map(|&pair| {
            let e = canny::hysteresis(&thin, pair);
            Ok(MetricRecord {
                image: id.to_string(),
                band,
                pair,
                rmse: metrics::rmse(&e, truth)?,
                psnr: metrics::psnr(&e, truth)?,
                ssim: metrics::ssim(&e, truth, &cfg.ssim)?,
                fom: metrics::fom(&e, truth, &cfg.fom)?,
                counts: metrics::confusion(&e, truth)?,
            })
        })
        .collect()
}

fn sweep_item(item: &DatasetItem, cfg: &SweepConfig) -> Result<Vec<MetricRecord>, HarnessError> {
    let selected: Vec<(Band, &GrayImage)> = match &cfg.bands {
        None => item.bands.iter().map(|(b, img)| (*b, img)).collect(),
        Some(wanted) => wanted
            .iter()
            .map(|w| {
                item.bands
                    .iter()
                    .find(|(b, _)| b == w)
                    .map(|(b, img)| (*b, img))
                    .ok_or_else(|| HarnessError::MissingBand {
                        image: item.id.clone(),
                        band: w.to_string(),
                    })
            })
            .collect::<Result<_, _>>()?,
    };
    for (band, img) in &selected {
        if img.width() != item.mask.width() || img.height() != item.mask.height() {
            return Err(HarnessError::DimensionMismatch {
                image: item.id.clone(),
                band: band.to_string(),
                got_w: img.width(),
                got_h: img.height(),
                want_w: item.mask.width(),
                want_h: item.mask.height(),
            });
        }
    }
    let cell_err = |band: &str, e: HarnessError| HarnessError::Cell {
        image: item.id.clone(),
        band: band.to_string(),
        source: Box::new(e),
    };
    let truth = canny::mask_to_edges(&item.mask).map_err(|e| cell_err("mask", e.into()))?;
    let per_band: Vec<Vec<MetricRecord>> = selected
        .par_iter()
        .map(|(band, img)| {
            sweep_band(&item.id, *band, img, &truth, cfg)
                .map_err(|e| cell_err(&band.to_string(), e))
        })
        .collect::<Result<_, _>>()?;
    Ok(per_band.into_iter().flatten().collect())
}

/// Evaluate every `(image, band, pair)` cell. Work is spread over a rayon
/// pool capped by `EDGEBENCH_THREADS` when set.
pub fn run_sweep(dataset: &[DatasetItem], cfg: &SweepConfig) -> Result<SweepReport, HarnessError> {
    cfg.validate()?;
    let run = || -> Result<Vec<Vec<MetricRecord>>, HarnessError> {
        dataset
            .par_iter()
            .map(|item| sweep_item(item, cfg))
            .collect()
    };
    let nested = match worker_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(io::Error::other)?
            .install(run)?,
        None => run()?,
    };
    Ok(SweepReport {
        config: Some(cfg.clone()),
        pairs: cfg.pairs.clone(),
        manifest: dataset.iter().map(|d| d.id.clone()).collect(),
        records: nested.into_iter().flatten().collect(),
    })
}

/// Which cells compete when picking an image's best threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Best cell over every band of the image.
    AllBands,
    /// Only cells of one band.
    Band(Band),
}

impl Selection {
    pub const NIR: Selection = Selection::Band(Band::Spectral(BandId::NIR));

    fn admits(&self, band: Band) -> bool {
        match self {
            Selection::AllBands => true,
            Selection::Band(b) => *b == band,
        }
    }
}

impl std::str::FromStr for Selection {
    type Err = String;

    /// `all`, `nir`, or any band name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            Ok(Selection::AllBands)
        } else {
            s.parse().map(Selection::Band)
        }
    }
}

/// The best cell of one image for `metric`. Ties go to the pair earlier in
/// the chain, then to the earlier band.
pub fn best_cell<'a>(
    report: &'a SweepReport,
    image: &str,
    metric: MetricId,
    selection: Selection,
) -> Option<&'a MetricRecord> {
    let mut best: Option<(&MetricRecord, usize)> = None;
    for r in report
        .records_of(image)
        .filter(|r| selection.admits(r.band))
    {
        let idx = report.pair_index(&r.pair).unwrap_or(usize::MAX);
        let better = match best {
            None => true,
            Some((b, bi)) => {
                let (s, bs) = (r.score(metric), b.score(metric));
                s > bs || (s == bs && idx < bi)
            }
        };
        if better {
            best = Some((r, idx));
        }
    }
    best.map(|(r, _)| r)
}

/// How many images pick each pair as their best, in chain order. Images with
/// no admissible cell are not counted.
pub fn best_threshold_counts(
    report: &SweepReport,
    metric: MetricId,
    selection: Selection,
) -> Result<Vec<(ThresholdPair, usize)>, HarnessError> {
    if report.records.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut counts: Vec<(ThresholdPair, usize)> = report.pairs.iter().map(|&p| (p, 0)).collect();
    for image in &report.manifest {
        if let Some(cell) = best_cell(report, image, metric, selection) {
            if let Some(i) = report.pair_index(&cell.pair) {
                counts[i].1 += 1;
            }
        }
    }
    Ok(counts)
}

/// Mean and sample standard deviation of one metric over one cell group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    /// `+inf` when every PSNR in the group is `Perfect`.
    pub mean: f64,
    /// Zero for fewer than two values.
    pub std: f64,
    /// Values left out of the statistics (`Perfect` PSNR).
    pub excluded: usize,
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub band: Band,
    pub pair: ThresholdPair,
    pub metric: MetricId,
    pub summary: Summary,
}

/// Group keys in first-appearance order.
fn groups(report: &SweepReport) -> Vec<((Band, ThresholdPair), Vec<&MetricRecord>)> {
    let mut order: Vec<(Band, ThresholdPair)> = Vec::new();
    let mut map: Vec<Vec<&MetricRecord>> = Vec::new();
    for r in &report.records {
        let key = (r.band, r.pair);
        match order.iter().position(|k| *k == key) {
            Some(i) => map[i].push(r),
            None => {
                order.push(key);
                map.push(vec![r]);
            }
        }
    }
    order.into_iter().zip(map).collect()
}

/// Per `(band, pair)` mean and standard deviation of every metric, sorted by
/// band, then chain order.
pub fn aggregate(report: &SweepReport) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    let mut grouped = groups(report);
    grouped.sort_by_key(|g| g.0 .0);
    for ((band, pair), recs) in grouped {
        for metric in MetricId::ALL {
            let (vals, excluded): (Vec<f64>, usize) = match metric {
                MetricId::Psnr => {
                    let finite: Vec<f64> = recs.iter().filter_map(|r| r.psnr.finite()).collect();
                    let excl = recs.len() - finite.len();
                    (finite, excl)
                }
                _ => (recs.iter().map(|r| value_of(r, metric)).collect(), 0),
            };
            let summary = if vals.is_empty() {
                Summary {
                    mean: f64::INFINITY,
                    std: 0.0,
                    excluded,
                }
            } else {
                let (mean, std) = mean_std(&vals);
                Summary {
                    mean,
                    std,
                    excluded,
                }
            };
            rows.push(AggregateRow {
                band,
                pair,
                metric,
                summary,
            });
        }
    }
    rows
}

fn value_of(r: &MetricRecord, metric: MetricId) -> f64 {
    match metric {
        MetricId::Rmse => r.rmse,
        MetricId::Psnr => r.psnr.as_f64(),
        MetricId::Ssim => r.ssim,
        MetricId::Fom => r.fom,
    }
}

/// Per `(band, pair)` mean of `fp + fn`, sorted like [`aggregate`].
pub fn fp_fn_sums(report: &SweepReport) -> Vec<(Band, ThresholdPair, f64)> {
    let mut grouped = groups(report);
    grouped.sort_by_key(|g| g.0 .0);
    grouped
        .into_iter()
        .map(|((band, pair), recs)| {
            let sum: u64 = recs.iter().map(|r| r.counts.errors()).sum();
            (band, pair, sum as f64 / recs.len() as f64)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Agreement {
    pub metric: MetricId,
    /// Percentage of images whose selected pair is the oracle pair.
    pub percent_best: f64,
    /// Percentage of images whose selected cell has FOM at least that of the
    /// oracle pair in the same band.
    pub percent_same_or_better: f64,
}

/// Compare each metric's selections with a per-image oracle pair.
pub fn agreement(
    report: &SweepReport,
    oracle: &HashMap<String, ThresholdPair>,
    selection: Selection,
) -> Result<Vec<Agreement>, HarnessError> {
    if report.records.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut out = Vec::with_capacity(MetricId::ALL.len());
    for metric in MetricId::ALL {
        let (mut best, mut same_or_better, mut n) = (0usize, 0usize, 0usize);
        for image in &report.manifest {
            let want = oracle
                .get(image)
                .ok_or_else(|| HarnessError::MissingOracle(image.clone()))?;
            let Some(cell) = best_cell(report, image, metric, selection) else {
                continue;
            };
            let reference = report
                .records_of(image)
                .find(|r| r.band == cell.band && r.pair == *want)
                .ok_or_else(|| HarnessError::OracleNotSwept {
                    image: image.clone(),
                    pair: want.to_string(),
                })?;
            n += 1;
            best += usize::from(cell.pair == *want);
            same_or_better += usize::from(cell.fom >= reference.fom);
        }
        let pct = |k: usize| {
            if n == 0 {
                0.0
            } else {
                100.0 * k as f64 / n as f64
            }
        };
        out.push(Agreement {
            metric,
            percent_best: pct(best),
            percent_same_or_better: pct(same_or_better),
        });
    }
    Ok(out)
}

// ---- CSV files ----

pub const SWEEP_HEADER: [&str; 12] = [
    "image", "band", "low", "high", "rmse", "psnr", "ssim", "fom", "tp", "tn", "fp", "fn",
];

fn num(v: f64) -> String {
    cmreform::format_value(v)
}

pub fn write_sweep_csv<W: io::Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in &report.records {
        w.write_record([
            r.image.clone(),
            r.band.to_string(),
            num(r.pair.low()),
            num(r.pair.high()),
            num(r.rmse),
            r.psnr.to_string(),
            num(r.ssim),
            num(r.fom),
            r.counts.tp.to_string(),
            r.counts.tn.to_string(),
            r.counts.fp.to_string(),
            r.counts.fn_.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_err(path: &str, line: u64, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    name: &str,
    path: &str,
) -> Result<T, HarnessError> {
    let line = rec.position().map_or(0, |p| p.line());
    let raw = rec
        .get(i)
        .ok_or_else(|| parse_err(path, line, format!("missing {name}")))?;
    raw.trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("bad {name} {raw:?}")))
}

/// Read a `sweep.csv`. The chain and manifest are recovered in order of first
/// appearance. `source` names the input in error messages.
pub fn read_sweep_csv<R: io::Read>(input: R, source: &str) -> Result<SweepReport, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header
        .iter()
        .map(str::trim)
        .ne(SWEEP_HEADER.iter().copied())
    {
        return Err(parse_err(source, 1, "unexpected header"));
    }
    let mut records = Vec::new();
    let mut pairs: Vec<ThresholdPair> = Vec::new();
    let mut manifest: Vec<String> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let image: String = field(&row, 0, "image", source)?;
        let band: Band = field(&row, 1, "band", source)?;
        let low: f64 = field(&row, 2, "low", source)?;
        let high: f64 = field(&row, 3, "high", source)?;
        let pair =
            ThresholdPair::new(low, high).map_err(|e| parse_err(source, line, e.to_string()))?;
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
        if !manifest.contains(&image) {
            manifest.push(image.clone());
        }
        records.push(MetricRecord {
            image,
            band,
            pair,
            rmse: field(&row, 4, "rmse", source)?,
            psnr: field(&row, 5, "psnr", source)?,
            ssim: field(&row, 6, "ssim", source)?,
            fom: field(&row, 7, "fom", source)?,
            counts: ConfusionCounts::new(
                field(&row, 8, "tp", source)?,
                field(&row, 9, "tn", source)?,
                field(&row, 10, "fp", source)?,
                field(&row, 11, "fn", source)?,
            ),
        });
    }
    Ok(SweepReport {
        config: None,
        pairs,
        manifest,
        records,
    })
}

pub fn write_table2_csv<W: io::Write>(
    report: &SweepReport,
    selection: Selection,
    out: W,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "low", "high", "count"])?;
    for metric in MetricId::ALL {
        for (pair, count) in best_threshold_counts(report, metric, selection)? {
            w.write_record([
                metric.name().to_string(),
                num(pair.low()),
                num(pair.high()),
                count.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_fig2_csv<W: io::Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["band", "low", "high", "metric", "mean", "std", "excluded"])?;
    for row in aggregate(report) {
        w.write_record([
            row.band.to_string(),
            num(row.pair.low()),
            num(row.pair.high()),
            row.metric.name().to_string(),
            num(row.summary.mean),
            num(row.summary.std),
            row.summary.excluded.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fig6_csv<W: io::Write>(report: &SweepReport, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["band", "low", "high", "mean_fp_plus_fn"])?;
    for (band, pair, mean) in fp_fn_sums(report) {
        w.write_record([
            band.to_string(),
            num(pair.low()),
            num(pair.high()),
            num(mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_agreement_csv<W: io::Write>(rows: &[Agreement], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "percent_best", "percent_same_or_better"])?;
    for a in rows {
        w.write_record([
            a.metric.name().to_string(),
            num(a.percent_best),
            num(a.percent_same_or_better),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const CORPUS_HEADER: [&str; 4] = ["scene", "designed_low", "designed_high", "seed"];

/// Read an oracle file with columns `scene,designed_low,designed_high[,...]`.
pub fn read_oracle_csv<R: io::Read>(
    input: R,
    source: &str,
) -> Result<HashMap<String, ThresholdPair>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = HashMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let scene: String = field(&row, 0, "scene", source)?;
        let low: f64 = field(&row, 1, "designed_low", source)?;
        let high: f64 = field(&row, 2, "designed_high", source)?;
        let pair =
            ThresholdPair::new(low, high).map_err(|e| parse_err(source, line, e.to_string()))?;
        out.insert(scene, pair);
    }
    Ok(out)
}
