//! `edgebench` command line. Exit codes: 0 success, 1 data error, 2 usage
//! error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::{
    agreement, load_dataset, read_oracle_csv, read_sweep_csv, run_sweep, validate_chain,
    write_agreement_csv, write_fig2_csv, write_fig6_csv, write_sweep_csv, write_table2_csv,
    HarnessError, Selection, SweepConfig, CORPUS_HEADER, KNOWN_BAD_SWED_MASKS,
};
use crate::canny::{self, standard_pairs, ThresholdPair, DEFAULT_SIGMA};
use crate::cmreform::verify_reformulations;
use crate::metrics::{self, FomParams, SsimParams};
use crate::raster::{self, normalize_to_255, Band};
use crate::synth::{gen_corpus_with, CorpusConfig, SceneSpec};

#[derive(Debug, Parser)]
#[command(
    name = "edgebench",
    version,
    about = "Canny threshold sweeps scored against land/water masks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic coastline corpus with a designed best threshold pair per scene.
    Synth(SynthArgs),
    /// Detect edges in one graymap and write them as a 0/255 PGM.
    Canny(CannyArgs),
    /// Score one edge map against a ground-truth edge map.
    Eval(EvalArgs),
    /// Run every threshold pair over a directory of masks and bands.
    Sweep(SweepArgs),
    /// Summarize a sweep.csv into best-pair counts, per-band means and agreement.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct DetectorArgs {
    /// Gaussian smoothing scale.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Distance penalty of the figure of merit.
    #[arg(long, default_value_t = 1.0 / 9.0)]
    fom_alpha: f64,
    /// Hysteresis chain as `low:high,low:high,...` (default: the six standard pairs).
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<ThresholdPair>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 40)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Scene width and height in pixels.
    #[arg(long, default_value_t = 96)]
    size: usize,
    /// Rows between the labeled and the imaged coastline.
    #[arg(long, default_value_t = 3)]
    label_offset: i32,
}

#[derive(Debug, Args)]
struct CannyArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long)]
    low: f64,
    #[arg(long)]
    high: f64,
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Skip the min-max rescale to 0..=255 before detection.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Detected edge map (two-valued PGM).
    edges: PathBuf,
    /// Ground-truth edge map (two-valued PGM).
    truth: PathBuf,
    #[arg(long, default_value_t = 1.0 / 9.0)]
    fom_alpha: f64,
    /// Absolute tolerance for MSE, RMSE and PSNR reformulations.
    #[arg(long, default_value_t = 1e-12)]
    tol_exact: f64,
    /// Relative tolerance for the SSIM reformulation.
    #[arg(long, default_value_t = 1e-9)]
    tol_ssim: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Directory of `<id>_mask.pgm` and `<id>_<band>.pgm` files.
    data_dir: PathBuf,
    /// Where sweep.csv goes (default: the data directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    detector: DetectorArgs,
    /// Bands to sweep, comma separated (default: every band present).
    #[arg(long, value_delimiter = ',')]
    bands: Vec<Band>,
    /// Image ids to leave out; repeatable.
    #[arg(long)]
    exclude: Vec<String>,
    /// Leave out the three known-bad masks of the Sentinel-2 water test set.
    #[arg(long)]
    skip_known_bad: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    sweep_csv: PathBuf,
    /// Where the tables go (default: next to sweep.csv).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Per-image oracle pairs (`scene,designed_low,designed_high,...`); a
    /// corpus.csv beside the sweep is used when present.
    #[arg(long)]
    oracle: Option<PathBuf>,
    /// Cells competing for an image's best pair: `all`, `nir` or a band name.
    #[arg(long, default_value = "all")]
    select: Selection,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn data<E: std::fmt::Display>(context: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Data(format!("{}: {e}", context.display()))
}

/// Parse `args` (program name first) and run the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Canny(a) => detect(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(data(path))
}

fn synth(a: SynthArgs) -> Result<(), Failure> {
    if a.count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let base = SceneSpec {
        width: a.size,
        height: a.size,
        seed: a.seed,
        ..Default::default()
    };
    base.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let cfg = CorpusConfig {
        label_offset: a.label_offset,
        ..Default::default()
    };
    let corpus = gen_corpus_with(a.count, &base, &cfg).map_err(|e| Failure::Data(e.to_string()))?;

    fs::create_dir_all(&a.out_dir).map_err(data(&a.out_dir))?;
    let csv_path = a.out_dir.join("corpus.csv");
    let mut w = csv::Writer::from_writer(create(&csv_path)?);
    w.write_record(CORPUS_HEADER).map_err(data(&csv_path))?;
    for scene in &corpus {
        let id = format!("scene_{:04}", scene.index);
        let band_path = a.out_dir.join(format!("{id}_band.pgm"));
        raster::save_pgm(&scene.band, &band_path).map_err(data(&band_path))?;
        let mask_path = a.out_dir.join(format!("{id}_mask.pgm"));
        raster::save_mask(&scene.mask, 255, &mask_path).map_err(data(&mask_path))?;
        w.write_record([
            id,
            scene.designed_best.low().to_string(),
            scene.designed_best.high().to_string(),
            scene.seed.to_string(),
        ])
        .map_err(data(&csv_path))?;
    }
    w.flush().map_err(data(&csv_path))?;
    println!("wrote {} scenes to {}", corpus.len(), a.out_dir.display());
    Ok(())
}

fn detect(a: CannyArgs) -> Result<(), Failure> {
    let t = ThresholdPair::new(a.low, a.high).map_err(|e| Failure::Usage(e.to_string()))?;
    if !(a.sigma.is_finite() && a.sigma > 0.0) {
        return Err(Failure::Usage(format!(
            "sigma must be positive, got {}",
            a.sigma
        )));
    }
    let image = raster::load_pgm(&a.input).map_err(data(&a.input))?;
    let image = if a.raw {
        image
    } else {
        normalize_to_255(&image)
    };
    let edges = canny::canny(&image, t, a.sigma).map_err(data(&a.input))?;
    raster::save_mask(&edges, 255, &a.output).map_err(data(&a.output))?;
    println!(
        "{} edge pixels -> {}",
        edges.count_ones(),
        a.output.display()
    );
    Ok(())
}

fn eval(a: EvalArgs) -> Result<(), Failure> {
    let fom = FomParams::new(a.fom_alpha).map_err(|e| Failure::Usage(e.to_string()))?;
    let e = raster::load_mask(&a.edges).map_err(data(&a.edges))?;
    let g = raster::load_mask(&a.truth).map_err(data(&a.truth))?;
    let cc = metrics::confusion(&e, &g).map_err(data(&a.edges))?;
    let psnr = metrics::psnr(&e, &g).map_err(data(&a.edges))?;
    let psnr_text = if psnr.is_perfect() {
        "Perfect".to_string()
    } else {
        psnr.to_string()
    };
    let ssim = match metrics::ssim(&e, &g, &SsimParams::default()) {
        Ok(v) => v.to_string(),
        Err(err) => format!("undefined ({err})"),
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |err: io::Error| Failure::Data(err.to_string());
    writeln!(out, "tp {} tn {} fp {} fn {}", cc.tp, cc.tn, cc.fp, cc.fn_).map_err(io_err)?;
    writeln!(
        out,
        "rmse {}",
        metrics::rmse(&e, &g).map_err(data(&a.edges))?
    )
    .map_err(io_err)?;
    writeln!(out, "psnr {psnr_text}").map_err(io_err)?;
    writeln!(out, "ssim {ssim}").map_err(io_err)?;
    writeln!(
        out,
        "fom {}",
        metrics::fom(&e, &g, &fom).map_err(data(&a.edges))?
    )
    .map_err(io_err)?;
    writeln!(out).map_err(io_err)?;

    let rep = verify_reformulations(&e, &g, a.tol_exact, a.tol_ssim).map_err(data(&a.edges))?;
    rep.write_csv(&mut out, true)
        .map_err(|err| Failure::Data(err.to_string()))?;
    if rep.all_passed() {
        Ok(())
    } else {
        Err(Failure::Data("reformulation check failed".into()))
    }
}

fn sweep_config(d: &DetectorArgs, bands: Vec<Band>) -> Result<SweepConfig, Failure> {
    let pairs = if d.thresholds.is_empty() {
        standard_pairs()
    } else {
        d.thresholds.clone()
    };
    validate_chain(&pairs)?;
    let fom = FomParams::new(d.fom_alpha).map_err(|e| Failure::Usage(e.to_string()))?;
    let cfg = SweepConfig {
        pairs,
        sigma: d.sigma,
        bands: if bands.is_empty() { None } else { Some(bands) },
        fom,
        ssim: SsimParams::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let cfg = sweep_config(&a.detector, a.bands)?;
    let mut exclude = a.exclude;
    if a.skip_known_bad {
        exclude.extend(KNOWN_BAD_SWED_MASKS.iter().map(|s| s.to_string()));
    }
    let dataset = load_dataset(&a.data_dir, &exclude).map_err(data(&a.data_dir))?;
    let report = run_sweep(&dataset, &cfg)?;

    let out_dir = a.out_dir.unwrap_or(a.data_dir);
    fs::create_dir_all(&out_dir).map_err(data(&out_dir))?;
    let path = out_dir.join("sweep.csv");
    write_sweep_csv(&report, create(&path)?).map_err(data(&path))?;
    println!(
        "{} images, {} records -> {}",
        report.manifest.len(),
        report.records.len(),
        path.display()
    );
    Ok(())
}

fn report(a: ReportArgs) -> Result<(), Failure> {
    let file = File::open(&a.sweep_csv).map_err(data(&a.sweep_csv))?;
    let source = a.sweep_csv.display().to_string();
    let rep = read_sweep_csv(io::BufReader::new(file), &source)?;
    if rep.records.is_empty() {
        return Err(Failure::Data(format!("{source}: no records")));
    }
    let here = a
        .sweep_csv
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let out_dir = a.out_dir.unwrap_or_else(|| here.clone());
    fs::create_dir_all(&out_dir).map_err(data(&out_dir))?;

    let table2 = out_dir.join("table2.csv");
    write_table2_csv(&rep, a.select, create(&table2)?).map_err(data(&table2))?;
    let fig2 = out_dir.join("fig2.csv");
    write_fig2_csv(&rep, create(&fig2)?).map_err(data(&fig2))?;
    let fig6 = out_dir.join("fig6.csv");
    write_fig6_csv(&rep, create(&fig6)?).map_err(data(&fig6))?;

    let beside = here.join("corpus.csv");
    let oracle_path = a.oracle.or_else(|| beside.is_file().then_some(beside));
    if let Some(path) = oracle_path {
        let file = File::open(&path).map_err(data(&path))?;
        let oracle = read_oracle_csv(io::BufReader::new(file), &path.display().to_string())?;
        let rows = agreement(&rep, &oracle, a.select)?;
        let out = out_dir.join("agreement.csv");
        write_agreement_csv(&rows, create(&out)?).map_err(data(&out))?;
    }
    println!(
        "report for {} images -> {}",
        rep.manifest.len(),
        out_dir.display()
    );
    Ok(())
}
