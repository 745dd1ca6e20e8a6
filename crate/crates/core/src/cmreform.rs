//! MSE, RMSE, PSNR and zero-constant SSIM rewritten as functions of the
//! confusion counts alone, plus a report that checks them against the direct
//! pixel computations.
//!
//! For `{0,1}` maps every mismatching pixel is a false positive or a false
//! negative, so `MSE = (FP + FN) / T`. The SSIM form follows from
//! `mu_E = P'/T`, `mu_G = P/T`, `var_E = P'(T-P') / (T(T-1))`,
//! `var_G = P(T-P) / (T(T-1))` and `cov = (T*TP - P'P) / (T(T-1))`, which give
//!
//! ```text
//!                 4 P' P (T*TP - P' P)
//! SSIM = -----------------------------------------
//!        (P'^2 + P^2) (P'(T - P') + P(T - P))
//! ```
//!
//! when `alpha = beta = gamma = 1` and all stabilizing constants are zero.

use std::fmt;
use std::io;

use crate::metrics::{self, ConfusionCounts, MetricError, Psnr, SsimParams};
use crate::raster::BinaryMap;

fn total(cc: &ConfusionCounts) -> Result<f64, MetricError> {
    match cc.total() {
        0 => Err(MetricError::ZeroTotal),
        t => Ok(t as f64),
    }
}

pub fn mse_from_counts(cc: &ConfusionCounts) -> Result<f64, MetricError> {
    Ok(cc.errors() as f64 / total(cc)?)
}

pub fn rmse_from_counts(cc: &ConfusionCounts) -> Result<f64, MetricError> {
    mse_from_counts(cc).map(f64::sqrt)
}

/// `10 log10(T * 255^2 / (FP + FN))`, or `Perfect` when nothing is wrong.
pub fn psnr_from_counts(cc: &ConfusionCounts) -> Result<Psnr, MetricError> {
    let t = total(cc)?;
    Ok(match cc.errors() {
        0 => Psnr::Perfect,
        err => Psnr::Finite(10.0 * (t * Psnr::PEAK * Psnr::PEAK / err as f64).log10()),
    })
}

pub fn ssim_from_counts(cc: &ConfusionCounts) -> Result<f64, MetricError> {
    let t = cc.total();
    if t == 0 {
        return Err(MetricError::ZeroTotal);
    }
    let (pp, p) = (cc.predicted_positive(), cc.actual_positive());
    if pp == 0 || pp == t || p == 0 || p == t {
        return Err(MetricError::DegenerateStatistics("constant map"));
    }
    // exact integers up to the final division; T <= 2^21 keeps every product
    // inside i128 comfortably
    let (t, tp, pp, p) = (t as i128, cc.tp as i128, pp as i128, p as i128);
    let num = 4 * pp * p * (t * tp - pp * p);
    let den = (pp * pp + p * p) * (pp * (t - pp) + p * (t - p));
    Ok(num as f64 / den as f64)
}

/// Outcome of one direct-versus-counts comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub metric: &'static str,
    pub direct: Option<f64>,
    pub from_counts: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
}

impl Comparison {
    fn absolute(metric: &'static str, direct: f64, from_counts: f64, tol: f64) -> Self {
        let abs = (direct - from_counts).abs();
        Self::finish(metric, direct, from_counts, tol, abs <= tol)
    }

    fn relative(metric: &'static str, direct: f64, from_counts: f64, tol: f64) -> Self {
        let abs = (direct - from_counts).abs();
        let scale = direct.abs().max(from_counts.abs());
        let ok = abs == 0.0 || abs <= tol * scale;
        Self::finish(metric, direct, from_counts, tol, ok)
    }

    fn finish(metric: &'static str, direct: f64, from_counts: f64, tol: f64, ok: bool) -> Self {
        let abs = if direct == from_counts {
            0.0
        } else {
            (direct - from_counts).abs()
        };
        let scale = direct.abs().max(from_counts.abs());
        Self {
            metric,
            direct: Some(direct),
            from_counts: Some(from_counts),
            abs_diff: Some(abs),
            rel_diff: Some(if scale == 0.0 || abs == 0.0 {
                0.0
            } else {
                abs / scale
            }),
            tolerance: tol,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn skipped(metric: &'static str, tol: f64) -> Self {
        Self {
            metric,
            direct: None,
            from_counts: None,
            abs_diff: None,
            rel_diff: None,
            tolerance: tol,
            status: Status::Skipped,
        }
    }
}

/// Direct and count-based values of every reformulated metric for one pair of
/// maps.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub counts: ConfusionCounts,
    pub rows: Vec<Comparison>,
}

impl EquivalenceReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn row(&self, metric: &str) -> Option<&Comparison> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub const CSV_HEADER: [&'static str; 6] = [
        "metric",
        "direct",
        "from_counts",
        "abs_diff",
        "rel_diff",
        "status",
    ];

    /// One row per metric: `metric,direct,from_counts,abs_diff,rel_diff,status`.
    /// Missing values are empty fields; PSNR `Perfect` is `inf`.
    pub fn write_csv<W: io::Write>(&self, out: W, with_header: bool) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if with_header {
            w.write_record(Self::CSV_HEADER)?;
        }
        let fmt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.metric.to_string(),
                fmt(r.direct),
                fmt(r.from_counts),
                fmt(r.abs_diff),
                fmt(r.rel_diff),
                r.status.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip text; exponent form outside `[1e-6, 1e15)`.
pub(crate) fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == f64::INFINITY {
        "inf".to_string()
    } else if a == 0.0 || (1e-6..1e15).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Compare MSE, RMSE and PSNR (absolute tolerance `tol_exact`) and
/// zero-constant global SSIM (relative tolerance `tol_ssim`) between the
/// direct and count-based routes. SSIM is skipped when either map is constant.
pub fn verify_reformulations(
    e: &BinaryMap,
    g: &BinaryMap,
    tol_exact: f64,
    tol_ssim: f64,
) -> Result<EquivalenceReport, MetricError> {
    let cc = metrics::confusion(e, g)?;
    let mut rows = Vec::with_capacity(4);

    let mse = metrics::mse(e, g)?;
    rows.push(Comparison::absolute(
        "mse",
        mse,
        mse_from_counts(&cc)?,
        tol_exact,
    ));
    rows.push(Comparison::absolute(
        "rmse",
        metrics::rmse(e, g)?,
        rmse_from_counts(&cc)?,
        tol_exact,
    ));

    let psnr = metrics::psnr(e, g)?;
    let psnr_cc = psnr_from_counts(&cc)?;
    rows.push(match (psnr, psnr_cc) {
        (Psnr::Perfect, Psnr::Perfect) => {
            Comparison::finish("psnr", f64::INFINITY, f64::INFINITY, tol_exact, true)
        }
        (Psnr::Finite(a), Psnr::Finite(b)) => Comparison::absolute("psnr", a, b, tol_exact),
        (a, b) => Comparison::finish("psnr", a.as_f64(), b.as_f64(), tol_exact, false),
    });

    rows.push(
        match (
            metrics::ssim(e, g, &SsimParams::zero_constants()),
            ssim_from_counts(&cc),
        ) {
            (Ok(a), Ok(b)) => Comparison::relative("ssim", a, b, tol_ssim),
            (
                Err(MetricError::DegenerateStatistics(_)),
                Err(MetricError::DegenerateStatistics(_)),
            ) => Comparison::skipped("ssim", tol_ssim),
            (Err(err), _) | (_, Err(err)) => {
                if matches!(err, MetricError::DegenerateStatistics(_)) {
                    // one route degenerate and the other not is itself a mismatch
                    Comparison {
                        status: Status::Fail,
                        ..Comparison::skipped("ssim", tol_ssim)
                    }
                } else {
                    return Err(err);
                }
            }
        },
    );

    Ok(EquivalenceReport { counts: cc, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ConfusionCounts {
        ConfusionCounts::new(1, 2, 0, 1)
    }

    #[test]
    fn mse_family_from_counts() {
        let perfect = ConfusionCounts::new(3, 5, 0, 0);
        assert_eq!(mse_from_counts(&perfect).unwrap(), 0.0);
        assert_eq!(rmse_from_counts(&perfect).unwrap(), 0.0);
        assert_eq!(psnr_from_counts(&perfect).unwrap(), Psnr::Perfect);

        assert_eq!(mse_from_counts(&worked()).unwrap(), 0.25);
        assert_eq!(rmse_from_counts(&worked()).unwrap(), 0.5);
        let p = psnr_from_counts(&worked()).unwrap().finite().unwrap();
        assert!((p - 54.15140352195873).abs() < 1e-9);

        let all_wrong = ConfusionCounts::new(0, 0, 2, 2);
        assert_eq!(mse_from_counts(&all_wrong).unwrap(), 1.0);
        assert_eq!(rmse_from_counts(&all_wrong).unwrap(), 1.0);
        let p = psnr_from_counts(&all_wrong).unwrap().finite().unwrap();
        assert!((p - 48.1308036086791).abs() < 1e-9);

        let zero = ConfusionCounts::default();
        assert_eq!(mse_from_counts(&zero), Err(MetricError::ZeroTotal));
        assert_eq!(psnr_from_counts(&zero), Err(MetricError::ZeroTotal));
    }

    #[test]
    fn ssim_closed_form() {
        // 4*1*2*(4*1 - 2) / ((1 + 4)(1*3 + 2*2)) = 16/35
        assert_eq!(ssim_from_counts(&worked()).unwrap(), 16.0 / 35.0);

        for (p, t) in [(1u64, 4u64), (3, 10), (17, 1000), (999, 1000)] {
            let same = ConfusionCounts::new(p, t - p, 0, 0);
            assert_eq!(ssim_from_counts(&same).unwrap(), 1.0);
        }

        let none = ConfusionCounts::new(0, 4, 0, 0);
        assert!(matches!(
            ssim_from_counts(&none),
            Err(MetricError::DegenerateStatistics(_))
        ));
        // one side constant is degenerate too
        let e_empty = ConfusionCounts::new(0, 2, 0, 2);
        assert!(ssim_from_counts(&e_empty).is_err());
    }

    fn map(w: usize, h: usize, bits: &[u8]) -> BinaryMap {
        BinaryMap::new(w, h, bits.to_vec()).unwrap()
    }

    #[test]
    fn verify_identical_maps() {
        let g = map(3, 2, &[1, 0, 1, 0, 0, 1]);
        let rep = verify_reformulations(&g, &g, 1e-12, 1e-9).unwrap();
        assert!(rep.all_passed());
        assert!(rep.rows.iter().all(|r| r.status == Status::Pass));
        let s = rep.row("ssim").unwrap();
        assert!((s.direct.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(s.from_counts, Some(1.0));
        assert_eq!(rep.row("psnr").unwrap().direct, Some(f64::INFINITY));
    }

    #[test]
    fn verify_worked_example() {
        let e = map(2, 2, &[1, 0, 0, 0]);
        let g = map(2, 2, &[1, 1, 0, 0]);
        let rep = verify_reformulations(&e, &g, 1e-12, 1e-9).unwrap();
        assert!(rep.rows.iter().all(|r| r.status == Status::Pass), "{rep:?}");
        assert_eq!(rep.row("mse").unwrap().direct, Some(0.25));
        assert!((rep.row("ssim").unwrap().direct.unwrap() - 16.0 / 35.0).abs() < 1e-12);
    }

    #[test]
    fn verify_constant_maps_skip_ssim() {
        let e = map(2, 2, &[0, 0, 0, 0]);
        let g = map(2, 2, &[1, 1, 1, 1]);
        let rep = verify_reformulations(&e, &g, 1e-12, 1e-9).unwrap();
        assert_eq!(rep.row("ssim").unwrap().status, Status::Skipped);
        for m in ["mse", "rmse", "psnr"] {
            assert_eq!(rep.row(m).unwrap().status, Status::Pass);
        }
        assert!(rep.all_passed());
        assert!(verify_reformulations(&e, &map(1, 4, &[0; 4]), 1e-12, 1e-9).is_err());
    }

    #[test]
    fn csv_rows() {
        let g = map(2, 1, &[1, 0]);
        let rep = verify_reformulations(&g, &g, 1e-12, 1e-9).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines[0],
            "metric,direct,from_counts,abs_diff,rel_diff,status"
        );
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[3], "psnr,inf,inf,0,0,PASS");
        assert!(lines[1].starts_with("mse,0,0,0,0,PASS"));
    }

    #[test]
    fn value_text_round_trips() {
        for v in [
            0.0,
            0.5,
            54.15140352195873,
            4.336808689942018e-19,
            1e-7,
            3e20,
            -2.5e-9,
        ] {
            let text = format_value(v);
            assert_eq!(text.parse::<f64>().unwrap(), v, "{text}");
        }
        assert_eq!(format_value(4.336808689942018e-19), "4.336808689942018e-19");
        assert_eq!(format_value(f64::INFINITY), "inf");
    }
}
