//! Score detected edges against mask edges with every metric, including the
//! distance transform behind the figure of merit.

use edgebench::canny::{self, ThresholdPair, DEFAULT_SIGMA};
use edgebench::metrics::{self, FomParams, SsimParams};
use edgebench::raster::{normalize_to_255, BinaryMap};
use edgebench::synth::{gen_coastline_mask, render_band, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // the 2x2 hand example
    let e = BinaryMap::new(2, 2, vec![1, 0, 0, 0])?;
    let g = BinaryMap::new(2, 2, vec![1, 1, 0, 0])?;
    println!("2x2: {:?}", metrics::confusion(&e, &g)?);
    println!(
        "  rmse {} psnr {} ssim(zero constants) {}",
        metrics::rmse(&e, &g)?,
        metrics::psnr(&e, &g)?,
        metrics::ssim(&e, &g, &SsimParams::zero_constants())?
    );

    let spec = SceneSpec {
        seed: 21,
        noise_sigma: 3.0,
        ..Default::default()
    };
    let mask = gen_coastline_mask(&spec)?;
    let band = normalize_to_255(&render_band(&mask, &spec)?);
    let truth = canny::mask_to_edges(&mask)?;
    let dt = metrics::distance_transform(&truth)?;
    let far = dt.squared().iter().max().copied().unwrap_or(0);
    println!(
        "scene: farthest pixel from a true edge is {:.1} px away",
        (far as f64).sqrt()
    );

    for (l, h) in [(50.0, 100.0), (100.0, 300.0), (200.0, 600.0)] {
        let t = ThresholdPair::new(l, h)?;
        let found = canny::canny(&band, t, DEFAULT_SIGMA)?;
        println!(
            "{t:>8}: rmse {:.4} psnr {} ssim {:.4} fom {:.4}",
            metrics::rmse(&found, &truth)?,
            metrics::psnr(&found, &truth)?,
            metrics::ssim(&found, &truth, &SsimParams::default())?,
            metrics::fom(&found, &truth, &FomParams::default())?,
        );
    }
    Ok(())
}
