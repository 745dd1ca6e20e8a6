//! Run the Canny stages one at a time on a synthetic coastline and show how
//! the edge count shrinks along the standard threshold chain.

use edgebench::canny::{self, standard_pairs, DEFAULT_SIGMA};
use edgebench::raster::normalize_to_255;
use edgebench::synth::{gen_coastline_mask, render_band, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SceneSpec {
        seed: 3,
        noise_sigma: 4.0,
        distractor_contrast: 60,
        ..Default::default()
    };
    let mask = gen_coastline_mask(&spec)?;
    let band = normalize_to_255(&render_band(&mask, &spec)?);

    let smoothed = canny::smooth(&band, DEFAULT_SIGMA)?;
    let field = canny::sobel_gradients(&smoothed)?;
    let peak = field.magnitude.values().iter().cloned().fold(0.0, f64::max);
    println!("gradient peak {peak:.1}");

    let thin = canny::nonmax_suppress(&field);
    let ridge = thin.values().iter().filter(|&&v| v > 0.0).count();
    println!("{ridge} pixels survive non-maximum suppression");

    for t in standard_pairs() {
        let edges = canny::hysteresis(&thin, t);
        println!(
            "{:>9}  {:>5} edge pixels",
            t.to_string(),
            edges.count_ones()
        );
    }

    // the ground truth used for scoring comes from the mask itself
    let truth = canny::mask_to_edges(&mask)?;
    println!("mask edges: {} pixels", truth.count_ones());
    Ok(())
}
