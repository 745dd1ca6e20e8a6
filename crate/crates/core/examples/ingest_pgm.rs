//! Load a converted band and its mask, rescale the band to 0..=255 and write
//! both back out.
//!
//! ```text
//! cargo run --example ingest_pgm -- <band.pgm> <mask.pgm> <out-dir>
//! ```
//!
//! Without arguments a small synthetic scene is written to a temp directory
//! first and then read back.

use std::path::PathBuf;

use edgebench::raster::{self, normalize_to_255};
use edgebench::synth::{gen_coastline_mask, render_band, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<PathBuf> = std::env::args_os().skip(1).map(PathBuf::from).collect();
    let (band_path, mask_path, out_dir) = match args.as_slice() {
        [b, m, o] => (b.clone(), m.clone(), o.clone()),
        _ => {
            let dir = std::env::temp_dir().join("edgebench-ingest");
            std::fs::create_dir_all(&dir)?;
            let spec = SceneSpec {
                width: 64,
                height: 48,
                seed: 11,
                noise_sigma: 3.0,
                ..Default::default()
            };
            let mask = gen_coastline_mask(&spec)?;
            // a 16-bit band as it might come out of a reflectance product
            let band = render_band(&mask, &spec)?;
            let wide =
                edgebench::raster::GrayImage::from_fn(64, 48, |r, c| band.get(r, c) * 40 + 900)?;
            raster::save_pgm(&wide, dir.join("demo_B08.pgm"))?;
            raster::save_mask(&mask, 1, dir.join("demo_mask.pgm"))?;
            (
                dir.join("demo_B08.pgm"),
                dir.join("demo_mask.pgm"),
                dir.clone(),
            )
        }
    };

    let band = raster::load_pgm(&band_path)?;
    let mask = raster::load_mask(&mask_path)?;
    println!(
        "band {}x{} range {}..={}",
        band.width(),
        band.height(),
        band.pixels().iter().min().unwrap_or(&0),
        band.max_value()
    );
    println!("mask {} water pixels of {}", mask.count_ones(), mask.len());

    let scaled = normalize_to_255(&band);
    std::fs::create_dir_all(&out_dir)?;
    raster::save_pgm(&scaled, out_dir.join("normalized.pgm"))?;
    raster::save_mask(&mask, 255, out_dir.join("mask_view.pgm"))?;
    println!(
        "wrote normalized.pgm and mask_view.pgm to {}",
        out_dir.display()
    );
    Ok(())
}
