//! Generate a designed corpus and print the FOM of each pair per scene; the
//! designed pair is marked with `*`.
//!
//! ```text
//! cargo run --release --example synthetic_corpus -- [scenes] [seed] [out-dir]
//! ```

use edgebench::canny::standard_pairs;
use edgebench::metrics::FomParams;
use edgebench::raster;
use edgebench::synth::{fom_profile, gen_corpus, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let out = args.next();

    let corpus = gen_corpus(
        n,
        &SceneSpec {
            seed,
            ..Default::default()
        },
    )?;
    let chain = standard_pairs();
    for scene in &corpus {
        let foms = fom_profile(&scene.band, &scene.mask, &chain, &FomParams::default())?;
        let cells: Vec<String> = chain
            .iter()
            .zip(&foms)
            .map(|(t, f)| {
                let mark = if *t == scene.designed_best { "*" } else { " " };
                format!("{f:.3}{mark}")
            })
            .collect();
        println!(
            "scene {:>3} (attempts {}): {}",
            scene.index,
            scene.attempts,
            cells.join(" ")
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            let id = format!("scene_{:04}", scene.index);
            raster::save_pgm(&scene.band, format!("{dir}/{id}_band.pgm"))?;
            raster::save_mask(&scene.mask, 255, format!("{dir}/{id}_mask.pgm"))?;
        }
    }
    Ok(())
}
