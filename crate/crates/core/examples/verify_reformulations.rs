//! Check that MSE, RMSE, PSNR and zero-constant SSIM computed from pixels
//! agree with their closed forms in the confusion counts.

use edgebench::cmreform::{self, verify_reformulations};
use edgebench::metrics::ConfusionCounts;
use edgebench::raster::BinaryMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cc = ConfusionCounts::new(1, 2, 0, 1);
    println!("counts {cc:?}: ssim = {}", cmreform::ssim_from_counts(&cc)?);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    for i in 0..200 {
        let density = rng.gen_range(0.05..0.6);
        let mut random = |_: usize, _: usize| rng.gen_bool(density);
        let e = BinaryMap::from_fn(32, 32, &mut random)?;
        let g = BinaryMap::from_fn(32, 32, &mut random)?;
        let report = verify_reformulations(&e, &g, 1e-12, 1e-9)?;
        if !report.all_passed() {
            failures += 1;
        }
        if i == 0 {
            report.write_csv(std::io::stdout(), true)?;
        }
    }
    println!("{failures} of 200 random pairs disagree");
    Ok(())
}
