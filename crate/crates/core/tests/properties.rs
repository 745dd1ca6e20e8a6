//! Cross-module properties of sweeps over generated scenes.

use edgebench::canny::standard_pairs;
use edgebench::cmreform;
use edgebench::harness::{run_sweep, DatasetItem, SweepConfig};
use edgebench::metrics::Psnr;
use edgebench::raster::Band;
use edgebench::synth::{gen_coastline_mask, render_band, SceneSpec};
use proptest::prelude::*;

fn scene(seed: u64, noise: f64, contrast: u8, bars: usize) -> DatasetItem {
    let spec = SceneSpec {
        width: 40,
        height: 40,
        seed,
        noise_sigma: noise,
        distractor_contrast: contrast,
        n_noise_edges: bars,
        amplitude: 4.0,
        ..Default::default()
    };
    let mask = gen_coastline_mask(&spec).unwrap();
    let band = render_band(&mask, &spec).unwrap();
    DatasetItem {
        id: format!("s{seed}"),
        mask,
        bands: vec![(Band::Single, band)],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn records_satisfy_count_identities(
        seed in any::<u64>(), noise in 0.0f64..12.0, contrast in 0u8..90, bars in 0usize..6,
    ) {
        let report = run_sweep(&[scene(seed, noise, contrast, bars)], &SweepConfig::default()).unwrap();
        prop_assert_eq!(report.records.len(), 6);
        for r in &report.records {
            prop_assert_eq!(r.counts.total(), 1600);
            prop_assert!((0.0..=1.0).contains(&r.fom));
            prop_assert!(r.counts_consistent(1e-9));
            let psnr = cmreform::psnr_from_counts(&r.counts).unwrap();
            match (r.psnr, psnr) {
                (Psnr::Perfect, Psnr::Perfect) => {}
                (Psnr::Finite(a), Psnr::Finite(b)) => prop_assert!((a - b).abs() <= 1e-9),
                _ => prop_assert!(false, "psnr kinds differ"),
            }
        }
    }

    #[test]
    fn detected_counts_shrink_along_the_chain(
        seed in any::<u64>(), noise in 0.0f64..12.0, contrast in 0u8..90, bars in 0usize..6,
    ) {
        let report = run_sweep(&[scene(seed, noise, contrast, bars)], &SweepConfig::default()).unwrap();
        let pairs = standard_pairs();
        for (w, p) in report.records.windows(2).zip(pairs.windows(2)) {
            prop_assert_eq!(w[0].pair, p[0]);
            prop_assert!(w[1].counts.tp + w[1].counts.fp <= w[0].counts.tp + w[0].counts.fp);
            prop_assert!(w[1].counts.tp <= w[0].counts.tp);
        }
    }
}
