//! Sweep a synthetic corpus and print the best-pair table for each metric,
//! the mean `fp + fn` per pair and how often each metric agrees with the
//! designed pair.

use std::collections::HashMap;

use edgebench::harness::{
    agreement, best_threshold_counts, fp_fn_sums, run_sweep, DatasetItem, Selection, SweepConfig,
};
use edgebench::metrics::MetricId;
use edgebench::raster::Band;
use edgebench::synth::{gen_corpus, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = gen_corpus(
        40,
        &SceneSpec {
            seed: 42,
            ..Default::default()
        },
    )?;
    let dataset: Vec<DatasetItem> = corpus
        .iter()
        .map(|s| DatasetItem {
            id: format!("scene_{:04}", s.index),
            mask: s.mask.clone(),
            bands: vec![(Band::Single, s.band.clone())],
        })
        .collect();
    let oracle: HashMap<String, _> = corpus
        .iter()
        .map(|s| (format!("scene_{:04}", s.index), s.designed_best))
        .collect();

    let report = run_sweep(&dataset, &SweepConfig::default())?;

    println!("best pair counts");
    for metric in MetricId::ALL {
        let row: Vec<String> = best_threshold_counts(&report, metric, Selection::AllBands)?
            .iter()
            .map(|(t, n)| format!("{t}={n}"))
            .collect();
        println!("  {:<5} {}", metric.name(), row.join("  "));
    }

    println!("mean fp+fn");
    for (_, t, mean) in fp_fn_sums(&report) {
        println!("  {:>8} {mean:.1}", t.to_string());
    }

    println!("agreement with the designed pair");
    for a in agreement(&report, &oracle, Selection::AllBands)? {
        println!(
            "  {:<5} best {:5.1}%  same-or-better {:5.1}%",
            a.metric.name(),
            a.percent_best,
            a.percent_same_or_better
        );
    }
    Ok(())
}
