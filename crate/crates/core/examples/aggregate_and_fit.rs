//! Fit the same model on raw rows and on aggregated classes.
//!
//! With a path argument the file is read with the car-insurance layout
//! (`exposure`, `gender`, `agecat`, `area`, `veh_age`); otherwise a simulated
//! portfolio of the same shape is used.
//!
//! ```text
//! cargo run --release --example aggregate_and_fit [car.csv]
//! ```

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unifed::cli::render_summary;
use unifed::data::{
    aggregate, build_design, ingest_path, AggregatedData, Dataset, DesignSpec, RawObservation,
};
use unifed::glm::{fit, LinkFunction};

fn simulated_portfolio(rows: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let covariates = [("gender", 2), ("agecat", 6), ("area", 6), ("veh_age", 4)];
    let labels = |name: &str, k: usize| -> String {
        match name {
            "gender" => ["F", "M"][k].to_string(),
            "area" => ["A", "B", "C", "D", "E", "F"][k].to_string(),
            _ => (k + 1).to_string(),
        }
    };
    let effects = [0.03, 0.02, 0.05, 0.16];
    let data = (0..rows)
        .map(|_| {
            let picks: Vec<usize> = covariates
                .iter()
                .map(|&(_, k)| rng.random_range(0..k))
                .collect();
            let eta = -0.33
                + picks
                    .iter()
                    .zip(effects)
                    .map(|(&p, e)| e * p as f64)
                    .sum::<f64>();
            let mean = unifed::numerics::kappa_prime(eta).unwrap();
            // exposure-like response: a draw around the class mean, inside (0,1)
            let y = (mean + 0.5 * (rng.random::<f64>() - 0.5)).clamp(0.0027, 0.9993);
            RawObservation {
                response: y,
                weight: 1.0,
                levels: covariates
                    .iter()
                    .zip(&picks)
                    .map(|(&(n, _), &p)| labels(n, p))
                    .collect(),
            }
        })
        .collect();
    Dataset {
        covariate_names: covariates.iter().map(|(n, _)| n.to_string()).collect(),
        rows: data,
    }
}

fn main() -> unifed::Result<()> {
    let spec = DesignSpec::new("exposure").covariates(["gender", "agecat", "area", "veh_age"]);
    let data = match std::env::args().nth(1) {
        Some(path) => ingest_path(path, &spec)?,
        None => simulated_portfolio(67_856, 2012),
    };

    let start = Instant::now();
    let classes = aggregate(&data)?;
    let (x, y, _) = build_design(&classes, &spec)?;
    let aggregated = fit(&x, &y, LinkFunction::Canonical)?;
    let t_agg = start.elapsed();

    let start = Instant::now();
    let (x, y, _) = build_design(&AggregatedData::from_rows(&data)?, &spec)?;
    let raw = fit(&x, &y, LinkFunction::Canonical)?;
    let t_raw = start.elapsed();

    println!("{} rows, {} classes\n", data.len(), classes.len());
    println!(
        "aggregated ({t_agg:.2?}):\n{}",
        render_summary(&aggregated, 4)
    );
    println!("raw rows ({t_raw:.2?}):\n{}", render_summary(&raw, 4));

    let gap = aggregated
        .coefficients
        .iter()
        .zip(&raw.coefficients)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("largest coefficient difference: {gap:.2e}");
    Ok(())
}
