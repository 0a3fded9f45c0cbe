//! Seeded inverse-transform sampling, with the distribution and quantile
//! functions it is built on.
//!
//! ```text
//! cargo run --example sampling
//! ```

use unifed::distribution::{cdf, quantile, sample};
use unifed::numerics::kappa_prime;

fn main() -> unifed::Result<()> {
    let theta = 2.0;
    let xs = sample(100_000, theta, 42)?;
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    println!(
        "sample mean {mean:.5}, exact mean {:.5}",
        kappa_prime(theta)?
    );

    for p in [0.1, 0.5, 0.9] {
        let q = quantile(p, theta)?;
        let empirical = xs.iter().filter(|&&x| x <= q).count() as f64 / xs.len() as f64;
        println!(
            "p={p}: quantile {q:.5}, cdf(quantile) {:.12}, empirical {empirical:.4}",
            cdf(q, theta)?
        );
    }
    println!("first draws: {:?}", sample(5, theta, 42)?);
    Ok(())
}
