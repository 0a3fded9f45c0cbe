//! Compare the unifed with the beta density of the same mean and variance.
//!
//! ```text
//! cargo run --example beta_comparison
//! ```

use unifed::beta::{beta_density, beta_mean_variance, BetaParams};
use unifed::distribution::{density, mean_variance, UnifedParams};

fn main() -> unifed::Result<()> {
    for theta in [-3.0, 0.0, 1.5] {
        let (mu, var) = mean_variance(&UnifedParams::with_theta(theta)?);
        // beta variance is μ(1−μ)/(1+φ)
        let phi = mu * (1.0 - mu) / var - 1.0;
        let beta = BetaParams::new(mu, phi)?;
        let (bm, bv) = beta_mean_variance(&beta);
        println!(
            "theta={theta}: mean {mu:.4} var {var:.5} | beta mu={bm:.4} phi={phi:.3} var {bv:.5}"
        );
        for x in [0.05, 0.25, 0.5, 0.75, 0.95] {
            println!(
                "  x={x:<4} unifed {:.4}  beta {:.4}",
                density(x, theta)?,
                beta_density(x, &beta)
            );
        }
    }
    Ok(())
}
