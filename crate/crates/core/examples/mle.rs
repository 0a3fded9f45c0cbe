//! Draw a sample and recover the canonical parameter by maximum likelihood.
//!
//! ```text
//! cargo run --example mle
//! ```

use unifed::distribution::{log_likelihood, mle_theta, sample};

fn main() -> unifed::Result<()> {
    for (theta, n) in [(-4.0, 50), (0.5, 500), (1.5, 10_000)] {
        let xs = sample(n, theta, 7)?;
        let hat = mle_theta(&xs)?;
        let ll = log_likelihood(&xs, hat)?;
        let mean = xs.iter().sum::<f64>() / n as f64;
        println!(
            "theta={theta:>5} n={n:>6}  x_bar={mean:.4}  theta_hat={hat:>8.4}  loglik={ll:.3}"
        );
    }
    Ok(())
}
