//! Densities with dispersion 1/n, computed exactly through the Irwin-Hall
//! kernel on a rational grid.
//!
//! ```text
//! cargo run --example general_dispersion
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use unifed::distribution::{density_general, mean_variance, UnifedParams};

fn main() -> unifed::Result<()> {
    let theta = 1.0;
    for n in [1, 2, 4, 8] {
        let params = UnifedParams::new(theta, n)?;
        let (mean, var) = mean_variance(&params);
        print!("n={n} mean {mean:.4} var {var:.5} |");
        for i in [1, 4, 8, 12, 15] {
            let x = BigRational::new(BigInt::from(i), BigInt::from(16));
            print!(" f({i}/16)={:.4}", density_general(&x, &params)?);
        }
        println!();
    }
    Ok(())
}
