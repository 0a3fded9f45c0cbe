//! Tabulate unifed densities for several means, the data behind a plot of
//! how the shape follows the mean.
//!
//! ```text
//! cargo run --example density_shapes > shapes.csv
//! ```

use unifed::distribution::{density, MeanParam};

fn main() -> unifed::Result<()> {
    let means = [0.1, 0.3, 0.5, 0.7, 0.9];
    let thetas = means
        .iter()
        .map(|&m| MeanParam::new(m)?.theta())
        .collect::<unifed::Result<Vec<_>>>()?;

    print!("x");
    for (m, t) in means.iter().zip(&thetas) {
        print!(",mu={m} (theta={t:.4})");
    }
    println!();
    for i in 1..100 {
        let x = i as f64 / 100.0;
        print!("{x}");
        for &t in &thetas {
            print!(",{:.6}", density(x, t)?);
        }
        println!();
    }
    Ok(())
}
