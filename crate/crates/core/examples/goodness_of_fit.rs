//! Residual-deviance goodness-of-fit test and its small-weight caveat.
//!
//! ```text
//! cargo run --example goodness_of_fit
//! ```

use unifed::glm::{fit, goodness_of_fit, DesignMatrix, LinkFunction, WeightedResponse};
use unifed::numerics::chi_square_survival;

fn main() -> unifed::Result<()> {
    // Two groups of classes with a dose covariate.
    let doses = [0.0, 0.5, 1.0, 1.5, 2.0, 0.0, 0.5, 1.0, 1.5, 2.0];
    let y = vec![0.31, 0.36, 0.44, 0.47, 0.55, 0.28, 0.37, 0.40, 0.49, 0.52];
    let w = vec![4.0, 12.0, 40.0, 35.0, 60.0, 8.0, 25.0, 30.0, 50.0, 45.0];
    let rows: Vec<Vec<f64>> = doses.iter().map(|&d| vec![d]).collect();
    let x = DesignMatrix::with_intercept(&rows, &["dose"])?;
    let f = fit(&x, &WeightedResponse::new(y, w)?, LinkFunction::Canonical)?;

    let gof = goodness_of_fit(&f)?;
    println!(
        "D = {:.3} on {} df, p = {:.4}",
        gof.statistic, gof.df, gof.p_value
    );
    for threshold in [30.0, 2.0] {
        println!(
            "threshold {threshold}: reliable = {}",
            gof.is_reliable(threshold)
        );
    }

    // the tail probability quoted for the car-insurance fit
    println!(
        "P(chi2_273 >= 297.86) = {:.4}",
        chi_square_survival(297.86, 273.0)?
    );
    Ok(())
}
