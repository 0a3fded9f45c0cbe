//! Tail probabilities used for inference on fitted models.

use statrs::function::gamma::ln_gamma;

use crate::error::{check_finite, Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// `P(χ²_df ≥ x)`.
pub fn chi_square_survival(x: f64, df: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_finite("df", df)?;
    if x < 0.0 {
        return Err(Error::domain(format!(
            "chi-square statistic must be >= 0, got {x}"
        )));
    }
    if df <= 0.0 {
        return Err(Error::domain(format!(
            "degrees of freedom must be > 0, got {df}"
        )));
    }
    Ok(gamma_q(df / 2.0, x / 2.0))
}

/// Regularized upper incomplete gamma `Q(a, x)`: series below `a + 1`,
/// Lentz continued fraction above.
pub(crate) fn gamma_q(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        1.0 - lower_series(a, x, log_prefactor)
    } else {
        upper_continued_fraction(a, x, log_prefactor)
    }
}

fn lower_series(a: f64, x: f64, log_prefactor: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum * log_prefactor.exp()).min(1.0)
}

fn upper_continued_fraction(a: f64, x: f64, log_prefactor: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (log_prefactor.exp() * h).clamp(0.0, 1.0)
}

/// Two-sided standard-normal tail `2(1 − Φ(|z|))`, computed as
/// `P(χ²₁ ≥ z²)`.
pub fn normal_two_sided_p(z: f64) -> Result<f64> {
    check_finite("z", z)?;
    Ok(gamma_q(0.5, z * z / 2.0))
}
