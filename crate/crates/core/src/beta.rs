//! Beta density in the mean/precision parametrization, kept for side-by-side
//! density tables with the unifed. Evaluation only.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    mu: f64,
    phi: f64,
}

impl BetaParams {
    pub fn new(mu: f64, phi: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && mu < 1.0) {
            return Err(Error::domain(format!(
                "beta mean must lie in (0,1), got {mu}"
            )));
        }
        if !(phi.is_finite() && phi > 0.0) {
            return Err(Error::domain(format!(
                "beta precision must be > 0, got {phi}"
            )));
        }
        Ok(BetaParams { mu, phi })
    }

    /// From the usual shape parameters: `μ = α/(α+β)`, `φ = α+β`.
    pub fn from_shapes(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!(
                "beta shapes must be positive, got ({alpha}, {beta})"
            )));
        }
        Self::new(alpha / (alpha + beta), alpha + beta)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn shapes(&self) -> (f64, f64) {
        (self.mu * self.phi, (1.0 - self.mu) * self.phi)
    }
}

pub fn beta_density(y: f64, params: &BetaParams) -> f64 {
    if !(y > 0.0 && y < 1.0) {
        return 0.0;
    }
    let (a, b) = params.shapes();
    let log_norm = ln_gamma(params.phi) - ln_gamma(a) - ln_gamma(b);
    (log_norm + (a - 1.0) * y.ln() + (b - 1.0) * (-y).ln_1p()).exp()
}

/// `(μ, μ(1−μ)/(1+φ))`.
pub fn beta_mean_variance(params: &BetaParams) -> (f64, f64) {
    let mu = params.mu;
    (mu, mu * (1.0 - mu) / (1.0 + params.phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_member() {
        let p = BetaParams::new(0.5, 2.0).unwrap();
        assert!((beta_density(0.3, &p) - 1.0).abs() < 1e-14);
        let p = BetaParams::from_shapes(1.0, 1.0).unwrap();
        assert!((beta_density(0.77, &p) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integer_shapes() {
        // Γ(4)/Γ(2)² · 0.5 · 0.5
        let p = BetaParams::new(0.5, 4.0).unwrap();
        assert!((beta_density(0.5, &p) - 1.5).abs() < 1e-13);
    }

    #[test]
    fn outside_support_is_zero() {
        let p = BetaParams::new(0.3, 5.0).unwrap();
        assert_eq!(beta_density(0.0, &p), 0.0);
        assert_eq!(beta_density(1.2, &p), 0.0);
    }

    #[test]
    fn moments() {
        assert_eq!(
            beta_mean_variance(&BetaParams::new(0.5, 1.0).unwrap()),
            (0.5, 0.125)
        );
        let (m, v) = beta_mean_variance(&BetaParams::new(0.2, 3.0).unwrap());
        assert_eq!(m, 0.2);
        assert!((v - 0.04).abs() < 1e-16);
        let (_, v) = beta_mean_variance(&BetaParams::new(0.5, 1e9).unwrap());
        assert!(v < 1e-9);
    }

    #[test]
    fn invalid_params() {
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(0.5, 0.0).is_err());
        assert!(BetaParams::from_shapes(-1.0, 2.0).is_err());
    }
}
