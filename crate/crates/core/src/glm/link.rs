use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::numerics::kappa::{
    kappa_double_prime_unchecked, kappa_prime_inverse, kappa_prime_unchecked,
};

/// Transform between the mean `μ ∈ (0,1)` and the linear predictor `η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkFunction {
    /// `g = κ̇⁻¹`: the linear predictor is the canonical parameter.
    #[default]
    Canonical,
    Logit,
    Identity,
}

impl LinkFunction {
    pub const ALL: [LinkFunction; 3] = [
        LinkFunction::Canonical,
        LinkFunction::Logit,
        LinkFunction::Identity,
    ];

    /// `g(μ)`.
    pub fn link(self, mu: f64) -> Result<f64> {
        check_mean(mu)?;
        match self {
            LinkFunction::Canonical => kappa_prime_inverse(mu),
            LinkFunction::Logit => Ok((mu / (1.0 - mu)).ln()),
            LinkFunction::Identity => Ok(mu),
        }
    }

    /// `g⁻¹(η)`.
    pub fn inverse(self, eta: f64) -> Result<f64> {
        check_finite("linear predictor", eta)?;
        let mu = match self {
            LinkFunction::Canonical => kappa_prime_unchecked(eta),
            LinkFunction::Logit => 1.0 / (1.0 + (-eta).exp()),
            LinkFunction::Identity => eta,
        };
        check_mean(mu).map_err(|_| {
            Error::domain(format!(
                "linear predictor {eta} maps outside (0,1) under the {self} link"
            ))
        })?;
        Ok(mu)
    }

    /// `g′(μ)`.
    pub fn derivative(self, mu: f64) -> Result<f64> {
        check_mean(mu)?;
        Ok(match self {
            LinkFunction::Canonical => 1.0 / kappa_double_prime_unchecked(kappa_prime_inverse(mu)?),
            LinkFunction::Logit => 1.0 / (mu * (1.0 - mu)),
            LinkFunction::Identity => 1.0,
        })
    }

    /// `(μ, θ)` for a linear predictor. The canonical link skips the
    /// numerical inversion since `θ = η`.
    pub(crate) fn mean_and_theta(self, eta: f64) -> Result<(f64, f64)> {
        let mu = self.inverse(eta)?;
        let theta = match self {
            LinkFunction::Canonical => eta,
            _ => kappa_prime_inverse(mu)?,
        };
        Ok((mu, theta))
    }

    /// `g′(μ)` given the matching `θ` and `V(μ) = κ̈(θ)`.
    pub(crate) fn derivative_at(self, mu: f64, variance: f64) -> f64 {
        match self {
            LinkFunction::Canonical => 1.0 / variance,
            LinkFunction::Logit => 1.0 / (mu * (1.0 - mu)),
            LinkFunction::Identity => 1.0,
        }
    }
}

fn check_mean(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "mean must lie strictly inside (0,1), got {mu}"
        )))
    }
}

impl fmt::Display for LinkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkFunction::Canonical => "canonical",
            LinkFunction::Logit => "logit",
            LinkFunction::Identity => "identity",
        })
    }
}

impl FromStr for LinkFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(LinkFunction::Canonical),
            "logit" => Ok(LinkFunction::Logit),
            "identity" => Ok(LinkFunction::Identity),
            other => Err(Error::domain(format!("unknown link `{other}`"))),
        }
    }
}
