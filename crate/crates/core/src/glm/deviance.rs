use serde::{Deserialize, Serialize};

use super::fit::FitResult;
use super::link::LinkFunction;
use super::model::WeightedResponse;
use crate::distribution::deviance_from_thetas;
use crate::error::{Error, Result};
use crate::numerics::chi_square_survival;
use crate::numerics::kappa::{kappa_prime_inverse, kappa_unchecked};

/// `κ̇⁻¹(yᵢ)` and `κ(κ̇⁻¹(yᵢ))` for a fixed response, reused by every
/// deviance evaluation during a fit.
pub(crate) struct SaturatedTerms {
    y: Vec<f64>,
    pub(crate) theta: Vec<f64>,
    kappa: Vec<f64>,
}

impl SaturatedTerms {
    pub(crate) fn new(y: &[f64]) -> Result<Self> {
        let theta = y
            .iter()
            .map(|&v| kappa_prime_inverse(v))
            .collect::<Result<Vec<_>>>()?;
        let kappa = theta.iter().map(|&t| kappa_unchecked(t)).collect();
        Ok(SaturatedTerms {
            y: y.to_vec(),
            theta,
            kappa,
        })
    }

    fn unit(&self, i: usize, theta_mu: f64) -> f64 {
        if theta_mu == self.theta[i] {
            return 0.0;
        }
        deviance_from_thetas(self.y[i], self.theta[i], self.kappa[i], theta_mu)
    }

    pub(crate) fn deviance(&self, w: &[f64], theta_mu: &[f64]) -> f64 {
        (0..self.y.len())
            .map(|i| w[i] * self.unit(i, theta_mu[i]))
            .sum()
    }
}

fn mean_thetas(resp: &WeightedResponse, mu: &[f64]) -> Result<Vec<f64>> {
    if mu.len() != resp.len() {
        return Err(Error::Dimension(format!(
            "{} means for {} classes",
            mu.len(),
            resp.len()
        )));
    }
    mu.iter().map(|&m| kappa_prime_inverse(m)).collect()
}

/// `D(y, μ) = Σ wᵢ d(yᵢ, μᵢ)`.
pub fn total_deviance(resp: &WeightedResponse, mu: &[f64]) -> Result<f64> {
    let theta_mu = mean_thetas(resp, mu)?;
    Ok(SaturatedTerms::new(resp.y())?.deviance(resp.w(), &theta_mu))
}

/// Deviance of the intercept-only model and its degrees of freedom `m − 1`.
///
/// With a single coefficient every class shares one mean, and the score
/// equation `Σ wᵢ (yᵢ − μ)/(V(μ) g′(μ)) = 0` gives the weighted mean for any
/// link, so no iteration is needed.
pub fn null_deviance(resp: &WeightedResponse, _link: LinkFunction) -> Result<(f64, usize)> {
    let mu_bar = resp.weighted_mean();
    let mu = vec![mu_bar; resp.len()];
    Ok((total_deviance(resp, &mu)?, resp.len() - 1))
}

/// `rᵢ = sign(yᵢ − μᵢ) √(wᵢ d(yᵢ, μᵢ))`.
pub fn deviance_residuals(resp: &WeightedResponse, mu: &[f64]) -> Result<Vec<f64>> {
    let theta_mu = mean_thetas(resp, mu)?;
    let sat = SaturatedTerms::new(resp.y())?;
    Ok((0..resp.len())
        .map(|i| {
            let r = (resp.w()[i] * sat.unit(i, theta_mu[i])).sqrt();
            if resp.y()[i] < mu[i] {
                -r
            } else {
                r
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// The χ² reference is asymptotic in the smallest class weight.
    pub min_weight: f64,
}

impl GoodnessOfFit {
    /// Whether the smallest class weight reaches `threshold`.
    pub fn is_reliable(&self, threshold: f64) -> bool {
        self.min_weight >= threshold
    }
}

/// Residual deviance against `χ²` with the residual degrees of freedom.
pub fn goodness_of_fit(fit: &FitResult) -> Result<GoodnessOfFit> {
    let statistic = fit.residual_deviance;
    let df = fit.residual_df;
    let p_value = if df == 0 {
        // saturated: the statistic is identically zero
        if statistic <= 1e-12 {
            1.0
        } else {
            0.0
        }
    } else {
        chi_square_survival(statistic.max(0.0), df as f64)?
    };
    Ok(GoodnessOfFit {
        statistic,
        df,
        p_value,
        min_weight: fit.min_weight,
    })
}

/// `θ = (g ∘ κ̇)⁻¹(xᵀβ)`.
pub fn theta_from_coefficients(
    design_row: &[f64],
    beta: &[f64],
    link: LinkFunction,
) -> Result<f64> {
    if design_row.len() != beta.len() {
        return Err(Error::Dimension(format!(
            "design row has {} entries, coefficients {}",
            design_row.len(),
            beta.len()
        )));
    }
    let eta: f64 = design_row.iter().zip(beta).map(|(x, b)| x * b).sum();
    Ok(link.mean_and_theta(eta)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::unit_deviance;
    use crate::numerics::kappa_prime;

    #[test]
    fn deviance_zero_at_saturation() {
        let resp = WeightedResponse::new(vec![0.2, 0.7], vec![1.0, 3.0]).unwrap();
        assert_eq!(total_deviance(&resp, &[0.2, 0.7]).unwrap(), 0.0);
        assert_eq!(
            deviance_residuals(&resp, &[0.2, 0.7]).unwrap(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn weight_scales_unit_deviance() {
        let resp = WeightedResponse::new(vec![0.35], vec![2.0]).unwrap();
        let d = total_deviance(&resp, &[0.6]).unwrap();
        assert!((d - 2.0 * unit_deviance(0.35, 0.6).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn residual_definition() {
        let resp = WeightedResponse::new(vec![0.2], vec![4.0]).unwrap();
        let r = deviance_residuals(&resp, &[0.5]).unwrap();
        let expect = -2.0 * unit_deviance(0.2, 0.5).unwrap().sqrt();
        assert!((r[0] - expect).abs() < 1e-14);
    }

    #[test]
    fn null_deviance_two_classes() {
        let resp = WeightedResponse::new(vec![0.2, 0.4], vec![1.0, 1.0]).unwrap();
        let (d, df) = null_deviance(&resp, LinkFunction::Canonical).unwrap();
        let expect = unit_deviance(0.2, 0.3).unwrap() + unit_deviance(0.4, 0.3).unwrap();
        assert!((d - expect).abs() < 1e-13);
        assert_eq!(df, 1);
        let single = WeightedResponse::new(vec![0.4], vec![7.0]).unwrap();
        assert_eq!(
            null_deviance(&single, LinkFunction::Logit).unwrap(),
            (0.0, 0)
        );
    }

    #[test]
    fn bad_lengths_and_boundaries() {
        let resp = WeightedResponse::new(vec![0.2, 0.4], vec![1.0, 1.0]).unwrap();
        assert!(total_deviance(&resp, &[0.3]).is_err());
        assert!(total_deviance(&resp, &[0.3, 1.0]).is_err());
        assert!(deviance_residuals(&resp, &[0.0, 0.3]).is_err());
    }

    #[test]
    fn theta_from_linear_predictor() {
        assert_eq!(
            theta_from_coefficients(&[1.0], &[1.7], LinkFunction::Canonical).unwrap(),
            1.7
        );
        assert_eq!(
            theta_from_coefficients(&[1.0, 0.0], &[0.0, 3.0], LinkFunction::Logit).unwrap(),
            0.0
        );
        let t = theta_from_coefficients(&[1.0], &[1.0], LinkFunction::Logit).unwrap();
        let mu = 1f64.exp() / (1.0 + 1f64.exp());
        assert!((kappa_prime(t).unwrap() - mu).abs() < 1e-12);
        assert!(theta_from_coefficients(&[1.0], &[1.5], LinkFunction::Identity).is_err());
        assert!(theta_from_coefficients(&[1.0, 2.0], &[1.5], LinkFunction::Identity).is_err());
    }
}
