//! Iteratively reweighted least squares for the unifed GLM with dispersion
//! fixed at one.
//!
//! Each iteration linearizes the link around the current means:
//!
//! ```text
//! z = η + (y − μ) g′(μ)          working response
//! ω = w / (V(μ) g′(μ)²)          working weights
//! β ← argmin Σ ωᵢ (zᵢ − xᵢβ)²
//! ```
//!
//! The weighted least-squares step is solved through a QR factorization of
//! `√ω X`. With the canonical link `ω = w V(μ)` and the fixed point satisfies
//! `Xᵀ W (y − μ) = 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::deviance::{null_deviance, SaturatedTerms};
use super::link::LinkFunction;
use super::model::{DesignMatrix, WeightedResponse};
use crate::error::{Error, Result};
use crate::numerics::kappa::kappa_double_prime_unchecked;
use crate::numerics::normal_two_sided_p;

/// Fitted means closer than this to 0 or 1 trigger step-halving.
const BOUNDARY_EPS: f64 = 1e-12;
/// A column is linearly dependent when its QR pivot falls below this
/// fraction of its own norm.
const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Bound on both the relative deviance change and the relative
    /// coefficient change between iterations.
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iter: 25,
            tolerance: 1e-8,
            max_halvings: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub link: LinkFunction,
    pub coefficient_names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub z_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub null_deviance: f64,
    pub null_df: usize,
    pub residual_deviance: f64,
    pub residual_df: usize,
    pub iterations: usize,
    pub converged: bool,
    pub fitted_means: Vec<f64>,
    pub linear_predictors: Vec<f64>,
    /// Smallest prior weight among the classes, which governs how far the
    /// χ² approximation of the residual deviance can be trusted.
    pub min_weight: f64,
}

impl FitResult {
    pub fn n_classes(&self) -> usize {
        self.fitted_means.len()
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.coefficient_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.coefficients[i])
    }
}

pub fn fit(
    design: &DesignMatrix,
    resp: &WeightedResponse,
    link: LinkFunction,
) -> Result<FitResult> {
    fit_with_options(design, resp, link, &FitOptions::default())
}

pub fn fit_with_options(
    design: &DesignMatrix,
    resp: &WeightedResponse,
    link: LinkFunction,
    opts: &FitOptions,
) -> Result<FitResult> {
    let x = design.matrix();
    let m = x.nrows();
    let p = x.ncols();
    if resp.len() != m {
        return Err(Error::Dimension(format!(
            "design has {m} rows but the response has {} classes",
            resp.len()
        )));
    }
    check_rank(design)?;

    let y = resp.y();
    let w = resp.w();
    let saturated = SaturatedTerms::new(y)?;

    // Start from the saturated means.
    let mut state = IterState {
        eta: y
            .iter()
            .map(|&yi| link.link(yi))
            .collect::<Result<Vec<_>>>()?,
        mu: y.to_vec(),
        theta: saturated.theta.clone(),
    };
    let mut beta: Option<DVector<f64>> = None;
    let mut deviance = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let (omega, z) = working_quantities(link, y, w, &state);
        let (mut next_beta, _) = weighted_least_squares(x, &omega, &z)?;

        let mut next = evaluate(x, &next_beta, link);
        let mut next_dev = next.as_ref().ok().map(|s| saturated.deviance(w, &s.theta));

        // Step-halving toward the previous coefficients when the new ones
        // leave the mean domain or increase the deviance.
        if let Some(prev) = &beta {
            let mut halvings = 0;
            while halvings < opts.max_halvings
                && match next_dev {
                    None => true,
                    Some(d) => d > deviance * (1.0 + 1e-12) + 1e-12,
                }
            {
                next_beta = (&next_beta + prev) * 0.5;
                next = evaluate(x, &next_beta, link);
                next_dev = next.as_ref().ok().map(|s| saturated.deviance(w, &s.theta));
                halvings += 1;
            }
        }
        let (next_state, next_dev) = match (next, next_dev) {
            (Ok(s), Some(d)) => (s, d),
            _ => return Err(Error::BoundaryFit),
        };

        if let Some(prev) = &beta {
            let dev_change = (next_dev - deviance).abs() / (next_dev.abs() + 0.1);
            let coef_change = next_beta
                .iter()
                .zip(prev.iter())
                .map(|(a, b)| (a - b).abs() / (a.abs() + 0.1))
                .fold(0.0, f64::max);
            if dev_change < opts.tolerance && coef_change < opts.tolerance {
                converged = true;
            }
        }
        beta = Some(next_beta);
        deviance = next_dev;
        state = next_state;
        if converged {
            break;
        }
    }

    let beta = beta.expect("at least one iteration runs");

    // Covariance (XᵀΩX)⁻¹ at the final means, φ = 1.
    let (omega, _) = working_quantities(link, y, w, &state);
    let (_, r) = weighted_least_squares(x, &omega, &vec![0.0; m])?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::SingularDesign {
            column: design.names()[p - 1].clone(),
        })?;
    let cov = &r_inv * r_inv.transpose();

    let coefficients: Vec<f64> = beta.iter().copied().collect();
    let standard_errors: Vec<f64> = (0..p).map(|j| cov[(j, j)].sqrt()).collect();
    let z_values: Vec<f64> = coefficients
        .iter()
        .zip(&standard_errors)
        .map(|(b, s)| b / s)
        .collect();
    let p_values = z_values
        .iter()
        .map(|&z| normal_two_sided_p(z))
        .collect::<Result<Vec<_>>>()?;
    let (null_dev, null_df) = null_deviance(resp, link)?;

    Ok(FitResult {
        link,
        coefficient_names: design.names().to_vec(),
        coefficients,
        standard_errors,
        z_values,
        p_values,
        null_deviance: null_dev,
        null_df,
        residual_deviance: deviance,
        residual_df: m.saturating_sub(p),
        iterations,
        converged,
        fitted_means: state.mu,
        linear_predictors: state.eta,
        min_weight: resp.min_weight(),
    })
}

struct IterState {
    eta: Vec<f64>,
    mu: Vec<f64>,
    theta: Vec<f64>,
}

fn working_quantities(
    link: LinkFunction,
    y: &[f64],
    w: &[f64],
    s: &IterState,
) -> (Vec<f64>, Vec<f64>) {
    let mut omega = Vec::with_capacity(y.len());
    let mut z = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        let v = kappa_double_prime_unchecked(s.theta[i]);
        let gp = link.derivative_at(s.mu[i], v);
        z.push(s.eta[i] + (y[i] - s.mu[i]) * gp);
        omega.push(w[i] / (v * gp * gp));
    }
    (omega, z)
}

fn evaluate(x: &DMatrix<f64>, beta: &DVector<f64>, link: LinkFunction) -> Result<IterState> {
    let eta_vec = x * beta;
    let m = eta_vec.len();
    let mut state = IterState {
        eta: Vec::with_capacity(m),
        mu: Vec::with_capacity(m),
        theta: Vec::with_capacity(m),
    };
    for &eta in eta_vec.iter() {
        let (mu, theta) = link.mean_and_theta(eta)?;
        if !(BOUNDARY_EPS..=1.0 - BOUNDARY_EPS).contains(&mu) {
            return Err(Error::BoundaryFit);
        }
        state.eta.push(eta);
        state.mu.push(mu);
        state.theta.push(theta);
    }
    Ok(state)
}

/// Solves `min Σ ωᵢ (zᵢ − xᵢβ)²` by QR of `√ω X`; also returns the `R` factor.
fn weighted_least_squares(
    x: &DMatrix<f64>,
    omega: &[f64],
    z: &[f64],
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let p = x.ncols();
    let mut a = x.clone();
    let mut b = DVector::from_column_slice(z);
    for (i, &om) in omega.iter().enumerate() {
        let s = om.sqrt();
        a.row_mut(i).scale_mut(s);
        b[i] *= s;
    }
    let qr = a.qr();
    qr.q_tr_mul(&mut b);
    let r = qr.r();
    let beta = r
        .solve_upper_triangular(&b.rows(0, p).into_owned())
        .ok_or_else(|| Error::SingularDesign {
            column: format!("#{}", p - 1),
        })?;
    Ok((beta, r))
}

fn check_rank(design: &DesignMatrix) -> Result<()> {
    let x = design.matrix();
    let (m, p) = x.shape();
    if m < p {
        return Err(Error::SingularDesign {
            column: design.names()[m].clone(),
        });
    }
    let r = x.clone().qr().r();
    for j in 0..p {
        let norm = x.column(j).norm();
        if norm == 0.0 || r[(j, j)].abs() <= RANK_TOL * norm {
            return Err(Error::SingularDesign {
                column: design.names()[j].clone(),
            });
        }
    }
    Ok(())
}
