//! The unifed distribution: the exponential dispersion family generated by
//! the uniform distribution on (0,1).
//!
//! With unit dispersion the density is `f(x; θ) = θ e^{xθ} / (e^θ − 1)` on
//! (0,1), the uniform density at `θ = 0`. Mean and variance are `κ̇(θ)` and
//! `κ̈(θ)`; a member with dispersion `φ = 1/n` is the law of the average of
//! `n` independent unit-dispersion draws.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::numerics::irwin_hall::irwin_hall_exact_with_cap;
use crate::numerics::kappa::{
    kappa_double_prime_unchecked, kappa_prime_inverse, kappa_prime_unchecked, kappa_unchecked,
};
use crate::numerics::{Theta, DEFAULT_EXACT_CAP};

/// Below this `|θ|` the CDF and quantile use their Taylor expansions.
const CDF_SERIES_THRESHOLD: f64 = 1e-5;

/// Canonical parameter together with the inverse dispersion `n` (`φ = 1/n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnifedParams {
    theta: Theta,
    n: u32,
}

impl UnifedParams {
    pub fn new(theta: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(
                "inverse dispersion n must be a positive integer",
            ));
        }
        Ok(UnifedParams {
            theta: Theta::new(theta)?,
            n,
        })
    }

    /// Unit dispersion.
    pub fn with_theta(theta: f64) -> Result<Self> {
        Self::new(theta, 1)
    }

    pub fn theta(&self) -> f64 {
        self.theta.value()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dispersion(&self) -> f64 {
        1.0 / self.n as f64
    }
}

/// A mean in the mean domain (0,1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MeanParam(f64);

impl MeanParam {
    pub fn new(mu: f64) -> Result<Self> {
        check_open_unit("mean", mu)?;
        Ok(MeanParam(mu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The canonical parameter with this mean.
    pub fn theta(self) -> Result<f64> {
        kappa_prime_inverse(self.0)
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must lie strictly inside (0,1), got {v}"
        )))
    }
}

/// Density with unit dispersion, zero outside (0,1).
pub fn density(x: f64, theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    if !(x > 0.0 && x < 1.0) {
        return Ok(0.0);
    }
    Ok(log_density_unchecked(x, theta).exp())
}

pub(crate) fn log_density_unchecked(x: f64, theta: f64) -> f64 {
    x * theta - kappa_unchecked(theta)
}

/// Density with dispersion `1/n` at a rational point, using the exact
/// Irwin-Hall kernel: `n · h(n x; n) · exp(n (xθ − κ(θ)))`.
pub fn density_general(x: &BigRational, params: &UnifedParams) -> Result<f64> {
    density_general_with_cap(x, params, DEFAULT_EXACT_CAP)
}

pub fn density_general_with_cap(x: &BigRational, params: &UnifedParams, cap: usize) -> Result<f64> {
    let n = params.n as usize;
    let y = x * BigRational::from_integer(BigInt::from(n));
    let h = irwin_hall_exact_with_cap(&y, n, cap)?;
    if !h.is_positive() {
        return Ok(0.0);
    }
    let xf = x
        .to_f64()
        .ok_or_else(|| Error::domain("evaluation point is not representable"))?;
    let nf = n as f64;
    let log_f = rational_ln(&h) + nf.ln() + nf * log_density_unchecked(xf, params.theta());
    Ok(log_f.exp())
}

/// Natural log of a positive rational without converting it to `f64` first.
fn rational_ln(r: &BigRational) -> f64 {
    big_ln(r.numer()) - big_ln(r.denom())
}

fn big_ln(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Distribution function with unit dispersion. `x` is clamped to `[0,1]`.
pub fn cdf(x: f64, theta: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_finite("theta", theta)?;
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let p = if theta.abs() < CDF_SERIES_THRESHOLD {
        let xm1 = x - 1.0;
        x + theta * x * xm1 / 2.0 + theta * theta * x * xm1 * (2.0 * x - 1.0) / 12.0
    } else if theta > 0.0 {
        // e^{θ(x−1)} (1 − e^{−θx}) / (1 − e^{−θ})
        (theta * (x - 1.0)).exp() * (-theta * x).exp_m1() / (-theta).exp_m1()
    } else {
        (theta * x).exp_m1() / theta.exp_m1()
    };
    Ok(p.clamp(0.0, 1.0))
}

pub fn quantile(p: f64, theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "probability must lie in [0,1], got {p}"
        )));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(p);
    }
    let q = if theta.abs() < CDF_SERIES_THRESHOLD {
        let pm1 = p - 1.0;
        p - theta * p * pm1 / 2.0 + theta * theta * p * pm1 * (2.0 * p - 1.0) / 6.0
    } else if theta > 30.0 {
        1.0 + (p + (1.0 - p) * (-theta).exp()).ln() / theta
    } else {
        (p * theta.exp_m1()).ln_1p() / theta
    };
    Ok(q.clamp(0.0, 1.0))
}

/// `count` draws by inverse transform on a ChaCha8 stream seeded with `seed`.
pub fn sample(count: usize, theta: f64, seed: u64) -> Result<Vec<f64>> {
    check_finite("theta", theta)?;
    if count == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: f64 = rng.random();
        if u == 0.0 {
            continue;
        }
        let x = quantile(u, theta)?;
        if x > 0.0 && x < 1.0 {
            out.push(x);
        }
    }
    Ok(out)
}

/// `(κ̇(θ), κ̈(θ)/n)`.
pub fn mean_variance(params: &UnifedParams) -> (f64, f64) {
    let t = params.theta();
    (
        kappa_prime_unchecked(t),
        kappa_double_prime_unchecked(t) / params.n as f64,
    )
}

/// `V(μ) = κ̈(κ̇⁻¹(μ))`.
pub fn variance_function(mu: f64) -> Result<f64> {
    check_open_unit("mean", mu)?;
    Ok(kappa_double_prime_unchecked(kappa_prime_inverse(mu)?))
}

/// `d(y, μ) = 2[y(θ_y − θ_μ) − κ(θ_y) + κ(θ_μ)]` with `θ_· = κ̇⁻¹(·)`.
pub fn unit_deviance(y: f64, mu: f64) -> Result<f64> {
    check_open_unit("response", y)?;
    check_open_unit("mean", mu)?;
    if y == mu {
        return Ok(0.0);
    }
    let ty = kappa_prime_inverse(y)?;
    let tm = kappa_prime_inverse(mu)?;
    Ok(deviance_from_thetas(y, ty, kappa_unchecked(ty), tm))
}

/// Unit deviance given the saturated `θ_y` and `κ(θ_y)`, which callers fitting
/// many means against one response can compute once.
pub(crate) fn deviance_from_thetas(y: f64, theta_y: f64, kappa_y: f64, theta_mu: f64) -> f64 {
    let d = 2.0 * (y * (theta_y - theta_mu) - kappa_y + kappa_unchecked(theta_mu));
    d.max(0.0)
}

fn check_sample(sample: &[f64]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::Empty("sample has no observations".into()));
    }
    for (i, &x) in sample.iter().enumerate() {
        if !(x.is_finite() && x > 0.0 && x < 1.0) {
            return Err(Error::domain(format!(
                "observation {i} = {x} is not strictly inside (0,1)"
            )));
        }
    }
    Ok(())
}

/// Maximum likelihood estimate `κ̇⁻¹(x̄)` of `θ` from an i.i.d. sample.
pub fn mle_theta(sample: &[f64]) -> Result<f64> {
    check_sample(sample)?;
    let mean = sample.iter().sum::<f64>() / sample.len() as f64;
    kappa_prime_inverse(mean)
}

/// `Σ (x_i θ − κ(θ))`.
pub fn log_likelihood(sample: &[f64], theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    if sample.is_empty() {
        return Ok(0.0);
    }
    check_sample(sample)?;
    let sum: f64 = sample.iter().sum();
    if theta.is_zero() {
        return Ok(0.0);
    }
    Ok(theta * sum - sample.len() as f64 * kappa_unchecked(theta))
}
