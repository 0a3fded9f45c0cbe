//! The unifed cumulant generator `κ(θ) = log((e^θ − 1)/θ)`, its first two
//! derivatives and the inverse of the mean map `κ̇`.
//!
//! Near the removable singularity at zero the closed forms are replaced by
//! their Bernoulli-number expansions; for large `|θ|` everything is evaluated
//! in log space so that `e^θ` never overflows.

use crate::error::{check_finite, Error, Result};

/// Below this `|θ|` the truncated Taylor series are used.
pub const SERIES_THRESHOLD: f64 = 1e-2;
/// Above this `|θ|` the cumulant generator switches to its log-space form.
pub const LARGE_THETA: f64 = 35.0;

/// Absolute tolerance on `|κ̇(θ) − μ|` guaranteed by [`kappa_prime_inverse`].
pub const INVERSE_TOL: f64 = 1e-12;
const INVERSE_MAX_ITER: usize = 100;

/// A finite canonical parameter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        check_finite("theta", value)?;
        Ok(Theta(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Theta {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Theta::new(value)
    }
}

impl From<Theta> for f64 {
    fn from(t: Theta) -> f64 {
        t.0
    }
}

pub fn kappa(theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    Ok(kappa_unchecked(theta))
}

pub fn kappa_prime(theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    Ok(kappa_prime_unchecked(theta))
}

pub fn kappa_double_prime(theta: f64) -> Result<f64> {
    check_finite("theta", theta)?;
    Ok(kappa_double_prime_unchecked(theta))
}

pub(crate) fn kappa_unchecked(t: f64) -> f64 {
    let a = t.abs();
    if a < SERIES_THRESHOLD {
        let t2 = t * t;
        t / 2.0 + t2 / 24.0 - t2 * t2 / 2880.0 + t2 * t2 * t2 / 181_440.0
    } else if t > LARGE_THETA {
        t - t.ln() + (-(-t).exp()).ln_1p()
    } else if t < -LARGE_THETA {
        // κ(θ) = κ(−θ) + θ
        kappa_unchecked(-t) + t
    } else {
        (t.exp_m1() / t).ln()
    }
}

pub(crate) fn kappa_prime_unchecked(t: f64) -> f64 {
    if t.abs() < SERIES_THRESHOLD {
        let t2 = t * t;
        0.5 + t / 12.0 - t * t2 / 720.0 + t * t2 * t2 / 30_240.0
    } else {
        // 1/(1 − e^{−θ}) − 1/θ, valid for either sign of θ.
        -1.0 / (-t).exp_m1() - 1.0 / t
    }
}

pub(crate) fn kappa_double_prime_unchecked(t: f64) -> f64 {
    let a = t.abs();
    if a < SERIES_THRESHOLD {
        let t2 = t * t;
        1.0 / 12.0 - t2 / 240.0 + t2 * t2 / 6048.0
    } else if a < 2.0 {
        // 1/θ² − 1/(4 sinh²(θ/2)) = (sinh s − s)(sinh s + s) / (θ² sinh² s), s = |θ|/2
        let s = a / 2.0;
        let sh = s.sinh();
        (sinh_minus_arg(s) * (sh + s)) / (t * t * sh * sh)
    } else {
        let e = (-a).exp();
        let denom = 1.0 - e;
        1.0 / (t * t) - e / (denom * denom)
    }
}

/// `sinh(s) − s` for `0 ≤ s < 1` by its Taylor series.
fn sinh_minus_arg(s: f64) -> f64 {
    let s2 = s * s;
    let mut term = s * s2 / 6.0;
    let mut sum = term;
    let mut k = 3.0;
    while term > sum * 1e-18 {
        term *= s2 / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 2.0;
    }
    sum
}

/// Inverse of the mean map: the unique `θ` with `κ̇(θ) = μ`.
///
/// Bracketed Newton iteration. The bracket starts at `12(μ − 1/2)` and is
/// doubled outward until it contains the root; Newton steps that leave the
/// bracket are replaced by bisection.
pub fn kappa_prime_inverse(mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= 0.0 || mu >= 1.0 {
        return Err(Error::domain(format!(
            "mean must lie strictly inside (0,1), got {mu}"
        )));
    }
    if mu == 0.5 {
        return Ok(0.0);
    }

    let f = |t: f64| kappa_prime_unchecked(t) - mu;
    let theta0 = 12.0 * (mu - 0.5);
    let (mut lo, mut hi) = bracket(&f, theta0)?;

    // The absolute tolerance is loose for means near 0, where κ̇ ≈ −1/θ; the
    // relative target keeps the inverse accurate there too.
    let target = INVERSE_TOL * mu.min(1.0 - mu).min(1.0);
    let mut theta = theta0.clamp(lo, hi);
    let mut best = (f64::INFINITY, theta);

    for _ in 0..INVERSE_MAX_ITER {
        let r = f(theta);
        if r.abs() < best.0 {
            best = (r.abs(), theta);
        }
        if r.abs() <= target {
            // One more Newton step turns the residual bound into full
            // precision in θ.
            let polished = theta - r / kappa_double_prime_unchecked(theta);
            return Ok(if polished.is_finite() && f(polished).abs() <= r.abs() {
                polished
            } else {
                theta
            });
        }
        if r < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }

        let slope = kappa_double_prime_unchecked(theta);
        let newton = theta - r / slope;
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            lo + (hi - lo) / 2.0
        };
        if next == theta || hi - lo <= 4.0 * f64::EPSILON * theta.abs().max(1.0) {
            // Bracket collapsed to floating-point resolution.
            break;
        }
        theta = next;
    }

    let r = f(theta);
    if r.abs() < best.0 {
        best = (r.abs(), theta);
    }
    if best.0 <= INVERSE_TOL {
        Ok(best.1)
    } else {
        Err(Error::NoConvergence(format!(
            "kappa_prime_inverse({mu}): residual {} after {INVERSE_MAX_ITER} iterations",
            best.0
        )))
    }
}

fn bracket(f: &impl Fn(f64) -> f64, theta0: f64) -> Result<(f64, f64)> {
    let mut step = theta0.abs().max(1.0);
    if f(theta0) < 0.0 {
        let lo = theta0;
        let mut hi = theta0 + step;
        while f(hi) < 0.0 {
            step *= 2.0;
            hi = theta0 + step;
            if !hi.is_finite() {
                return Err(Error::NoConvergence("could not bracket the root".into()));
            }
        }
        Ok((lo, hi))
    } else {
        let hi = theta0;
        let mut lo = theta0 - step;
        while f(lo) > 0.0 {
            step *= 2.0;
            lo = theta0 - step;
            if !lo.is_finite() {
                return Err(Error::NoConvergence("could not bracket the root".into()));
            }
        }
        Ok((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(kappa(0.0).unwrap(), 0.0);
        assert_eq!(kappa_prime(0.0).unwrap(), 0.5);
        assert!(close(kappa_double_prime(0.0).unwrap(), 1.0 / 12.0, 1e-15));
    }

    #[test]
    fn kappa_at_plus_minus_one() {
        // log(e − 1) and log(1 − e⁻¹)
        assert!(close(kappa(1.0).unwrap(), 0.541324854612918, 1e-14));
        assert!(close(kappa(-1.0).unwrap(), -0.458675145387082, 1e-14));
        for t in [-50.0, -3.0, -0.5, 0.005, 0.7, 12.0, 40.0, 400.0] {
            let lhs = kappa(-t).unwrap();
            let rhs = kappa(t).unwrap() - t;
            assert!(close(lhs, rhs, 1e-12 * t.abs().max(1.0)), "t={t}");
        }
    }

    #[test]
    fn non_finite_is_rejected() {
        for x in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(matches!(kappa(x), Err(Error::Domain(_))));
            assert!(matches!(kappa_prime(x), Err(Error::Domain(_))));
            assert!(matches!(kappa_double_prime(x), Err(Error::Domain(_))));
        }
        assert!(Theta::new(f64::NAN).is_err());
    }

    #[test]
    fn mean_symmetry_and_range() {
        for t in [1e-4, 0.3, 2.0, 7.5, 40.0, 800.0, 1e6] {
            let a = kappa_prime(t).unwrap();
            let b = kappa_prime(-t).unwrap();
            assert!(close(a + b, 1.0, 1e-14), "t={t}");
            assert!(a > 0.5 && a < 1.0);
        }
    }

    #[test]
    fn variance_symmetry() {
        for t in [1e-3, 0.5, 1.9, 2.1, 9.0, 100.0] {
            let a = kappa_double_prime(t).unwrap();
            let b = kappa_double_prime(-t).unwrap();
            assert!(close(a, b, 1e-15 * a.max(1.0)), "t={t}");
            assert!(a > 0.0);
        }
    }

    #[test]
    fn variance_matches_finite_difference() {
        let h = 1e-5;
        for t in [-10.0, -1.0, 0.5, 1.0, 3.0, 10.0] {
            let fd = (kappa_prime(t + h).unwrap() - kappa_prime(t - h).unwrap()) / (2.0 * h);
            assert!(close(kappa_double_prime(t).unwrap(), fd, 1e-6), "t={t}");
        }
    }

    #[test]
    fn branches_agree_at_series_threshold() {
        // Evaluate the closed forms just inside the series region and the
        // series just outside it.
        for sign in [-1.0, 1.0] {
            for off in [-1e-3, 1e-3] {
                let t: f64 = sign * (SERIES_THRESHOLD + off);
                let t2 = t * t;
                let series_k = t / 2.0 + t2 / 24.0 - t2 * t2 / 2880.0 + t2 * t2 * t2 / 181_440.0;
                let series_kp = 0.5 + t / 12.0 - t * t2 / 720.0 + t * t2 * t2 / 30_240.0;
                let series_kpp = 1.0 / 12.0 - t2 / 240.0 + t2 * t2 / 6048.0;
                let closed_k = (t.exp_m1() / t).ln();
                let closed_kp = -1.0 / (-t).exp_m1() - 1.0 / t;
                let s = t.abs() / 2.0;
                let sh = s.sinh();
                let closed_kpp = sinh_minus_arg(s) * (sh + s) / (t2 * sh * sh);
                let rel = |a: f64, b: f64| ((a - b) / b).abs();
                assert!(rel(series_k, closed_k) < 1e-12, "kappa at {t}");
                assert!(rel(series_kp, closed_kp) < 1e-12, "kappa' at {t}");
                assert!(rel(series_kpp, closed_kpp) < 1e-12, "kappa'' at {t}");
            }
        }
    }

    #[test]
    fn large_theta_is_finite() {
        for t in [700.0, 710.0, 1e5, -1e5] {
            assert!(kappa(t).unwrap().is_finite());
            assert!(kappa_prime(t).unwrap().is_finite());
            assert!(kappa_double_prime(t).unwrap() > 0.0);
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(kappa_prime_inverse(0.5).unwrap(), 0.0);
        let mu = kappa_prime(2.7).unwrap();
        assert!(close(kappa_prime_inverse(mu).unwrap(), 2.7, 1e-8));
        let t = kappa_prime_inverse(0.999).unwrap();
        assert!(t.is_finite());
        assert!(close(kappa_prime(t).unwrap(), 0.999, 1e-12));
    }

    #[test]
    fn inverse_matches_bisection_oracle() {
        // Plain bisection on a wide bracket, independent of the Newton path.
        let bisect = |mu: f64| {
            let (mut lo, mut hi) = (-1e4, 1e4);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if kappa_prime_unchecked(mid) < mu {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        for mu in [0.001, 0.05, 0.3, 0.62, 0.75, 0.999] {
            let a = kappa_prime_inverse(mu).unwrap();
            let b = bisect(mu);
            assert!(close(a, b, 1e-8 * b.abs().max(1.0)), "mu={mu}: {a} vs {b}");
        }
    }

    #[test]
    fn inverse_rejects_boundary() {
        for mu in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(kappa_prime_inverse(mu), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn inverse_extreme_means() {
        for mu in [1e-300, 1e-12, 1.0 - 1e-15, 0.9999999999999999] {
            let t = kappa_prime_inverse(mu).unwrap();
            assert!(
                (kappa_prime(t).unwrap() - mu).abs() <= INVERSE_TOL,
                "mu={mu}"
            );
        }
    }
}
