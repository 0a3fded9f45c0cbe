//! Density of the Irwin-Hall distribution (sum of `n` independent uniforms):
//!
//! ```text
//! h(y; n) = 1/(n−1)! · Σ_{k=0}^{⌊y⌋} (−1)^k C(n,k) (y − k)^{n−1},   0 ≤ y ≤ n
//! ```
//!
//! The alternating sum cancels catastrophically in double precision once `n`
//! grows (around `n = 50` the float result changes sign between consecutive
//! integers). [`irwin_hall_naive`] keeps that behaviour on purpose;
//! [`irwin_hall_exact`] evaluates the same sum over big rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_finite, Error, Result};

/// Largest `n` accepted by [`irwin_hall_exact`].
pub const DEFAULT_EXACT_CAP: usize = 200;

/// Literal double-precision evaluation of the alternating sum.
pub fn irwin_hall_naive(y: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("Irwin-Hall order n must be at least 1"));
    }
    check_finite("y", y)?;
    if y < 0.0 || y > n as f64 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(1.0);
    }
    let exponent = (n - 1) as f64;
    let row = pascal_row(n);
    let mut sum = 0.0;
    for (k, c) in row.iter().enumerate().take(y.floor() as usize + 1) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * to_f64(c) * (y - k as f64).powf(exponent);
    }
    Ok(sum / to_f64(&factorial(n - 1)))
}

pub fn irwin_hall_exact(y: &BigRational, n: usize) -> Result<BigRational> {
    irwin_hall_exact_with_cap(y, n, DEFAULT_EXACT_CAP)
}

pub fn irwin_hall_exact_with_cap(y: &BigRational, n: usize, cap: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::domain("Irwin-Hall order n must be at least 1"));
    }
    if n > cap {
        return Err(Error::Capacity {
            what: "Irwin-Hall order n",
            value: n,
            cap,
        });
    }
    let (sum, _) = exact_terms(y, n);
    Ok(sum)
}

/// `Σ|t_k| / |Σ t_k|` for the alternating sum at `(y, n)`: the factor by
/// which rounding errors in the naive evaluation are amplified. Infinite
/// where the density is zero inside the support; `None` outside it.
pub fn naive_condition_number(y: &BigRational, n: usize) -> Option<f64> {
    if n == 0 || y.is_negative() || *y > BigRational::from_integer(BigInt::from(n)) {
        return None;
    }
    let (sum, abs_sum) = exact_terms(y, n);
    if sum.is_zero() {
        return Some(f64::INFINITY);
    }
    ratio_to_f64(&(abs_sum / sum.abs()))
}

/// Exact `(Σ t_k, Σ |t_k|)`, both already divided by `(n−1)!`.
fn exact_terms(y: &BigRational, n: usize) -> (BigRational, BigRational) {
    let zero = BigRational::zero();
    if y.is_negative() || *y > BigRational::from_integer(BigInt::from(n)) {
        return (zero.clone(), zero);
    }
    if n == 1 {
        // closed support [0,1]; the sum would give 0 at y = 1
        let one = BigRational::one();
        return (one.clone(), one);
    }
    let upper = y.floor().to_integer().to_usize().unwrap_or(0).min(n);
    let row = pascal_row(n);
    let exponent = (n - 1) as i32;
    let mut sum = BigRational::zero();
    let mut abs_sum = BigRational::zero();
    for (k, c) in row.iter().enumerate().take(upper + 1) {
        let base = y - BigRational::from_integer(BigInt::from(k));
        let term = base.pow(exponent) * BigRational::from_integer(BigInt::from(c.clone()));
        abs_sum += term.abs();
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let fact = BigRational::from_integer(BigInt::from(factorial(n - 1)));
    (sum / fact.clone(), abs_sum / fact)
}

/// `C(n, 0..=n)` by Pascal's recurrence.
fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Nearest double to an exact rational, `None` if it is out of range.
pub fn ratio_to_f64(x: &BigRational) -> Option<f64> {
    x.to_f64().filter(|v| v.is_finite())
}
