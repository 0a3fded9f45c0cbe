//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics; each quantity is recomputed by a different
//! route (closed forms, quadrature, grid search, simulation).

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unifed::data::{Dataset, RawObservation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `log ∫₀¹ e^{θx} dx`, written with `expm1` on the side that does not
/// overflow.
pub fn kappa_oracle(theta: f64) -> f64 {
    if theta == 0.0 {
        0.0
    } else if theta > 0.0 {
        theta + (-(-theta).exp_m1()).ln() - theta.ln()
    } else {
        (-theta.exp_m1()).ln() - (-theta).ln()
    }
}

/// Mean of the unifed by quadrature of `x e^{θx − κ(θ)}`.
pub fn mean_oracle(theta: f64) -> f64 {
    let k = kappa_oracle(theta);
    adaptive_simpson(|x| x * (theta * x - k).exp(), 0.0, 1.0, 1e-14)
}

/// Root of an increasing function by plain bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `κ̇(θ) = 1/(1 − e^{−θ}) − 1/θ` with a short series at the origin.
pub fn kappa_prime_oracle(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        0.5 + theta / 12.0
    } else {
        -1.0 / (-theta).exp_m1() - 1.0 / theta
    }
}

pub fn kappa_prime_inverse_oracle(mu: f64) -> f64 {
    bisect(kappa_prime_oracle, -1e4, 1e4, mu)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Composite Simpson rule on `intervals` (even) panels.
pub fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Maximizes a concave `f` on `[lo, hi]`: coarse grid, then golden section
/// around the best grid point. Returns `(argmax, max)`.
pub fn grid_maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let n = ((hi - lo) / step).round() as usize;
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = lo + i as f64 * step;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (a, b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let x = golden_min(|x| -f(x), a, b, 1e-13);
    let v = f(x);
    if v > best.1 {
        (x, v)
    } else {
        best
    }
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `d(y, μ) = 2 [sup_θ {yθ − κ(θ)} − (yθ_μ − κ(θ_μ))]` with the supremum
/// found by maximizing over `[−200, 200]` and `θ_μ` by bisection on `κ̇`.
pub fn sup_form_deviance(y: f64, mu: f64) -> f64 {
    let (_, sup_y) = grid_maximize(|t| y * t - kappa_oracle(t), -200.0, 200.0, 0.01);
    let theta_mu = kappa_prime_inverse_oracle(mu);
    2.0 * (sup_y - (y * theta_mu - kappa_oracle(theta_mu)))
}

/// `Σ θxᵢ − nκ(θ)`.
pub fn log_likelihood_oracle(xs: &[f64], theta: f64) -> f64 {
    theta * xs.iter().sum::<f64>() - xs.len() as f64 * kappa_oracle(theta)
}

/// `Σ wᵢ [κ(ηᵢ) − yᵢηᵢ]`, the part of the canonical-link deviance that
/// depends on `β`, for `ηᵢ = β₀ + β₁ xᵢ`.
pub fn canonical_objective(y: &[f64], w: &[f64], x: &[f64], b0: f64, b1: f64) -> f64 {
    (0..y.len())
        .map(|i| {
            let eta = b0 + b1 * x[i];
            w[i] * (kappa_oracle(eta) - y[i] * eta)
        })
        .sum()
}

/// Minimizer of the canonical deviance for one slope by nested golden
/// section (the objective is convex in `β`).
pub fn brute_force_glm(y: &[f64], w: &[f64], x: &[f64]) -> (f64, f64) {
    let inner = |b1: f64| {
        let b0 = golden_min(
            |b0| canonical_objective(y, w, x, b0, b1),
            -500.0,
            500.0,
            1e-13,
        );
        (b0, canonical_objective(y, w, x, b0, b1))
    };
    let b1 = golden_min(|b1| inner(b1).1, -500.0, 500.0, 1e-13);
    (inner(b1).0, b1)
}

/// `χ²_k` draws as `−2 Σ log Uᵢ` for even `k` (a Gamma(k/2, 2) variate).
pub fn chi_square_draw_even(rng: &mut impl Rng, k: usize) -> f64 {
    assert!(k.is_multiple_of(2));
    -2.0 * (0..k / 2)
        .map(|_| (1.0 - rng.random::<f64>()).ln())
        .sum::<f64>()
}

/// Monte Carlo estimate of `P(χ²_k ≥ x)` and its standard error.
pub fn chi_square_tail_mc(x: f64, k: usize, draws: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let hits = (0..draws)
        .filter(|_| chi_square_draw_even(&mut r, k) >= x)
        .count();
    let p = hits as f64 / draws as f64;
    (p, (p * (1.0 - p) / draws as f64).sqrt())
}

/// Asymptotic Kolmogorov p-value for the statistic `D` with `n` draws.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `sup |F_n − F|` for a sample against a continuous cdf.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Random categorical dataset with responses strictly inside (0,1) whose
/// mean depends on the covariates.
pub fn synthetic_dataset(seed: u64, rows: usize, covariates: usize, unit_weights: bool) -> Dataset {
    let mut r = rng(seed);
    let levels: Vec<usize> = (0..covariates).map(|_| r.random_range(2..=4)).collect();
    let effects: Vec<Vec<f64>> = levels
        .iter()
        .map(|&k| (0..k).map(|_| r.random_range(-0.8..0.8)).collect())
        .collect();
    let names: Vec<String> = (0..covariates).map(|j| format!("c{j}")).collect();
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let picks: Vec<usize> = levels.iter().map(|&k| r.random_range(0..k)).collect();
        let eta: f64 = picks.iter().zip(&effects).map(|(&p, e)| e[p]).sum();
        let mu = 1.0 / (1.0 + (-eta).exp());
        // Beta-like draw with mean near mu, kept off the boundary.
        let u: f64 = r.random_range(0.0..1.0);
        let y = (mu + 0.45 * (u - 0.5)).clamp(0.005, 0.995);
        let weight = if unit_weights {
            1.0
        } else {
            r.random_range(0.2..3.0)
        };
        out.push(RawObservation {
            response: y,
            weight,
            levels: picks.iter().map(|p| format!("L{p}")).collect(),
        });
    }
    Dataset {
        covariate_names: names,
        rows: out,
    }
}

/// Renders a dataset as CSV with columns `y,w,c0,c1,...`.
pub fn dataset_csv(data: &Dataset) -> String {
    let mut s = String::from("y,w");
    for n in &data.covariate_names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    for row in &data.rows {
        s.push_str(&format!("{},{}", row.response, row.weight));
        for l in &row.levels {
            s.push(',');
            s.push_str(l);
        }
        s.push('\n');
    }
    s
}
