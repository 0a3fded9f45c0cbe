//! Scalar kernels: the unifed cumulant generator and its inverse mean map,
//! the Irwin-Hall density, and tail probabilities for inference.

pub mod irwin_hall;
pub mod kappa;
pub mod special;

pub use irwin_hall::{
    irwin_hall_exact, irwin_hall_exact_with_cap, irwin_hall_naive, naive_condition_number,
    ratio_to_f64, DEFAULT_EXACT_CAP,
};
pub use kappa::{
    kappa, kappa_double_prime, kappa_prime, kappa_prime_inverse, Theta, INVERSE_TOL, LARGE_THETA,
    SERIES_THRESHOLD,
};
pub use special::{chi_square_survival, normal_two_sided_p};
