//! The Irwin-Hall density evaluated in floating point breaks down for
//! moderate n; exact rational arithmetic does not.
//!
//! ```text
//! cargo run --example irwin_hall_overflow
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use unifed::numerics::{irwin_hall_exact, irwin_hall_naive, naive_condition_number, ratio_to_f64};

fn main() -> unifed::Result<()> {
    println!(
        "{:>4} {:>4} {:>16} {:>16} {:>12}",
        "y", "n", "naive f64", "exact", "cancellation"
    );
    for (y, n) in [(35, 50), (36, 50), (37, 50), (38, 50), (5, 10), (12, 15)] {
        let exact_y = BigRational::from_integer(BigInt::from(y));
        let naive = irwin_hall_naive(y as f64, n)?;
        let exact = ratio_to_f64(&irwin_hall_exact(&exact_y, n)?).unwrap_or(f64::NAN);
        let cond = naive_condition_number(&exact_y, n).unwrap_or(f64::INFINITY);
        println!("{y:>4} {n:>4} {naive:>16.7} {exact:>16.6e} {cond:>12.1e}");
    }
    Ok(())
}
