//! Sampled GUE matrices against the exact moment polynomials.
//!
//! cargo run --release --example monte_carlo

use gue_moments::mc::cross_check_with_retry;
use gue_moments::moments::{IndexMultiset, MomentCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = MomentCache::new();
    let battery = ["2", "4", "2,2", "1,3", "6", "1,1,1,1"];
    for ks in battery {
        let ks: IndexMultiset = ks.parse()?;
        for n in [4, 8] {
            let check = cross_check_with_retry(&ks, n, 100_000, [1, 2], 4.0, &cache)?;
            let r = check.last();
            println!(
                "{:<10} N={n}  exact {:>8}  mean {:>12.3} +- {:<8.3} {}",
                ks.to_string(),
                r.exact,
                r.estimate.mean,
                r.estimate.std_error,
                if check.passed() { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
