//! Exact finite-N correlations of trace products approaching their large-N limits.
//!
//! cargo run --example correlation_limits

use gue_moments::asymptotics::{correlation_limit, TraceVariableSpec};
use gue_moments::moments::{finite_n_statistics, MomentCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = MomentCache::new();
    let pairs = [
        (
            "Tr X vs Tr X^3",
            TraceVariableSpec::odd_trace(0),
            TraceVariableSpec::odd_trace(1),
        ),
        (
            "Tr X^2 vs Tr X^4",
            TraceVariableSpec::even_trace(1),
            TraceVariableSpec::even_trace(2),
        ),
        (
            "Tr X Tr X^3 vs Tr X^3 Tr X^5",
            TraceVariableSpec::new(vec![], vec![0, 1]),
            TraceVariableSpec::new(vec![], vec![1, 2]),
        ),
        (
            "Tr X vs Tr X^2",
            TraceVariableSpec::odd_trace(0),
            TraceVariableSpec::even_trace(1),
        ),
    ];
    for (label, f, g) in pairs {
        let limit = correlation_limit(&f, &g)?;
        println!(
            "{label}: case {}, limit {}",
            limit.case.number(),
            limit.value
        );
        for n in [1u64, 10, 100, 1000] {
            let stats = finite_n_statistics(&f.to_multiset(), &g.to_multiset(), n, &cache);
            println!(
                "  N={n:<5} corr = {:.10}",
                stats.correlation.approx().unwrap_or(f64::NAN)
            );
        }
        println!("  limit   {:.10}", limit.approx().unwrap_or(f64::NAN));
    }
    Ok(())
}
