//! Moment polynomials by recurrence and by enumeration, and their values at small N.
//!
//! cargo run --example moment_polynomials

use gue_moments::moments::{
    expectation, moment_by_enumeration, moment_nu, IndexMultiset, MomentCache,
};
use gue_moments::EnumerationCap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = MomentCache::new();
    for ks in [
        "2", "4", "1,3", "2,2", "3,3", "6", "1,1,1,1", "2,2,2", "4,3,1",
    ] {
        let ks: IndexMultiset = ks.parse()?;
        let recursed = cache.moment(&ks);
        let enumerated = moment_by_enumeration(&ks, EnumerationCap::default())?;
        assert_eq!(*recursed, enumerated);
        let values: Vec<String> = (1..=4)
            .map(|n| expectation(&ks, n, &cache).to_string())
            .collect();
        println!(
            "{:<10} {:<34} p(1,v) = {:<26} N=1..4: {}",
            ks.to_string(),
            recursed.to_string(),
            moment_nu(&ks, &cache).to_string(),
            values.join(", ")
        );
    }

    // the recurrence reaches well past what enumeration can
    let big = IndexMultiset::new([12, 10, 8, 6]);
    println!("{big}: {}", moment_nu(&big, &cache));
    println!("{} cached polynomials", cache.len());
    Ok(())
}
