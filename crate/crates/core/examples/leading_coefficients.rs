//! Leading and subleading coefficients in closed form, checked against the recurrence.
//!
//! cargo run --example leading_coefficients

use gue_moments::asymptotics::{
    a_pair, catalan, degree_formula, leading_general, mu_multi, subleading_multi,
};
use gue_moments::moments::{moment_nu, IndexMultiset, MomentCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = MomentCache::new();
    println!(
        "Catalan numbers: {:?}",
        (0..10)
            .map(catalan)
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );

    println!("A_i,j for i, j < 5:");
    for i in 0..5 {
        let row: Vec<String> = (0..5).map(|j| format!("{:>6}", a_pair(i, j))).collect();
        println!("  {}", row.join(""));
    }
    println!("mu_0,0,1,1 = {}", mu_multi(&[0, 0, 1, 1])?);

    for (evens, odds) in [
        (vec![2], vec![]),
        (vec![1, 1], vec![0, 1]),
        (vec![3], vec![2, 2]),
    ] {
        let ks = IndexMultiset::new(
            evens
                .iter()
                .map(|&i: &u64| 2 * i as u32)
                .chain(odds.iter().map(|&j: &u64| 2 * j as u32 + 1)),
        );
        let p = moment_nu(&ks, &cache);
        println!(
            "{ks}: degree {} (formula {}), leading {} (formula {})",
            p.degree_nu().unwrap(),
            degree_formula(&ks)?,
            p.leading_coeff()?,
            leading_general(&evens, &odds)?
        );
    }

    for is in [vec![3], vec![2, 2], vec![1, 2, 3]] {
        let ks = IndexMultiset::new(is.iter().map(|&i: &u64| 2 * i as u32));
        let p = moment_nu(&ks, &cache);
        let below = p.coeff_of_nu(p.degree_nu().unwrap() - 2);
        println!(
            "{ks}: subleading {below} (formula {})",
            subleading_multi(&is)
        );
    }

    let showcase = leading_general(&[5, 21], &[7, 21, 23, 31])?;
    println!("leading coefficient for evens (5,21), odds (7,21,23,31):\n  {showcase}");
    Ok(())
}
