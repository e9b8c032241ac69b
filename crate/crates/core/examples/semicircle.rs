//! Semicircle averages of polynomials, exactly and by quadrature, and large-N covariances.
//!
//! cargo run --example semicircle

use gue_moments::asymptotics::{
    covariance_limit, semicircle_moment, semicircle_quadrature, Rational,
};
use num_bigint::BigInt;

fn coeffs(cs: &[i64]) -> Vec<Rational> {
    cs.iter()
        .map(|&c| Rational::from_integer(BigInt::from(c)))
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for i in 0..=8 {
        let mut q = vec![0i64; 2 * i + 1];
        q[2 * i] = 1;
        let floats: Vec<f64> = q.iter().map(|&c| c as f64).collect();
        println!(
            "x^{:<2}  exact {:>5}  quadrature {:.10}",
            2 * i,
            semicircle_moment(&coeffs(&q)),
            semicircle_quadrature(&floats, 1e-12)?
        );
    }
    let mut x36 = vec![0; 37];
    x36[36] = 1;
    println!("x^36  exact {}", semicircle_moment(&coeffs(&x36)));

    let f = coeffs(&[0, 1, 0, 1]);
    let g = coeffs(&[1, 0, 2, 0, 1]);
    println!(
        "cov limit of x + x^3 with itself: {}",
        covariance_limit(&f, &f)
    );
    println!(
        "cov limit of 1 + 2x^2 + x^4 with itself: {}",
        covariance_limit(&g, &g)
    );
    println!("cov limit across parities: {}", covariance_limit(&f, &g));
    Ok(())
}
