//! Closed-form large-N data for the moment polynomials.
//!
//! Everything here is exact integer or rational arithmetic except the numeric
//! semicircle quadrature and the `f64` approximations attached to correlation
//! limits. Notation follows the usual conventions:
//!
//! * `C_n` is the Catalan number; `C_{i_1..i_k} = Π C_{i_r}` is the leading
//!   coefficient of `p_{2i_1..2i_k}`.
//! * `A_{j_1..j_2l}` is the leading coefficient of `p_{2j_1+1..2j_2l+1}`.
//! * `μ_{j_1..j_2l} = Σ_chords Π 1/(j_r + j_s + 1)`.
//! * `C_{i_1..i_k}(1)` is the coefficient two degrees below the leading one.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::moments::IndexMultiset;
use crate::numeric::{binomial, factorial, rational_to_f64};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("the exponents sum to {0}, which is odd")]
    OddTotal(u32),
    #[error("expected an even number of odd-trace indices, got {0}")]
    OddLength(usize),
    #[error(
        "leading-coefficient routes disagree: chord sum {chord_sum} vs mu product {mu_product}"
    )]
    Inconsistent {
        chord_sum: BigInt,
        mu_product: Rational,
    },
    #[error("{0}")]
    InvalidInput(String),
    #[error("quadrature tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("quadrature did not reach tolerance {tolerance} within {points} points")]
    NoConvergence { tolerance: f64, points: usize },
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / (n + 1)
}

/// `m + q`: half the exponent sum plus the number of even exponents.
pub fn degree_formula(ks: &IndexMultiset) -> Result<u32, AsymptoticsError> {
    let total = ks.total();
    if !total.is_multiple_of(2) {
        return Err(AsymptoticsError::OddTotal(total));
    }
    Ok(ks.half_total() + ks.even_count())
}

/// `Π C_{i_r}`, the leading coefficient of `p_{2i_1..2i_k}`.
pub fn leading_even(is: &[u64]) -> BigInt {
    is.iter().map(|&i| catalan(i)).product()
}

/// `A_{i,j} = (2i+1)(2j+1)/(i+j+1) · binom(2i,i) binom(2j,j)`.
pub fn a_pair(i: u64, j: u64) -> BigInt {
    let numerator =
        BigInt::from((2 * i + 1) * (2 * j + 1)) * binomial(2 * i, i) * binomial(2 * j, j);
    let (q, r) = numerator.div_rem(&BigInt::from(i + j + 1));
    debug_assert!(r.is_zero(), "A_{{{i},{j}}} is an integer");
    q
}

/// `A_{i,j} = (2j+1) Σ_{r=0}^{i} (r+1) C_r C_{i+j-r}`.
pub fn a_pair_by_sum(i: u64, j: u64) -> BigInt {
    let sum: BigInt = (0..=i)
        .map(|r| BigInt::from(r + 1) * catalan(r) * catalan(i + j - r))
        .sum();
    sum * (2 * j + 1)
}

/// Sum over perfect matchings of `js` of the product of `pair` over chords.
///
/// Uses `S(j_1, ..) = Σ_k pair(j_1, j_k) S(rest)`, memoized on the sorted remainder.
fn chord_sum<T, F>(js: &[u64], pair: &F, memo: &mut HashMap<Vec<u64>, T>) -> T
where
    T: Clone + Zero + One + std::ops::Mul<Output = T>,
    F: Fn(u64, u64) -> T,
{
    if js.is_empty() {
        return T::one();
    }
    if let Some(hit) = memo.get(js) {
        return hit.clone();
    }
    let first = js[0];
    let mut total = T::zero();
    for k in 1..js.len() {
        let mut rest: Vec<u64> = js[1..]
            .iter()
            .enumerate()
            .filter(|&(pos, _)| pos + 1 != k)
            .map(|(_, &j)| j)
            .collect();
        rest.sort_unstable();
        total = total + pair(first, js[k]) * chord_sum(&rest, pair, memo);
    }
    memo.insert(js.to_vec(), total.clone());
    total
}

fn check_even_length(js: &[u64]) -> Result<Vec<u64>, AsymptoticsError> {
    if !js.len().is_multiple_of(2) {
        return Err(AsymptoticsError::OddLength(js.len()));
    }
    let mut sorted = js.to_vec();
    sorted.sort_unstable();
    Ok(sorted)
}

/// `μ_{j_1..j_2l} = Σ_chords Π 1/(j_r + j_s + 1)`.
pub fn mu_multi(js: &[u64]) -> Result<Rational, AsymptoticsError> {
    let sorted = check_even_length(js)?;
    let pair = |a: u64, b: u64| rat(1, a + b + 1);
    Ok(chord_sum(&sorted, &pair, &mut HashMap::new()))
}

/// `A_{j_1..j_2l}`, computed as a chord sum of `A_{i,j}` and checked against
/// `μ_{j_1..j_2l} Π (2j_k+1)!/(j_k!)²`.
pub fn a_multi(js: &[u64]) -> Result<BigInt, AsymptoticsError> {
    let sorted = check_even_length(js)?;
    let chord = chord_sum(&sorted, &|a, b| a_pair(a, b), &mut HashMap::new());
    let weights: BigInt = sorted
        .iter()
        .map(|&j| {
            let f = factorial(j);
            factorial(2 * j + 1) / (&f * &f)
        })
        .product();
    let mu_product = mu_multi(&sorted)? * Rational::from_integer(weights);
    if !mu_product.is_integer() || mu_product.numer() != &chord {
        return Err(AsymptoticsError::Inconsistent {
            chord_sum: chord,
            mu_product,
        });
    }
    Ok(chord)
}

/// Leading coefficient of `p_{2i_1..2i_k, 2j_1+1..2j_2l+1}`: `C_{i..} · A_{j..}`.
pub fn leading_general(is: &[u64], js: &[u64]) -> Result<BigInt, AsymptoticsError> {
    Ok(leading_even(is) * a_multi(js)?)
}

/// `C_i(1) = binom(2i-1, 3) C_{i-2}` for `i >= 2`, zero otherwise.
pub fn subleading_single(i: u64) -> BigInt {
    if i < 2 {
        return BigInt::zero();
    }
    binomial(2 * i - 1, 3) * catalan(i - 2)
}

/// The connected two-trace part `C̃_{i,j}(1) = ij/(i+j) binom(2i,i) binom(2j,j)`.
pub fn c_tilde1(i: u64, j: u64) -> BigInt {
    if i + j == 0 {
        return BigInt::zero();
    }
    let numerator = BigInt::from(i * j) * binomial(2 * i, i) * binomial(2 * j, j);
    let (q, r) = numerator.div_rem(&BigInt::from(i + j));
    debug_assert!(r.is_zero());
    q
}

/// `C_{i_1..i_k}(1)` assembled from one- and two-trace pieces.
pub fn subleading_multi(is: &[u64]) -> BigInt {
    let cats: Vec<BigInt> = is.iter().map(|&i| catalan(i)).collect();
    let product_except = |skip: &[usize]| -> BigInt {
        cats.iter()
            .enumerate()
            .filter(|(pos, _)| !skip.contains(pos))
            .map(|(_, c)| c.clone())
            .product()
    };
    let mut total = BigInt::zero();
    for (r, &ir) in is.iter().enumerate() {
        total += subleading_single(ir) * product_except(&[r]);
    }
    for r in 0..is.len() {
        for s in r + 1..is.len() {
            total += c_tilde1(is[r], is[s]) * product_except(&[r, s]);
        }
    }
    total
}

/// `Tr X^{2i_1} ⋯ Tr X^{2i_k} · Tr X^{2j_1+1} ⋯ Tr X^{2j_l+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TraceVariableSpec {
    evens: Vec<u64>,
    odds: Vec<u64>,
}

impl TraceVariableSpec {
    pub fn new(mut evens: Vec<u64>, mut odds: Vec<u64>) -> Self {
        evens.sort_unstable();
        odds.sort_unstable();
        TraceVariableSpec { evens, odds }
    }

    /// `Tr X^{2i+1}`.
    pub fn odd_trace(j: u64) -> Self {
        Self::new(vec![], vec![j])
    }

    /// `Tr X^{2i}`.
    pub fn even_trace(i: u64) -> Self {
        Self::new(vec![i], vec![])
    }

    pub fn evens(&self) -> &[u64] {
        &self.evens
    }

    pub fn odds(&self) -> &[u64] {
        &self.odds
    }

    pub fn to_multiset(&self) -> IndexMultiset {
        IndexMultiset::new(
            self.evens
                .iter()
                .map(|&i| 2 * i as u32)
                .chain(self.odds.iter().map(|&j| 2 * j as u32 + 1)),
        )
    }

    /// True when the variable is a power of `N`, hence has zero variance.
    pub fn is_constant(&self) -> bool {
        self.odds.is_empty() && self.evens.iter().all(|&i| i == 0)
    }
}

/// `coeff · sqrt(radicand)` with an integer, square-free-reduced radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRational {
    coeff: Rational,
    radicand: BigInt,
}

const SQUARE_SEARCH_LIMIT: u64 = 10_000;

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational {
            coeff: Rational::zero(),
            radicand: BigInt::one(),
        }
    }

    /// `coeff · sqrt(radicand)` for a nonnegative rational radicand.
    pub fn new(coeff: Rational, radicand: Rational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if coeff.is_zero() || radicand.is_zero() {
            return Self::zero();
        }
        // sqrt(a/b) = sqrt(ab)/b
        let mut coeff = coeff / Rational::from_integer(radicand.denom().clone());
        let mut rad = radicand.numer() * radicand.denom();
        let root = rad.sqrt();
        if &root * &root == rad {
            return SqrtRational {
                coeff: coeff * Rational::from_integer(root),
                radicand: BigInt::one(),
            };
        }
        for p in 2..SQUARE_SEARCH_LIMIT {
            let sq = BigInt::from(p * p);
            if sq > rad {
                break;
            }
            while (&rad % &sq).is_zero() {
                rad /= &sq;
                coeff *= Rational::from_integer(BigInt::from(p));
            }
        }
        SqrtRational {
            coeff,
            radicand: rad,
        }
    }

    pub fn rational(r: Rational) -> Self {
        Self::new(r, Rational::one())
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// `sign(x) · x²`, exact; equal values have equal signed squares.
    pub fn signed_square(&self) -> Rational {
        let sq = &self.coeff * &self.coeff * Rational::from_integer(self.radicand.clone());
        if self.coeff.is_negative() {
            -sq
        } else {
            sq
        }
    }

    pub fn approx(&self) -> f64 {
        rational_to_f64(&self.coeff) * self.radicand.to_f64().expect("finite radicand").sqrt()
    }
}

impl fmt::Display for SqrtRational {
    /// `sqrt(3)/2`, `2*sqrt(2)/3`, `-1/4`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.coeff.is_negative() {
            write!(f, "-")?;
        }
        let numer = self.coeff.numer().abs();
        let denom = self.coeff.denom();
        if self.radicand.is_one() {
            write!(f, "{numer}")?;
        } else if numer.is_one() {
            write!(f, "sqrt({})", self.radicand)?;
        } else {
            write!(f, "{numer}*sqrt({})", self.radicand)?;
        }
        if !denom.is_one() {
            write!(f, "/{denom}")?;
        }
        Ok(())
    }
}

/// Which branch of the large-N correlation theorem applies, by the parities of
/// the odd-trace counts `l` and `l'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitCase {
    /// `l` and `l'` have opposite parities; the correlation is zero at every N.
    OppositeParity,
    /// Both odd.
    BothOdd,
    /// Both even and positive.
    BothEvenPositive,
    /// One side even and positive, the other without odd traces.
    EvenAgainstNone,
    /// Neither side has odd traces.
    NoOddTraces,
}

impl LimitCase {
    pub fn number(self) -> u8 {
        match self {
            LimitCase::OppositeParity => 1,
            LimitCase::BothOdd => 2,
            LimitCase::BothEvenPositive => 3,
            LimitCase::EvenAgainstNone => 4,
            LimitCase::NoOddTraces => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitValue {
    Exact(SqrtRational),
    /// A variance vanishes identically.
    Undefined,
}

impl fmt::Display for LimitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitValue::Exact(v) => write!(f, "{v}"),
            LimitValue::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationLimit {
    pub case: LimitCase,
    pub value: LimitValue,
}

impl CorrelationLimit {
    pub fn approx(&self) -> Option<f64> {
        match &self.value {
            LimitValue::Exact(v) => Some(v.approx()),
            LimitValue::Undefined => None,
        }
    }
}

/// `num / sqrt(den_f · den_g)`, or undefined when a denominator vanishes.
fn ratio_over_root(num: Rational, den_f: Rational, den_g: Rational) -> LimitValue {
    let den = den_f * den_g;
    if den.is_zero() {
        return LimitValue::Undefined;
    }
    LimitValue::Exact(SqrtRational::new(num, den.recip()))
}

fn concat(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().chain(b).copied().collect()
}

/// `Σ_{r,s} i_r i'_s (i_r+1)(i'_s+1)/(i_r+i'_s)` over positive indices.
fn even_pair_sum(is: &[u64], js: &[u64]) -> Rational {
    let mut total = Rational::zero();
    for &i in is {
        for &j in js {
            total += rat(i * j * (i + 1) * (j + 1), i + j);
        }
    }
    total
}

/// Large-N limit of `corr(f_N, g_N)`.
pub fn correlation_limit(
    f: &TraceVariableSpec,
    g: &TraceVariableSpec,
) -> Result<CorrelationLimit, AsymptoticsError> {
    let (l, l_prime) = (f.odds.len(), g.odds.len());
    let case = match (l % 2, l_prime % 2) {
        (a, b) if a != b => LimitCase::OppositeParity,
        (1, 1) => LimitCase::BothOdd,
        _ if l > 0 && l_prime > 0 => LimitCase::BothEvenPositive,
        _ if l > 0 || l_prime > 0 => LimitCase::EvenAgainstNone,
        _ => LimitCase::NoOddTraces,
    };
    let undefined = CorrelationLimit {
        case,
        value: LimitValue::Undefined,
    };
    let value = match case {
        LimitCase::OppositeParity => {
            if f.is_constant() || g.is_constant() {
                return Ok(undefined);
            }
            LimitValue::Exact(SqrtRational::zero())
        }
        LimitCase::BothOdd => {
            let (j, jp) = (&f.odds, &g.odds);
            ratio_over_root(
                mu_multi(&concat(j, jp))?,
                mu_multi(&concat(j, j))?,
                mu_multi(&concat(jp, jp))?,
            )
        }
        LimitCase::BothEvenPositive => {
            let (j, jp) = (&f.odds, &g.odds);
            let (mu_j, mu_jp) = (mu_multi(j)?, mu_multi(jp)?);
            ratio_over_root(
                mu_multi(&concat(j, jp))? - &mu_j * &mu_jp,
                mu_multi(&concat(j, j))? - &mu_j * &mu_j,
                mu_multi(&concat(jp, jp))? - &mu_jp * &mu_jp,
            )
        }
        LimitCase::EvenAgainstNone => {
            let none = if l == 0 { f } else { g };
            if none.is_constant() {
                return Err(AsymptoticsError::InvalidInput(
                    "the variable without odd traces needs a positive even index".into(),
                ));
            }
            LimitValue::Exact(SqrtRational::zero())
        }
        LimitCase::NoOddTraces => {
            let positive = |s: &TraceVariableSpec| -> Vec<u64> {
                s.evens.iter().copied().filter(|&i| i > 0).collect()
            };
            let (is, is_prime) = (positive(f), positive(g));
            if is.is_empty() || is_prime.is_empty() {
                return Ok(undefined);
            }
            ratio_over_root(
                even_pair_sum(&is, &is_prime),
                even_pair_sum(&is, &is),
                even_pair_sum(&is_prime, &is_prime),
            )
        }
    };
    Ok(CorrelationLimit { case, value })
}

/// `lim cov(Tr f(X/√N), Tr g(X/√N))` for polynomials given by ascending coefficients.
pub fn covariance_limit(f: &[Rational], g: &[Rational]) -> Rational {
    // f^{(r)}(0) = r! [x^r] f
    let derivative = |p: &[Rational], r: usize| -> Rational {
        p.get(r)
            .map(|c| c * Rational::from_integer(factorial(r as u64)))
            .unwrap_or_else(Rational::zero)
    };
    let fact = |n: u64| Rational::from_integer(factorial(n));
    let mut total = Rational::zero();
    for i in 1..=f.len() as u64 / 2 {
        for j in 1..=g.len() as u64 / 2 {
            let num = derivative(f, 2 * i as usize) * derivative(g, 2 * j as usize);
            if num.is_zero() {
                continue;
            }
            let den = rat(i + j, 1) * fact(i) * fact(i - 1) * fact(j) * fact(j - 1);
            total += num / den;
        }
    }
    for i in 0..f.len() as u64 / 2 + 1 {
        for j in 0..g.len() as u64 / 2 + 1 {
            let num = derivative(f, 2 * i as usize + 1) * derivative(g, 2 * j as usize + 1);
            if num.is_zero() {
                continue;
            }
            let den = rat(i + j + 1, 1) * fact(i) * fact(i) * fact(j) * fact(j);
            total += num / den;
        }
    }
    total
}

/// `(1/2π) ∫_{-2}^{2} q(x) sqrt(4 - x²) dx`: only even monomials contribute, `x^{2i} -> C_i`.
pub fn semicircle_moment(q: &[Rational]) -> Rational {
    q.iter()
        .enumerate()
        .filter(|(power, _)| power % 2 == 0)
        .map(|(power, c)| c * Rational::from_integer(catalan(power as u64 / 2)))
        .sum()
}

const MAX_QUADRATURE_POINTS: usize = 1 << 20;

/// Numerical semicircle integral of `q` (ascending `f64` coefficients).
///
/// With `x = 2 sin θ` the integral becomes `(1/π) ∫_{-π}^{π} q(2 sin θ) cos²θ dθ`,
/// a smooth periodic integrand. The trapezoid rule on it is refined by doubling
/// until two successive refinements agree with the previous estimate to `tolerance`.
pub fn semicircle_quadrature(q: &[f64], tolerance: f64) -> Result<f64, AsymptoticsError> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(AsymptoticsError::InvalidTolerance(tolerance));
    }
    let horner = |x: f64| q.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let trapezoid = |points: usize| -> f64 {
        let h = 2.0 * std::f64::consts::PI / points as f64;
        let sum: f64 = (0..points)
            .map(|k| {
                let theta = -std::f64::consts::PI + k as f64 * h;
                let cos = theta.cos();
                horner(2.0 * theta.sin()) * cos * cos
            })
            .sum();
        2.0 * sum / points as f64
    };
    let mut points = 8;
    let mut previous = trapezoid(points);
    let mut agreements = 0;
    while points < MAX_QUADRATURE_POINTS {
        points *= 2;
        let current = trapezoid(points);
        if (current - previous).abs() <= tolerance {
            agreements += 1;
            if agreements == 2 {
                return Ok(current);
            }
        } else {
            agreements = 0;
        }
        previous = current;
    }
    Err(AsymptoticsError::NoConvergence { tolerance, points })
}
