//! Sparse polynomials in the genus variable `g` (γ) and boundary variable `v` (ν)
//! with arbitrary-precision integer coefficients.
//!
//! Text form lists terms by descending `v` exponent, then ascending `g` exponent:
//! `2*v^3 + g*v`. The JSON form is a list of `{"g": .., "v": .., "c": "<decimal>"}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no leading coefficient")]
    ZeroPolynomial,
}

/// `(g exponent, v exponent)`.
pub type Monomial = (u32, u32);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    /// `c · g^g_exp · v^v_exp`.
    pub fn monomial(g_exp: u32, v_exp: u32, c: impl Into<BigInt>) -> Self {
        Self::from_terms([((g_exp, v_exp), c.into())])
    }

    /// Sums the given terms, merging repeated monomials and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, g_exp: u32, v_exp: u32) -> BigInt {
        self.terms.get(&(g_exp, v_exp)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePolynomial {
            terms: self.terms.iter().map(|(&m, x)| (m, x * c)).collect(),
        }
    }

    /// Multiplies by `v^d`.
    pub fn shift_nu(&self, d: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(g, v), c)| ((g, v + d), c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `g^d`.
    pub fn shift_gamma(&self, d: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(g, v), c)| ((g + d, v), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `g = 1`.
    pub fn set_gamma_one(&self) -> UnivariatePolynomial {
        UnivariatePolynomial::from_terms(self.terms.iter().map(|(&(_, v), c)| (v, c.clone())))
    }

    pub fn eval(&self, gamma: &BigInt, nu: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(g, v), c)| c * Pow::pow(gamma, g) * Pow::pow(nu, v))
            .sum()
    }

    pub fn degree_nu(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, v)| v).max()
    }

    /// Terms in canonical output order.
    pub fn ordered_terms(&self) -> Vec<(Monomial, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().map(|(&m, c)| (m, c)).collect();
        terms.sort_by(|((ga, va), _), ((gb, vb), _)| vb.cmp(va).then(ga.cmp(gb)));
        terms
    }
}

impl<'a> Add<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(ga, va), ca) in &self.terms {
            for (&(gb, vb), cb) in &rhs.terms {
                out.add_term((ga + gb, va + vb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_ops {
    ($ty:ty) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                &self + &rhs
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                &self - &rhs
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                &self * &rhs
            }
        }
    };
}

forward_owned_ops!(BivariatePolynomial);
forward_owned_ops!(UnivariatePolynomial);

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    factors: &[(&str, u32)],
) -> fmt::Result {
    let negative = c < &BigInt::zero();
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    let magnitude = c.magnitude();
    let vars: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(name, e)| match e {
            1 => name.to_string(),
            _ => format!("{name}^{e}"),
        })
        .collect();
    if vars.is_empty() {
        return write!(f, "{magnitude}");
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    write!(f, "{}", vars.join("*"))
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, ((g, v), c)) in self.ordered_terms().into_iter().enumerate() {
            write_term(f, pos == 0, c, &[("g", g), ("v", v)])?;
        }
        Ok(())
    }
}

/// A polynomial in `v` alone, e.g. a moment polynomial with `g = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UnivariatePolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl UnivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, BigInt> {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree_nu(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Result<BigInt, PolyError> {
        self.coeffs
            .values()
            .next_back()
            .cloned()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn coeff_of_nu(&self, e: u32) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Horner evaluation at an integer.
    pub fn eval(&self, n: &BigInt) -> BigInt {
        let Some(top) = self.degree_nu() else {
            return BigInt::zero();
        };
        (0..=top)
            .rev()
            .fold(BigInt::zero(), |acc, e| acc * n + self.coeff_of_nu(e))
    }

    pub fn eval_at(&self, n: u64) -> BigInt {
        self.eval(&BigInt::from(n))
    }
}

impl<'a> Add<&'a UnivariatePolynomial> for &'a UnivariatePolynomial {
    type Output = UnivariatePolynomial;

    fn add(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a UnivariatePolynomial> for &'a UnivariatePolynomial {
    type Output = UnivariatePolynomial;

    fn sub(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a UnivariatePolynomial> for &'a UnivariatePolynomial {
    type Output = UnivariatePolynomial;

    fn mul(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut out = UnivariatePolynomial::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, (&v, c)) in self.coeffs.iter().rev().enumerate() {
            write_term(f, pos == 0, c, &[("v", v)])?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BivariateTerm {
    g: u32,
    v: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct UnivariateTerm {
    v: u32,
    c: String,
}

fn parse_coeff<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    s.parse()
        .map_err(|_| E::custom(format!("invalid integer coefficient {s:?}")))
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<BivariateTerm> = self
            .ordered_terms()
            .into_iter()
            .map(|((g, v), c)| BivariateTerm {
                g,
                v,
                c: c.to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<BivariateTerm>::deserialize(deserializer)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            out.push(((t.g, t.v), parse_coeff::<D::Error>(&t.c)?));
        }
        Ok(BivariatePolynomial::from_terms(out))
    }
}

impl Serialize for UnivariatePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<UnivariateTerm> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&v, c)| UnivariateTerm {
                v,
                c: c.to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnivariatePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<UnivariateTerm>::deserialize(deserializer)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            out.push((t.v, parse_coeff::<D::Error>(&t.c)?));
        }
        Ok(UnivariatePolynomial::from_terms(out))
    }
}
