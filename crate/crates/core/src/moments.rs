//! Moment polynomials `p_{k_1..k_n}(g, v)` and finite-N statistics of trace products.
//!
//! Two independent routes compute the same polynomial: direct enumeration of
//! chord diagrams ([`moment_by_enumeration`]) and the integration-by-parts
//! recurrence ([`moment_by_recursion`])
//!
//! ```text
//! p_{k1,k2..kn} = Σ_{r=1}^{k1-1} p_{r-1, k1-r-1, k2..kn} + g Σ_{r>=2} k_r p_{k1+k_r-2, k2..^k_r..kn}
//! ```
//!
//! memoized on the sorted, zero-free index multiset. Setting `g = 1` and
//! evaluating at `v = N` gives the GUE expectation of `Tr X^{k_1} ⋯ Tr X^{k_n}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::bipoly::{BivariatePolynomial, UnivariatePolynomial};
use crate::chords::{eta_table, ChordError, EnumerationCap, VertexProfile};
use crate::numeric::bigint_ratio_to_f64;

/// Trace exponents `k_1..k_n`, kept sorted in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexMultiset {
    ks: Vec<u32>,
}

impl IndexMultiset {
    pub fn new(ks: impl IntoIterator<Item = u32>) -> Self {
        let mut ks: Vec<u32> = ks.into_iter().collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        IndexMultiset { ks }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.ks.iter().sum()
    }

    /// Half the total exponent (`m`, also the number of chords `l`).
    pub fn half_total(&self) -> u32 {
        self.total() / 2
    }

    /// Number of even entries, zeros included.
    pub fn even_count(&self) -> u32 {
        self.ks.iter().filter(|k| *k % 2 == 0).count() as u32
    }

    pub fn zero_count(&self) -> u32 {
        self.ks.iter().filter(|&&k| k == 0).count() as u32
    }

    /// The multiset with all zero entries removed.
    pub fn without_zeros(&self) -> IndexMultiset {
        IndexMultiset {
            ks: self.ks.iter().copied().filter(|&k| k > 0).collect(),
        }
    }

    /// Multiset union `self ⊎ other`.
    pub fn union(&self, other: &IndexMultiset) -> IndexMultiset {
        IndexMultiset::new(self.ks.iter().chain(other.ks.iter()).copied())
    }
}

impl From<Vec<u32>> for IndexMultiset {
    fn from(ks: Vec<u32>) -> Self {
        IndexMultiset::new(ks)
    }
}

impl<const N: usize> From<[u32; N]> for IndexMultiset {
    fn from(ks: [u32; N]) -> Self {
        IndexMultiset::new(ks)
    }
}

impl fmt::Display for IndexMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for IndexMultiset {
    type Err = std::num::ParseIntError;

    /// Comma-separated list; an empty string is the empty multiset.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IndexMultiset::empty());
        }
        s.split(',')
            .map(|k| k.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(IndexMultiset::new)
    }
}

/// Sum over all chord diagrams of `g^genus v^boundaries`.
pub fn moment_by_enumeration(
    ks: &IndexMultiset,
    cap: EnumerationCap,
) -> Result<BivariatePolynomial, ChordError> {
    if !ks.total().is_multiple_of(2) {
        return Ok(BivariatePolynomial::zero());
    }
    let positive = ks.without_zeros();
    let profile = VertexProfile::new(positive.ks().iter().map(|&k| k as usize).collect())?;
    let table = eta_table(&profile, cap)?;
    Ok(table.to_polynomial().shift_nu(ks.zero_count()))
}

/// Memo table for the recurrence, keyed by zero-free multisets.
///
/// Safe to share between threads: lookups take a read lock, inserts are
/// insert-if-absent, and no lock is held while a polynomial is computed.
#[derive(Debug, Default)]
pub struct MomentCache {
    entries: RwLock<HashMap<IndexMultiset, Arc<BivariatePolynomial>>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, key: &IndexMultiset) -> Option<Arc<BivariatePolynomial>> {
        self.entries
            .read()
            .expect("cache lock poisoned")
            .get(key)
            .cloned()
    }

    fn insert(&self, key: IndexMultiset, value: BivariatePolynomial) -> Arc<BivariatePolynomial> {
        self.entries
            .write()
            .expect("cache lock poisoned")
            .entry(key)
            .or_insert_with(|| Arc::new(value))
            .clone()
    }

    /// `p_ks(g, v)` by the recurrence.
    pub fn moment(&self, ks: &IndexMultiset) -> Arc<BivariatePolynomial> {
        if !ks.total().is_multiple_of(2) {
            return Arc::new(BivariatePolynomial::zero());
        }
        let zeros = ks.zero_count();
        if zeros > 0 {
            return Arc::new(self.moment(&ks.without_zeros()).shift_nu(zeros));
        }
        if ks.is_empty() {
            return Arc::new(BivariatePolynomial::one());
        }
        if let Some(hit) = self.get(ks) {
            return hit;
        }
        let value = self.recurse(ks);
        self.insert(ks.clone(), value)
    }

    /// One step of the recurrence, pivoting on the largest entry.
    fn recurse(&self, ks: &IndexMultiset) -> BivariatePolynomial {
        let (&k1, rest) = ks.ks().split_first().expect("nonempty multiset");

        // Splitting terms: the pivot's own cycle is cut by a chord into two.
        let mut split: BTreeMap<IndexMultiset, u64> = BTreeMap::new();
        for r in 1..k1 {
            let key = IndexMultiset::new(rest.iter().copied().chain([r - 1, k1 - r - 1]));
            *split.entry(key).or_insert(0) += 1;
        }

        // Joining terms: a chord from the pivot to one of the k_r half-edges of another cycle.
        let mut join: BTreeMap<IndexMultiset, u64> = BTreeMap::new();
        for (pos, &kr) in rest.iter().enumerate() {
            let others = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &k)| k);
            let key = IndexMultiset::new(others.chain([k1 + kr - 2]));
            *join.entry(key).or_insert(0) += u64::from(kr);
        }

        let mut out = BivariatePolynomial::zero();
        for (key, mult) in split {
            out = &out + &self.moment(&key).scale(&BigInt::from(mult));
        }
        let mut joined = BivariatePolynomial::zero();
        for (key, mult) in join {
            joined = &joined + &self.moment(&key).scale(&BigInt::from(mult));
        }
        &out + &joined.shift_gamma(1)
    }
}

/// `p_ks(g, v)` by the memoized recurrence.
pub fn moment_by_recursion(ks: &IndexMultiset, cache: &MomentCache) -> BivariatePolynomial {
    cache.moment(ks).as_ref().clone()
}

/// `p_ks(1, v)`.
pub fn moment_nu(ks: &IndexMultiset, cache: &MomentCache) -> UnivariatePolynomial {
    cache.moment(ks).set_gamma_one()
}

/// `E[Tr X^{k_1} ⋯ Tr X^{k_n}]` for the `N × N` GUE with density `∝ exp(-Tr X²/2)`.
pub fn expectation(ks: &IndexMultiset, n: u64, cache: &MomentCache) -> BigInt {
    moment_nu(ks, cache).eval_at(n)
}

/// `cov / sqrt(var_f var_g)` kept exact as a signed square root.
#[derive(Clone, Debug, PartialEq)]
pub enum Correlation {
    Defined {
        /// The covariance.
        numerator: BigInt,
        /// `var_f · var_g`, whose square root is the denominator.
        denominator_squared: BigInt,
        approx: f64,
    },
    /// One of the variances is zero.
    Undefined,
}

impl Correlation {
    pub fn approx(&self) -> Option<f64> {
        match self {
            Correlation::Defined { approx, .. } => Some(*approx),
            Correlation::Undefined => None,
        }
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correlation::Defined {
                numerator,
                denominator_squared,
                ..
            } => write!(f, "{numerator}/sqrt({denominator_squared})"),
            Correlation::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteNStatistics {
    pub n: u64,
    pub covariance: BigInt,
    pub variance_f: BigInt,
    pub variance_g: BigInt,
    pub correlation: Correlation,
}

/// Covariance, variances and correlation of `f = Π Tr X^{f_r}` and `g = Π Tr X^{g_s}` at size `N`.
pub fn finite_n_statistics(
    f: &IndexMultiset,
    g: &IndexMultiset,
    n: u64,
    cache: &MomentCache,
) -> FiniteNStatistics {
    let mean_f = expectation(f, n, cache);
    let mean_g = expectation(g, n, cache);
    let covariance = expectation(&f.union(g), n, cache) - &mean_f * &mean_g;
    let variance_f = expectation(&f.union(f), n, cache) - &mean_f * &mean_f;
    let variance_g = expectation(&g.union(g), n, cache) - &mean_g * &mean_g;
    let correlation = correlation_of(&covariance, &variance_f, &variance_g);
    FiniteNStatistics {
        n,
        covariance,
        variance_f,
        variance_g,
        correlation,
    }
}

fn correlation_of(cov: &BigInt, var_f: &BigInt, var_g: &BigInt) -> Correlation {
    if var_f.is_zero() || var_g.is_zero() {
        return Correlation::Undefined;
    }
    let denominator_squared = var_f * var_g;
    let squared = bigint_ratio_to_f64(&(cov * cov), &denominator_squared);
    let magnitude = squared.sqrt();
    let approx = match cov.sign() {
        Sign::Minus => -magnitude,
        _ => magnitude,
    };
    debug_assert!(!denominator_squared.is_negative());
    Correlation::Defined {
        numerator: cov.clone(),
        denominator_squared,
        approx,
    }
}
