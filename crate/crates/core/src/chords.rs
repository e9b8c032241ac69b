//! Chord diagrams, the ribbon graphs they induce, and genus/boundary tallies.
//!
//! A chord diagram on `2l` points is a perfect matching. Paired with a vertex
//! profile `(k_1, .., k_n)` summing to `2l` it defines a ribbon graph whose
//! vertices are the consecutive runs of `k_1, .., k_n` points and whose edges
//! are the chords. Enumeration is streaming: memory is `O(l)` regardless of the
//! `(2l-1)!!` diagrams visited.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::bipoly::BivariatePolynomial;
use crate::ribbon::{Permutation, RibbonGraph};

const UNMATCHED: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChordError {
    #[error("{points} points exceed the enumeration cap of {cap}; raise it with --cap")]
    CapExceeded { points: usize, cap: usize },
    #[error("chord diagrams need an even number of points, got {0}")]
    OddPoints(usize),
    #[error("vertex profile entries must be positive")]
    ZeroEntry,
    #[error("profile sums to {profile} but the diagram has {points} points")]
    SizeMismatch { profile: usize, points: usize },
    #[error("not a perfect matching")]
    InvalidMatching,
    #[error("first partner {0} is out of range")]
    InvalidPartner(usize),
}

/// Upper bound on the number of points an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCap {
    pub max_points: usize,
}

impl EnumerationCap {
    pub const DEFAULT_POINTS: usize = 20;

    pub fn new(max_points: usize) -> Self {
        EnumerationCap { max_points }
    }

    pub fn check(self, points: usize) -> Result<(), ChordError> {
        if points > self.max_points {
            Err(ChordError::CapExceeded {
                points,
                cap: self.max_points,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap::new(Self::DEFAULT_POINTS)
    }
}

/// A perfect matching of `0..2l`; `mate[i]` is the partner of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram {
    mate: Vec<usize>,
}

impl ChordDiagram {
    pub fn from_mate(mate: Vec<usize>) -> Result<Self, ChordError> {
        let n = mate.len();
        let ok = mate
            .iter()
            .enumerate()
            .all(|(i, &j)| j < n && j != i && mate[j] == i);
        if !ok {
            return Err(ChordError::InvalidMatching);
        }
        Ok(ChordDiagram { mate })
    }

    /// Builds a diagram from 0-based chords.
    pub fn from_pairs(points: usize, pairs: &[(usize, usize)]) -> Result<Self, ChordError> {
        let mut mate = vec![UNMATCHED; points];
        for &(a, b) in pairs {
            if a >= points || b >= points || mate[a] != UNMATCHED || mate[b] != UNMATCHED {
                return Err(ChordError::InvalidMatching);
            }
            mate[a] = b;
            mate[b] = a;
        }
        ChordDiagram::from_mate(mate)
    }

    pub fn points(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self) -> &[usize] {
        &self.mate
    }

    /// Chords as `(i, j)` with `i < j`, ordered by `i`.
    pub fn chords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
    }
}

impl fmt::Display for ChordDiagram {
    /// 1-based: `{1,3}{2,4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.chords() {
            write!(f, "{{{},{}}}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Streaming enumeration of all perfect matchings of `0..2l`.
///
/// Order: the smallest unmatched point is always paired next, with its partner
/// running through the unmatched points in increasing order.
pub struct ChordDiagrams {
    mate: Vec<usize>,
    stack: Vec<(usize, usize)>,
    first_partner: Option<usize>,
    started: bool,
    done: bool,
}

impl ChordDiagrams {
    pub fn new(l: usize, cap: EnumerationCap) -> Result<Self, ChordError> {
        cap.check(2 * l)?;
        Ok(ChordDiagrams {
            mate: vec![UNMATCHED; 2 * l],
            stack: Vec::with_capacity(l),
            first_partner: None,
            started: false,
            done: false,
        })
    }

    /// Only the diagrams in which point 0 is paired with `partner`.
    ///
    /// The sub-streams for `partner in 1..2l` partition the full enumeration.
    pub fn with_first_partner(
        l: usize,
        partner: usize,
        cap: EnumerationCap,
    ) -> Result<Self, ChordError> {
        if partner == 0 || partner >= 2 * l {
            return Err(ChordError::InvalidPartner(partner));
        }
        let mut it = ChordDiagrams::new(l, cap)?;
        it.first_partner = Some(partner);
        Ok(it)
    }

    fn smallest_unmatched_after(&self, from: usize) -> Option<usize> {
        (from..self.mate.len()).find(|&i| self.mate[i] == UNMATCHED)
    }

    fn pair(&mut self, a: usize, b: usize) {
        self.mate[a] = b;
        self.mate[b] = a;
        self.stack.push((a, b));
    }

    fn fill(&mut self) {
        while let Some(a) = self.smallest_unmatched_after(0) {
            let b = match (self.stack.is_empty(), self.first_partner) {
                (true, Some(p)) => p,
                _ => self
                    .smallest_unmatched_after(a + 1)
                    .expect("an even number of points is left unmatched"),
            };
            self.pair(a, b);
        }
    }

    /// Advances to the next diagram and lends its `mate` array.
    pub fn next_mate(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(&self.mate);
        }
        loop {
            let Some((a, b)) = self.stack.pop() else {
                self.done = true;
                return None;
            };
            self.mate[a] = UNMATCHED;
            self.mate[b] = UNMATCHED;
            let pinned = self.stack.is_empty() && self.first_partner.is_some();
            if pinned {
                continue;
            }
            if let Some(next) = self.smallest_unmatched_after(b + 1) {
                self.pair(a, next);
                self.fill();
                return Some(&self.mate);
            }
        }
    }
}

impl Iterator for ChordDiagrams {
    type Item = ChordDiagram;

    fn next(&mut self) -> Option<ChordDiagram> {
        self.next_mate().map(|mate| ChordDiagram {
            mate: mate.to_vec(),
        })
    }
}

/// Vertex valencies `(k_1, .., k_n)`: positive, with even sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexProfile {
    ks: Vec<usize>,
}

impl VertexProfile {
    pub fn new(ks: Vec<usize>) -> Result<Self, ChordError> {
        if ks.contains(&0) {
            return Err(ChordError::ZeroEntry);
        }
        let total: usize = ks.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(ChordError::OddPoints(total));
        }
        Ok(VertexProfile { ks })
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn vertex_count(&self) -> usize {
        self.ks.len()
    }

    pub fn points(&self) -> usize {
        self.ks.iter().sum()
    }

    /// The vertex permutation: consecutive cycles of lengths `k_1, .., k_n`.
    pub fn vertex_images(&self) -> Vec<usize> {
        let mut images = Vec::with_capacity(self.points());
        let mut start = 0;
        for &k in &self.ks {
            images.extend((start + 1..start + k).chain(std::iter::once(start)));
            start += k;
        }
        images
    }
}

/// The ribbon graph `Γ_{k_1..k_n}(c)`.
pub fn build_graph(c: &ChordDiagram, profile: &VertexProfile) -> Result<RibbonGraph, ChordError> {
    if c.points() != profile.points() {
        return Err(ChordError::SizeMismatch {
            profile: profile.points(),
            points: c.points(),
        });
    }
    let sigma = Permutation::from_images(profile.vertex_images())
        .expect("consecutive cycles form a permutation");
    let kappa = Permutation::from_images(c.mate.clone()).expect("a matching is a permutation");
    Ok(
        RibbonGraph::new(sigma, kappa)
            .expect("a perfect matching is a fixed-point-free involution"),
    )
}

/// Cycle count of `x -> sigma[mate[x]]` without allocating.
fn boundary_count(sigma: &[usize], mate: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut count = 0;
    for start in 0..mate.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = sigma[mate[x]];
        }
    }
    count
}

/// Counts `η^{g,b}` of chord diagrams by the genus and boundary count of their graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaTable {
    profile: VertexProfile,
    counts: BTreeMap<(usize, usize), u64>,
}

impl EtaTable {
    pub fn profile(&self) -> &VertexProfile {
        &self.profile
    }

    /// Populated cells keyed by `(genus, boundaries)`.
    pub fn counts(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.counts
    }

    pub fn get(&self, genus: usize, boundaries: usize) -> u64 {
        self.counts.get(&(genus, boundaries)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `η^{g,*}`.
    pub fn by_genus(&self, genus: usize) -> u64 {
        self.counts
            .iter()
            .filter(|((g, _), _)| *g == genus)
            .map(|(_, c)| c)
            .sum()
    }

    /// `η^{*,b}`.
    pub fn by_boundaries(&self, boundaries: usize) -> u64 {
        self.counts
            .iter()
            .filter(|((_, b), _)| *b == boundaries)
            .map(|(_, c)| c)
            .sum()
    }

    /// `Σ η^{g,b} γ^g ν^b`.
    pub fn to_polynomial(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(
            self.counts
                .iter()
                .map(|(&(g, b), &c)| ((g as u32, b as u32), BigInt::from(c))),
        )
    }
}

fn tally(profile: &VertexProfile, mut diagrams: ChordDiagrams) -> BTreeMap<(usize, usize), u64> {
    let sigma = profile.vertex_images();
    let n = profile.vertex_count();
    let l = profile.points() / 2;
    let mut seen = vec![false; profile.points()];
    let mut counts = BTreeMap::new();
    while let Some(mate) = diagrams.next_mate() {
        let b = boundary_count(&sigma, mate, &mut seen);
        let g = (n + l - b) / 2;
        *counts.entry((g, b)).or_insert(0) += 1;
    }
    counts
}

/// Tabulates `η^{g,b}` over every chord diagram, splitting work on the partner of point 0.
pub fn eta_table(profile: &VertexProfile, cap: EnumerationCap) -> Result<EtaTable, ChordError> {
    let points = profile.points();
    cap.check(points)?;
    let l = points / 2;
    let counts = if l < 4 {
        tally(profile, ChordDiagrams::new(l, cap)?)
    } else {
        (1..points)
            .into_par_iter()
            .map(|partner| {
                let diagrams = ChordDiagrams::with_first_partner(l, partner, cap)
                    .expect("partner lies in 1..2l");
                tally(profile, diagrams)
            })
            .reduce(BTreeMap::new, merge_counts)
    };
    Ok(EtaTable {
        profile: profile.clone(),
        counts,
    })
}

/// Single-threaded variant of [`eta_table`]; yields the identical table.
pub fn eta_table_serial(
    profile: &VertexProfile,
    cap: EnumerationCap,
) -> Result<EtaTable, ChordError> {
    let l = profile.points() / 2;
    let counts = tally(profile, ChordDiagrams::new(l, cap)?);
    Ok(EtaTable {
        profile: profile.clone(),
        counts,
    })
}

fn merge_counts(
    mut a: BTreeMap<(usize, usize), u64>,
    b: BTreeMap<(usize, usize), u64>,
) -> BTreeMap<(usize, usize), u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}
