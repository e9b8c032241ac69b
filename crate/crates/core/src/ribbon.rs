//! Ribbon graphs as permutation pairs.
//!
//! A ribbon graph on `H` half-edges is a pair `(sigma, kappa)` of permutations of
//! `0..H`: the cycles of `sigma` are the vertices (with their cyclic order) and
//! `kappa` is a fixed-point-free involution pairing half-edges into edges.
//! Boundary components of the thickened surface are the cycles of
//! `beta = sigma ∘ kappa` (apply `kappa`, then `sigma`).

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RibbonError {
    #[error("images do not form a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("half-edge count mismatch: sigma acts on {sigma}, kappa on {kappa}")]
    SizeMismatch { sigma: usize, kappa: usize },
    #[error("edge permutation is not an involution")]
    NotInvolution,
    #[error("edge permutation fixes half-edge {0}")]
    FixedHalfEdge(usize),
    #[error("no edge with identifier {0}")]
    UnknownEdge(usize),
    #[error("vertices + edges - boundaries = {0} is not a nonnegative even number")]
    CorruptedGenus(i64),
}

/// A bijection of `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (0..len).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, RibbonError> {
        let len = images.len();
        let mut seen = vec![false; len];
        for &i in &images {
            if i >= len || seen[i] {
                return Err(RibbonError::NotAPermutation(len));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[Vec<usize>]) -> Result<Self, RibbonError> {
        let mut images: Vec<usize> = (0..len).collect();
        let mut touched = vec![false; len];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                if a >= len || touched[a] {
                    return Err(RibbonError::NotAPermutation(len));
                }
                touched[a] = true;
                images[a] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            first.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            images: first.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles, each starting at its smallest element, listed by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| self.images[j] == i)
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation, fixed points included: `(1 2)(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (pos, h) in cycle.iter().enumerate() {
                if pos > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", h + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Identifies an edge by the smaller half-edge of its `kappa`-orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub boundaries: usize,
    pub genus: usize,
    /// `2 - V - E`, the Euler characteristic of the sphere-with-strips surface.
    pub euler_characteristic: i64,
}

/// How an edge sits in its graph, and what contracting it does to the boundary count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionCase {
    /// The edge joins vertices `(h h_1..h_k)` and `(h' h'_1..h'_k')`.
    Joining { k: usize, k_prime: usize },
    /// The edge is a loop at `(h h_1..h_k h' h'_1..h'_k')`.
    Loop { k: usize, k_prime: usize },
}

impl ContractionCase {
    /// Predicted change of `b` under contraction.
    pub fn boundary_delta(self) -> i64 {
        match self {
            ContractionCase::Joining { k: 0, k_prime: 0 } => -1,
            ContractionCase::Joining { .. } => 0,
            ContractionCase::Loop { k, k_prime } => -((k == 0) as i64) - ((k_prime == 0) as i64),
        }
    }

    /// Predicted change of the genus under contraction.
    pub fn genus_delta(self) -> i64 {
        match self {
            ContractionCase::Joining { .. } => -1,
            ContractionCase::Loop { .. } => 0,
        }
    }

    pub fn is_loop(self) -> bool {
        matches!(self, ContractionCase::Loop { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    sigma: Permutation,
    kappa: Permutation,
}

impl RibbonGraph {
    pub fn new(sigma: Permutation, kappa: Permutation) -> Result<Self, RibbonError> {
        if sigma.len() != kappa.len() {
            return Err(RibbonError::SizeMismatch {
                sigma: sigma.len(),
                kappa: kappa.len(),
            });
        }
        if let Some(h) = (0..kappa.len()).find(|&h| kappa.apply(h) == h) {
            return Err(RibbonError::FixedHalfEdge(h));
        }
        if !kappa.is_involution() {
            return Err(RibbonError::NotInvolution);
        }
        Ok(RibbonGraph { sigma, kappa })
    }

    /// The graph with no half-edges. Only produced by contraction.
    pub fn empty() -> Self {
        RibbonGraph {
            sigma: Permutation::identity(0),
            kappa: Permutation::identity(0),
        }
    }

    /// A uniformly random vertex permutation and edge matching on `2 * edges` half-edges.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, edges: usize) -> Self {
        let half_edges = 2 * edges;
        let mut sigma: Vec<usize> = (0..half_edges).collect();
        sigma.shuffle(rng);
        let mut order: Vec<usize> = (0..half_edges).collect();
        order.shuffle(rng);
        let mut kappa = vec![0; half_edges];
        for pair in order.chunks_exact(2) {
            kappa[pair[0]] = pair[1];
            kappa[pair[1]] = pair[0];
        }
        RibbonGraph {
            sigma: Permutation { images: sigma },
            kappa: Permutation { images: kappa },
        }
    }

    pub fn half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn kappa(&self) -> &Permutation {
        &self.kappa
    }

    /// `beta = sigma ∘ kappa`; its cycles are the boundary components.
    pub fn boundary_permutation(&self) -> Permutation {
        self.sigma.compose(&self.kappa)
    }

    /// The dual graph `(H, beta, kappa)`.
    pub fn dual(&self) -> RibbonGraph {
        RibbonGraph {
            sigma: self.boundary_permutation(),
            kappa: self.kappa.clone(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.half_edges())
            .filter(|&h| h < self.kappa.apply(h))
            .map(EdgeId)
    }

    pub fn invariants(&self) -> Result<SurfaceInvariants, RibbonError> {
        let vertices = self.sigma.cycle_count();
        let edges = self.half_edges() / 2;
        let boundaries = self.boundary_permutation().cycle_count();
        let twice_genus = vertices as i64 + edges as i64 - boundaries as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(RibbonError::CorruptedGenus(twice_genus));
        }
        Ok(SurfaceInvariants {
            vertices,
            edges,
            boundaries,
            genus: (twice_genus / 2) as usize,
            euler_characteristic: 2 - vertices as i64 - edges as i64,
        })
    }

    fn check_edge(&self, e: EdgeId) -> Result<(usize, usize), RibbonError> {
        let h = e.0;
        if h >= self.half_edges() || self.kappa.apply(h) < h {
            return Err(RibbonError::UnknownEdge(h));
        }
        Ok((h, self.kappa.apply(h)))
    }

    /// Classifies the edge by the vertex cycles around its two half-edges.
    pub fn contraction_case(&self, e: EdgeId) -> Result<ContractionCase, RibbonError> {
        let (h, h_prime) = self.check_edge(e)?;
        // walk sigma from h until h' or back to h
        let mut steps = 0;
        let mut x = self.sigma.apply(h);
        while x != h && x != h_prime {
            steps += 1;
            x = self.sigma.apply(x);
        }
        if x == h_prime {
            let mut rest = 0;
            let mut y = self.sigma.apply(h_prime);
            while y != h {
                rest += 1;
                y = self.sigma.apply(y);
            }
            Ok(ContractionCase::Loop {
                k: steps,
                k_prime: rest,
            })
        } else {
            let mut other = 0;
            let mut y = self.sigma.apply(h_prime);
            while y != h_prime {
                other += 1;
                y = self.sigma.apply(y);
            }
            Ok(ContractionCase::Joining {
                k: steps,
                k_prime: other,
            })
        }
    }

    /// Contracts an edge by deleting its half-edges from the dual graph.
    ///
    /// Surviving half-edges are renumbered `0..H-2` keeping their relative order.
    pub fn contract_edge(&self, e: EdgeId) -> Result<RibbonGraph, RibbonError> {
        let (h, h_prime) = self.check_edge(e)?;
        let beta = self.boundary_permutation();
        let removed = |x: usize| x == h || x == h_prime;
        let relabel = |x: usize| x - (x > h) as usize - (x > h_prime) as usize;

        let remaining = self.half_edges() - 2;
        let mut beta_images = vec![0; remaining];
        let mut kappa_images = vec![0; remaining];
        for x in (0..self.half_edges()).filter(|&x| !removed(x)) {
            let mut y = beta.apply(x);
            while removed(y) {
                y = beta.apply(y);
            }
            beta_images[relabel(x)] = relabel(y);
            kappa_images[relabel(x)] = relabel(self.kappa.apply(x));
        }
        let beta = Permutation {
            images: beta_images,
        };
        let kappa = Permutation {
            images: kappa_images,
        };
        // sigma = beta ∘ kappa^{-1}, and kappa is its own inverse
        let sigma = beta.compose(&kappa);
        Ok(RibbonGraph { sigma, kappa })
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={} kappa={}", self.sigma, self.kappa)
    }
}
