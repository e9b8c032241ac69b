//! Exact mixed moments of traces of GUE matrices.
//!
//! The moment `E[Tr X^{k_1} ⋯ Tr X^{k_n}]` of an `N×N` GUE matrix is a polynomial
//! in `N`. This crate computes it three ways: by enumerating chord diagrams and
//! counting the surfaces they glue into, by a contraction recurrence on bivariate
//! polynomials, and by Monte Carlo sampling. It also provides closed forms for
//! leading and subleading coefficients and large-N correlation limits.

pub mod asymptotics;
pub mod bipoly;
pub mod chords;
pub mod cli;
pub mod mc;
pub mod moments;
pub mod numeric;
pub mod ribbon;

pub use bipoly::{BivariatePolynomial, UnivariatePolynomial};
pub use chords::{ChordDiagram, ChordDiagrams, EnumerationCap, EtaTable, VertexProfile};
pub use moments::{IndexMultiset, MomentCache};
pub use ribbon::{Permutation, RibbonGraph};
