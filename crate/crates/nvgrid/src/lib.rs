//! Exact computation in the higher-dimensional Thompson groups nV.
//!
//! Elements are bijections of the unit n-cube that map the cells of one
//! dyadic pattern onto the blocks of another by coordinate-wise affine
//! maps.  The crate provides:
//!
//! - exact dyadic addresses, blocks, patterns and colored subdivision
//!   trees ([`address`], [`block`], [`pattern`], [`tree`]);
//! - the group: composition, inversion, evaluation, a decidable equality
//!   oracle and seeded random elements ([`element`]);
//! - the unique reduced grid diagram used as a canonical form ([`grid`]);
//! - algebraic normal-form words over the infinite generating set of 2V,
//!   with verified rewriting toward Brin's finite set ([`words`]);
//! - word-length bound estimates and counting experiments ([`metrics`]);
//! - the text formats shared by the command-line tools ([`io`]).
//!
//! Everything is immutable and deterministic: operations are pure
//! functions of their inputs, random generation is a pure function of the
//! seed, and canonical forms are bit-stable across runs.

pub mod address;
pub mod block;
pub mod element;
pub mod error;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod pattern;
pub mod tree;
pub mod words;

pub use address::{DyadicAddress, DyadicFraction};
pub use block::{DyadicBlock, Point};
pub use element::Element;
pub use error::{Error, Result};
pub use grid::{canon, gridify, GridDiagram, ReducedGridDiagram, Side};
pub use pattern::{product_pattern, Pattern};
pub use tree::{composite_tree, ColoredTree, CoordTree};
pub use words::{
    emit_positive, emit_tree_word, interpret, leaf_exponents, normal_form, perm_word, shift,
    Family, Generator, GeneratorTable, RuleTable, Word,
};
