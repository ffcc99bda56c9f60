//! Incremental fill-reducing orderings for sparse symmetric positive-definite
//! systems whose sparsity pattern changes a little between solves.
//!
//! The graph of the matrix is decomposed once into a binary tree of nested
//! dissection separators ([`hgd`]). When the pattern changes, the
//! [`synchronizer`] confines the change to the smallest affected sub-trees and
//! re-decomposes only those, and the [`assembler`] recomputes local orderings
//! just for the invalidated tree nodes. [`Parth`] wraps the whole cycle.
//!
//! ```
//! use parth::{synthetic, Parth, ParthConfig};
//!
//! let (pattern, _values) = synthetic::grid_laplacian(16, 16).unwrap();
//! let mut parth = Parth::new(ParthConfig::default());
//! let first = parth.compute(&pattern, None).unwrap();
//! let again = parth.compute(&pattern, None).unwrap();
//! assert_eq!(again.reuse_ratio(), 1.0);
//! assert_eq!(first.permutation(), again.permutation());
//! ```

pub mod assembler;
pub mod driver;
pub mod engine;
pub mod error;
pub mod graph;
pub mod hgd;
pub mod io;
pub mod metrics;
pub mod ordering;
pub mod separator;
pub mod symbolic;
pub mod synchronizer;
pub mod synthetic;

pub use engine::{full_recompute, MaxLevel, Parth, ParthConfig, StepOutcome};
pub use error::{Error, Result};
pub use graph::{NodeMap, SparsityPattern, SymGraph};
pub use ordering::Permutation;
