//! Exact computations in graph complexes and graph operads.

pub mod cache;
pub mod calculus;
pub mod canon;
pub mod checks;
pub mod cli;
pub mod cochain;
pub mod conventions;
pub mod enumerate;
pub mod error;
pub mod flavor;
pub mod graph;
pub mod hairy;
pub mod homology;
pub mod matrix;
pub mod mc;
pub mod named;
pub mod operad;
pub mod report;
pub mod sign;

pub use canon::{canonical_form, canonicalize, CanonForm, CanonicalClass};
pub use enumerate::{enumerate_basis, enumerate_operad_basis, BasisSlice};
pub use flavor::{ComplexSpec, Flavor};
pub use graph::DirectedGraph;
pub use sign::{FlipReading, SignConvention};
