//! Exact enumeration, pattern surgery, multi-valued map audits and pivot
//! sampling for self-avoiding walks on the hypercubic lattice `Z^d`.
//!
//! Counts are arbitrary precision. Anything derived from a count is generic
//! over [`Weight`], which covers exact rationals as well as `f32`/`f64`.

pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod mvm;
pub mod patterns;
pub mod sampler;
pub mod scalar;
pub mod walk;

pub use enumerate::{CountTable, Distribution, EnumSpec, Enumerator, WalkClass};
pub use error::{Result, SawError};
pub use lattice::{Point, Step, Symmetry};
pub use scalar::{Count, Rational, Weight};
pub use walk::Walk;

/// Distribution with exact rational probabilities.
pub type ExactDistribution<K> = Distribution<K, Rational>;
/// Distribution with `f64` probabilities.
pub type FloatDistribution<K> = Distribution<K, f64>;
