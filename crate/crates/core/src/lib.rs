//! Exact arithmetic and Fourier analysis on the cyclic group Z_N, plus the
//! additive-combinatorics machinery built on top of it: Bohr sets, random
//! sparse set models with pseudorandomness certificates, the structured/random
//! decomposition, arithmetic-structure detectors, and the density-increment
//! iteration.
//!
//! Everything here is deterministic: random sets are produced by a
//! counter-based generator keyed by `(seed, stream, element)`, and every
//! derived quantity is a pure function of its inputs.

pub mod bitset;
pub mod bohr;
pub mod decomposition;
pub mod fourier;
pub mod increment;
pub mod oracle;
pub mod random_model;
pub mod structures;
pub mod tol;

pub use fourier::{BalancedFunction, DensityFunction, Spectrum};
