//! Cube-split quantizers for lines in real and complex space.
//!
//! A line through the origin of `R^d` or `C^D` is represented by a unit-norm
//! spanning vector. The quantizers here first pick the canonical basis vector
//! closest to the line (the coarse cell), then compand the line's local
//! coordinates onto the unit cube and quantize each cube coordinate with an
//! independent uniform scalar quantizer. Encoding and decoding cost is linear
//! in the dimension and independent of the number of bits.
//!
//! Modules:
//! - [`line`]: line types, chordal distances and uniform sampling.
//! - [`compander`]: maps between coarse cells and the unit cube.
//! - [`quantizer`]: the real quantizer and the two complex schemes, with
//!   bit-exact codeword packing.
//! - [`baselines`]: exhaustive codebook search, Fourier and scalar baselines,
//!   and the high-resolution distortion bounds.
//! - [`bench`]: Monte Carlo distortion estimation, KS uniformity tests and CSV
//!   sweeps.

pub mod baselines;
pub mod bench;
pub mod compander;
mod error;
pub mod line;
pub mod quantizer;
pub mod rng;
pub mod textio;

pub use error::{Error, Result};
pub use line::{ComplexLine, GrassmannLine, RealLine};
pub use num_complex::Complex64;
pub use quantizer::{BitAllocation, BitString, CubeSplit, QuantizerConfig, Scheme};
pub use rng::SeededRng;
