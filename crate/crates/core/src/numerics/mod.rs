//! Numerical building blocks: quadrature, root bracketing, sequence
//! acceleration and compensated summation.

pub mod accel;
pub mod quad;
pub mod roots;
pub mod sum;

pub use accel::{iterated_mean, richardson_even, Extrapolated};
pub use quad::{integrate, QuadOptions, QuadResult};
pub use roots::{brent, BrentOptions};
pub use sum::NeumaierSum;
