//! Quantum density fluctuations of a fluid with a linear phonon dispersion.
//!
//! The crate computes the density correlator of the phonon vacuum, the
//! zero-point Brillouin scattering cross section, density variances in a
//! squeezed phonon state, and the change in the mean squared density
//! fluctuation caused by impenetrable boundaries (planes, slabs, a periodic
//! box, wedges, conical spaces and the focus of a parabolic mirror).
//!
//! Every closed-form result has an independent numerical route next to it:
//! regulated mode integrals, image and lattice sums, and exact ray tracing.
//!
//! ```
//! use phonon_casimir::boundaries::{variance_closed, variance_image_sum, Geometry, ImageSumOptions};
//! use phonon_casimir::media::FluidMedium;
//!
//! let water = FluidMedium::water_293k();
//! let plane = Geometry::half_space(1e-9).unwrap();
//! let closed = variance_closed(&water, &plane).unwrap();
//! let images = variance_image_sum(&water, &plane, &ImageSumOptions::default()).unwrap();
//! assert!(closed.value < 0.0);
//! assert!(((closed.value - images.value) / closed.value).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod boundaries;
pub mod error;
pub mod freefield;
pub mod media;
pub mod numerics;
pub mod parabola;
pub mod scattering;
pub mod squeezed;
pub mod variance;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
pub use media::{FluidMedium, MediumRegistry};
pub use variance::{DensityVariance, VarianceMethod};
