//! The guide in `book/src`, compiled so that its snippets run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/media.md")]
pub mod media {}
#[doc = include_str!("../../../book/src/free-field.md")]
pub mod free_field {}
#[doc = include_str!("../../../book/src/scattering.md")]
pub mod scattering {}
#[doc = include_str!("../../../book/src/squeezed.md")]
pub mod squeezed {}
#[doc = include_str!("../../../book/src/boundaries.md")]
pub mod boundaries {}
#[doc = include_str!("../../../book/src/parabola.md")]
pub mod parabola {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
