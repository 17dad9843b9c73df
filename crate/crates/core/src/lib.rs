//! Numerical spectral geometry on the noncommutative two-torus and the Moyal plane.

pub mod dilation;
pub mod error;
pub mod expr;
pub mod forms;
pub mod harness;
pub mod heat;
pub mod moyal;
pub mod numeric;
pub mod operators;
pub mod torus;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/torus.md")]
    mod torus {}
    #[doc = include_str!("../../../book/src/heat.md")]
    mod heat {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/dilation.md")]
    mod dilation {}
    #[doc = include_str!("../../../book/src/moyal.md")]
    mod moyal {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
