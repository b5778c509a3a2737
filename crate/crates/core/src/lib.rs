//! Arbitrary-precision prolate and oblate spheroidal wave functions.

pub mod cache;
pub mod charvalue;
pub mod coefficients;
pub mod error;
pub mod functions;
pub mod numerics;
pub mod params;

pub use error::{Error, Result};
pub use numerics::BigReal;
pub use params::{Params, Parity, SpheroidalKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/library.md")]
    mod library {}
    #[doc = include_str!("../../../book/src/radial.md")]
    mod radial {}
    #[doc = include_str!("../../../book/src/cache.md")]
    mod cache {}
}
