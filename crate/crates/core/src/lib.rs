pub mod asymptotics;
pub mod ball;
pub mod contig;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod hyper;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-algebra.md")]
    mod exact_algebra {}
    #[doc = include_str!("../../../book/src/balls.md")]
    mod balls {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/contiguity.md")]
    mod contiguity {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
