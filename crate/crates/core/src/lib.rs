pub mod error;
pub mod heyting;
pub mod io;
pub mod report;
pub mod sheaf;
pub mod site;
pub mod suite;
pub mod topos;
pub mod tset;

pub use error::{Error, Limit, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/heyting.md")]
    mod heyting {}
    #[doc = include_str!("../../../book/src/tsets.md")]
    mod tsets {}
    #[doc = include_str!("../../../book/src/sites.md")]
    mod sites {}
    #[doc = include_str!("../../../book/src/sheaves.md")]
    mod sheaves {}
    #[doc = include_str!("../../../book/src/topos.md")]
    mod topos {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
