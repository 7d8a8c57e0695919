//! mdbook cannot run a book's code blocks as tests against a local crate,
//! so every chapter is included here as a doc comment and `cargo test --doc`
//! does the work. One module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/getting-started.md")]
pub mod getting_started {}

#[doc = include_str!("../../../book/src/special-functions.md")]
pub mod special_functions {}

#[doc = include_str!("../../../book/src/fractal-series.md")]
pub mod fractal_series {}

#[doc = include_str!("../../../book/src/atoms.md")]
pub mod atoms {}

#[doc = include_str!("../../../book/src/spectral-domain.md")]
pub mod spectral_domain {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/ode-solving.md")]
pub mod ode_solving {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/syntax.md")]
pub mod syntax {}
