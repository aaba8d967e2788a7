//! The guide in `book/src`, compiled so that every snippet runs as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/pareto.md")]
pub mod pareto {}

#[doc = include_str!("../../../book/src/scalarization.md")]
pub mod scalarization {}

#[doc = include_str!("../../../book/src/woo.md")]
pub mod woo_loop {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
