//! Runs the code in `book/src` as doc-tests. One module per chapter, so a
//! failure names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/pairs.md")]
pub mod pairs {}
#[doc = include_str!("../../../book/src/designs.md")]
pub mod designs {}
#[doc = include_str!("../../../book/src/ratio.md")]
pub mod ratio {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
