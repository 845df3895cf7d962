//! The guide in `book/`, compiled so its examples run as doctests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}
#[doc = include_str!("../../../book/src/stallings.md")]
pub mod stallings {}
#[doc = include_str!("../../../book/src/remnant.md")]
pub mod remnant {}
#[doc = include_str!("../../../book/src/dtc.md")]
pub mod dtc {}
#[doc = include_str!("../../../book/src/fbc.md")]
pub mod fbc {}
#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}
#[doc = include_str!("../../../book/src/attack.md")]
pub mod attack {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
