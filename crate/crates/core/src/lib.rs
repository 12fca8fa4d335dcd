//! Belief revision over ordinal conditional functions whose values are
//! ordinals below ω².

pub mod cli;
pub mod error;
pub mod logic;
pub mod ordinal;
pub mod ranking;
pub mod revision;
pub mod verify;

pub use error::{Error, Result};
pub use logic::{Formula, State, Vocabulary};
pub use ordinal::Ord2;
pub use ranking::Ranking;
pub use revision::Conditional;
