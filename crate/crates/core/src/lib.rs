pub mod catalog;
pub mod error;
pub mod exactlin;
pub mod filtrations;
pub mod induced;
pub mod lie;
pub mod mhs;
pub mod orbit;
pub mod probe;
pub mod verdict;

pub use error::{HodgeError, Result};
pub use verdict::Verdict;
