pub mod cli;
pub mod elicitation;
pub mod error;
pub mod evaluation;
pub mod manipulation;
pub mod profile;
pub mod reductions;
pub mod rules;
pub(crate) mod search;

pub use error::{Error, Result};
pub use search::DEFAULT_CAP;
