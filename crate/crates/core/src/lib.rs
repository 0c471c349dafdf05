pub mod cat2;
pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fincat;
pub mod prestack;
pub mod search;
pub mod site;
pub mod stacks;

pub use error::{Error, Result};
