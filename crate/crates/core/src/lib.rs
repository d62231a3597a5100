pub mod acp;
pub mod action_algebra;
pub mod dsl;
pub mod error;
pub mod event_algebra;
pub mod laws;
pub mod model;
pub mod oracles;
pub mod process_algebra;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
