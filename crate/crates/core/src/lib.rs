pub mod cli;
pub mod combinat;
pub mod error;
pub mod jackson;
pub mod perturb;
pub mod qarith;
pub mod qfunc;
pub mod report;

pub use error::{Error, Result};
