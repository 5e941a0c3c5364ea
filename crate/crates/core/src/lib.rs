pub mod arith;
pub mod cli;
pub mod codes;
pub mod cyclo;
pub mod error;
pub mod expsums;
pub mod families;
pub mod gf;
pub mod lfsr;
pub mod niho;
pub mod search;
pub mod spectra;
mod transform;

pub use error::{Error, Result};
