pub mod algebra;
pub mod bounds;
pub mod curves;
pub mod error;
pub mod expansion;
pub mod fano;
pub mod par;
pub mod rng;
pub mod unirational;
pub mod varieties;

pub use error::{Error, ErrorClass, Result};
