//! Hypergraph product codes, their thickened extensions, and a simulator for
//! single-shot preparation of the logical plus state.

pub mod analysis;
pub mod codes;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod protocol;

pub use error::{Error, Result};
