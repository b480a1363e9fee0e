//! Linear algebra over GF(2).

pub mod coset;
pub mod dense;
pub mod enumerate;
pub mod io;
pub mod matrix;
pub mod vector;

pub use coset::{min_weight_coset_rep, CosetMode, CosetReducer, CosetRep, ShortCosetReducer};
pub use dense::{BitMatrix, RowSpace, Solver};
pub use matrix::BinaryMatrix;
pub use vector::BinaryVector;
