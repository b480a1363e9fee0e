//! Classical codes, hypergraph products and thickened codes.

pub mod causal;
pub mod classical;
pub mod css;
pub mod hgp;
pub mod thicken;

pub use causal::{CausalGraph, Thickening, ThickeningKind};
pub use classical::{repetition_code, sample_full_rank_ldpc, sample_regular_ldpc, star_code, ClassicalCode};
pub use css::{logical_basis, CssCode, Pauli};
pub use hgp::{hgp_logicals, hypergraph_product, HgpCode};
pub use thicken::{kunneth_logicals, thicken, QubitSite, ThickenedCode, ThickenedLayout};
