//! Cayley graphs on dihedral groups: construction, classification of
//! connection sets, structural decomposition, exact automorphism groups,
//! and machine-checked verification of the associated structure and
//! automorphism theorems.

pub mod autsearch;
pub mod connset;
pub mod error;
pub mod graphs;
pub mod modular_dihedral;
pub mod permgroup;
pub mod structure;
pub mod theorems;

pub use error::{Error, Result};
