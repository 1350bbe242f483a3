//! Analysis of substitutions of some primitive components: the component
//! chain, block Perron-Frobenius data of the auxiliary substitutions, the
//! decomposition of the subshift into invariant pieces, and invariant
//! measures of cylinder sets.

pub mod auxiliary;
pub mod classify;
pub mod cli;
pub mod error;
pub mod input;
pub mod linalg;
pub mod measures;
pub mod poly;
pub mod report;
pub mod spectral;
pub mod structure;
pub mod words;

pub use error::{Error, Result};
pub use words::{Alphabet, Substitution, Word};
