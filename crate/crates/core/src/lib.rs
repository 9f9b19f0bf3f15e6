//! Weight spectra and minimum-distance analysis for regular LDPC code
//! ensembles over finite fields.

pub mod bounds;
pub mod error;
pub mod figures;
pub mod gf;
pub mod growth;
pub mod real;
pub mod root;
pub mod sim;
pub mod spectrum;

pub use error::{Error, Result};
pub use spectrum::{EnsembleParams, SpectrumTable};
