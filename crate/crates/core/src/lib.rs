//! Exact field descent for fast matrix-multiplication schemes.
//!
//! Given a bilinear `<m,n,p,r>` scheme with entries in `Q[sqrt d]`, this crate
//! decides whether a De-Groote-equivalent scheme over `Q` exists, constructs
//! it when it does, and searches rational schemes for trace obstructions to
//! integer equivalents.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod fixtures;
pub mod linalg;
pub mod obstruct;
pub mod rationalize;
pub mod sample;
pub mod scheme;

pub use error::{Error, Result};
pub use exactnum::{FieldDesc, QElem, Rat};
pub use linalg::ExactMat;
pub use scheme::{Dims, Scheme, TransformTriple, Triple, Variant};
