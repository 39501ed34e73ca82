//! Exact computation in KLR and VV algebras, path algebras and their tensor products.

pub mod engine;
pub mod error;
pub mod expr;
pub mod klr_vv;
pub mod linalg;
pub mod morita;
pub mod path_tensor;
pub mod quiver;
pub mod report;
pub mod series;
pub mod suite;
pub mod weyl;

pub use error::{Error, Result};
