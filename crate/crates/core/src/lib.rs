//! Chain-level Singer transfer, the preimage problem in the lambda algebra,
//! cohit bases of F_2[x_1..x_k] and their Σ_k / GL_k invariants.

pub mod cache;
pub mod cli;
pub mod divided;
pub mod error;
pub mod gf2;
pub mod hit;
pub mod invariants;
pub mod lambda;
pub mod poly;
pub mod preimage;
pub mod sum;
pub mod transfer;

pub use error::{Error, Result};
