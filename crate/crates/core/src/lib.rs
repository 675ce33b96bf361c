//! Gaussian Cayley matrices of finite groups.
//!
//! Builds finite groups as Cayley tables, samples the real and complex
//! Gaussian series `Σ_g x_g ρ(g)` over the left regular representation,
//! computes the quantities that appear in noncommutative Khintchine type
//! bounds, and searches for sign vectors with small `‖Σ_g ε_g ρ(g)‖`.

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod group;
pub mod linalg;
pub mod repr;
pub mod sampler;
pub mod spencer;
pub mod stats;

pub use error::{Error, Result};
