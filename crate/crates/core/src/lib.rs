pub mod bounds;
pub mod error;
pub mod graphs;
pub mod koszul;
pub mod models;
pub mod polytopes;
pub mod projection;
pub mod ratlin;

pub use error::{Error, Result};
