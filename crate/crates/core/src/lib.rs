//! Exact kernel for rank-one discrete valuations of k((X1,...,Xn)) presented
//! through an embedding into Delta[[t]].
//!
//! The layers build on each other: exact arithmetic in the coefficient field
//! Delta ([`field`]), lazy power series over Delta ([`series`]), embeddings
//! and value computation ([`embedding`]), coordinate transformations
//! ([`transform`]), and the top-level valuation algorithms ([`algorithms`]).

pub mod algorithms;
pub mod checks;
pub mod embedding;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod series;
pub mod transform;

pub use error::{Error, Result};
